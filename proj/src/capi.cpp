// extern "C" surface over the C++ core. Exceptions stop here and become
// status codes plus a thread-local message.

#include "tailcmp/tailcmp.h"

#include "tailcmp/dist.hpp"
#include "tailcmp/errors.hpp"
#include "tailcmp/predicates.hpp"
#include "tailcmp/sweep.hpp"
#include "tailcmp/theorem.hpp"

#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <variant>
#include <vector>

using namespace tailcmp;
using nlohmann::json;

struct tailcmp_dist {
  std::variant<FiniteDist, PoissonSpec> value;
};

struct tailcmp_options {
  Precision precision = Precision::defaults();
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
};

struct tailcmp_report {
  tailcmp_outcome outcome = TAILCMP_UNRESOLVED;
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string last_error;

tailcmp_status fail(tailcmp_status code, const char *what) {
  last_error = what;
  return code;
}

// Runs `body`, translating the library's exception hierarchy.
template <class F> tailcmp_status guarded(F &&body) {
  try {
    body();
    last_error.clear();
    return TAILCMP_OK;
  } catch (const ParseError &e) {
    return fail(TAILCMP_E_PARSE, e.what());
  } catch (const PreconditionError &e) {
    return fail(TAILCMP_E_PRECONDITION, e.what());
  } catch (const DomainError &e) {
    return fail(TAILCMP_E_PRECONDITION, e.what());
  } catch (const json::exception &e) {
    return fail(TAILCMP_E_PARSE, e.what());
  } catch (const std::bad_alloc &) {
    return fail(TAILCMP_E_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(TAILCMP_E_INTERNAL, e.what());
  }
}

tailcmp_outcome outcome_of(VerdictTag t) {
  switch (t) {
  case VerdictTag::Holds:
    return TAILCMP_HOLDS;
  case VerdictTag::Fails:
    return TAILCMP_FAILS;
  case VerdictTag::Unresolved:
    break;
  }
  return TAILCMP_UNRESOLVED;
}

const tailcmp_options &opts_or_default(const tailcmp_options *opts) {
  static const tailcmp_options defaults;
  return opts ? *opts : defaults;
}

tailcmp_report *make_report(VerdictTag tag, const json &j, std::string csv = {}) {
  auto *r = new tailcmp_report;
  r->outcome = outcome_of(tag);
  r->json = j.dump(2);
  r->csv = std::move(csv);
  return r;
}

tailcmp_report *verdict_report(const Verdict &v) { return make_report(v.tag, to_json(v)); }

tailcmp_report *tail_report(const TailReport &rep, SweepTarget target, const json &extra = {}) {
  return make_report(rep.overall(), to_json(rep),
                     sweep_csv(target, sweep_from_tail_report(rep, extra)));
}

tailcmp_report *sweep_result_report(const SweepSpec &spec) {
  const SweepResult result = run_sweep(spec);
  return make_report(result.overall(), sweep_report(spec, result),
                     sweep_csv(spec.target, result));
}

SweepSpec base_spec(SweepTarget target, const tailcmp_options &o) {
  SweepSpec spec;
  spec.target = target;
  spec.precision = o.precision;
  spec.jobs = o.jobs;
  spec.seed = o.seed;
  return spec;
}

// Poisson handles are truncated at the default cutoff, doubling until the
// result is resolved or the cap is reached.
template <class F> Verdict refine_poisson(const PoissonSpec &p, const Precision &prec, F &&decide) {
  std::uint64_t cutoff = default_poisson_cutoff(p.lambda);
  BigRat width = prec.exp_width;
  std::optional<Verdict> last;
  while (cutoff <= prec.cutoff_cap) {
    last = decide(poisson_truncate(p, width, cutoff));
    if (!last->unresolved())
      return *last;
    cutoff *= 2;
    width /= BigRat(BigInt(1) << 64);
  }
  if (last)
    return *last;
  return Verdict::make_unresolved("poisson", json{{"reason", "cutoff cap below initial cutoff"},
                                                  {"cutoff_cap", prec.cutoff_cap}});
}

const FiniteDist &require_finite(const tailcmp_dist *d, const char *what) {
  if (const auto *f = std::get_if<FiniteDist>(&d->value))
    return *f;
  throw PreconditionError(std::string(what) + " needs a finite distribution");
}

json alpha_json(const AlphaSequence &a) {
  json values = json::array();
  for (const auto &v : a.values)
    values.push_back(to_json(v));
  return json{{"m", a.m}, {"exact", a.exact}, {"alpha", values}};
}

} // namespace

extern "C" {

const char *tailcmp_version(void) { return kToolVersion; }

const char *tailcmp_last_error(void) { return last_error.c_str(); }

tailcmp_status tailcmp_options_create(tailcmp_options **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new tailcmp_options; });
}

void tailcmp_options_free(tailcmp_options *opts) { delete opts; }

tailcmp_status tailcmp_options_set_precision(tailcmp_options *opts, const char *width) {
  if (!opts || !width)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    BigRat w = parse_rat(width);
    if (w <= 0)
      throw PreconditionError("precision must be positive, got " + std::string(width));
    opts->precision.exp_width = w;
  });
}

tailcmp_status tailcmp_options_set_cutoff_cap(tailcmp_options *opts, uint64_t cap) {
  if (!opts)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null options");
  if (cap == 0)
    return fail(TAILCMP_E_PRECONDITION, "cutoff cap must be positive");
  opts->precision.cutoff_cap = cap;
  return TAILCMP_OK;
}

tailcmp_status tailcmp_options_set_jobs(tailcmp_options *opts, unsigned jobs) {
  if (!opts)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null options");
  if (jobs == 0)
    return fail(TAILCMP_E_PRECONDITION, "jobs must be at least 1");
  opts->jobs = jobs;
  return TAILCMP_OK;
}

tailcmp_status tailcmp_options_set_seed(tailcmp_options *opts, uint64_t seed) {
  if (!opts)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null options");
  opts->seed = seed;
  return TAILCMP_OK;
}

tailcmp_status tailcmp_dist_from_json(const char *text, tailcmp_dist **out) {
  if (!text || !out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new tailcmp_dist{finite_dist_from_json(text)}; });
}

tailcmp_status tailcmp_dist_binomial(uint64_t n, uint64_t m, tailcmp_dist **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new tailcmp_dist{binomial_dist(BinomialSpec(n, m))}; });
}

tailcmp_status tailcmp_dist_poisson(uint64_t lambda, tailcmp_dist **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new tailcmp_dist{PoissonSpec(lambda)}; });
}

tailcmp_status tailcmp_dist_to_json(const tailcmp_dist *dist, char **out) {
  if (!dist || !out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::string s;
    if (const auto *f = std::get_if<FiniteDist>(&dist->value))
      s = finite_dist_to_json(*f);
    else
      s = json{{"poisson", std::get<PoissonSpec>(dist->value).lambda}}.dump();
    char *buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void tailcmp_dist_free(tailcmp_dist *dist) { delete dist; }

void tailcmp_string_free(char *s) { delete[] s; }

tailcmp_status tailcmp_check_skew(const tailcmp_dist *dist, const tailcmp_options *opts,
                                  tailcmp_report **out) {
  if (!dist || !out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null argument");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    Verdict v = std::visit(
        [&](const auto &d) -> Verdict {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, FiniteDist>)
            return check_right_skewed(d);
          else
            return refine_poisson(d, o.precision,
                                  [](const CertDist &c) { return check_right_skewed(c); });
        },
        dist->value);
    *out = verdict_report(v);
  });
}

tailcmp_status tailcmp_check_load(const tailcmp_dist *dist, const tailcmp_options *opts,
                                  tailcmp_report **out) {
  if (!dist || !out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null argument");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    Verdict v = std::visit(
        [&](const auto &d) -> Verdict {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, FiniteDist>)
            return check_left_loaded(alpha_sequence(d));
          else
            return refine_poisson(d, o.precision, [](const CertDist &c) {
              return check_left_loaded(alpha_sequence(c));
            });
        },
        dist->value);
    *out = verdict_report(v);
  });
}

tailcmp_status tailcmp_alpha(const tailcmp_dist *dist, const tailcmp_options *opts,
                             tailcmp_report **out) {
  if (!dist || !out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null argument");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    std::optional<AlphaSequence> alpha;
    if (const auto *f = std::get_if<FiniteDist>(&dist->value)) {
      alpha = alpha_sequence(*f);
    } else {
      // Keep the enclosures from the first truncation whose sign pattern is
      // fully decided.
      const PoissonSpec &p = std::get<PoissonSpec>(dist->value);
      refine_poisson(p, o.precision, [&](const CertDist &c) {
        alpha = alpha_sequence(c);
        for (const auto &v : alpha->values)
          if (!v.certainly_nonnegative() && !v.certainly_nonpositive())
            return Verdict::make_unresolved("alpha");
        return Verdict::make_holds("alpha");
      });
    }
    json j = alpha_json(*alpha);
    std::string csv = "i,alpha\n";
    bool decided = true;
    for (std::size_t i = 0; i < alpha->values.size(); ++i) {
      const auto &v = alpha->values[i];
      decided = decided && (v.certainly_nonnegative() || v.certainly_nonpositive());
      const json cell = to_json(v);
      csv += std::to_string(i + 1) + ',' +
             (cell.is_string() ? cell.get<std::string>()
                               : cell["lo"].get<std::string>() + ".." + cell["hi"].get<std::string>()) +
             '\n';
    }
    *out = make_report(decided ? VerdictTag::Holds : VerdictTag::Unresolved, j, csv);
  });
}

tailcmp_status tailcmp_compare_tails(const tailcmp_dist *S, const tailcmp_dist *X,
                                     const tailcmp_options *, tailcmp_report **out) {
  if (!S || !X || !out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const FiniteDist &s = require_finite(S, "compare-tails");
    const FiniteDist &x = require_finite(X, "compare-tails");
    const TheoremReport rep = theorem1_check(s, x);
    json j = to_json(rep);
    if (rep.hypotheses_hold()) {
      const ProofCertificate cert = theorem1_certificate(s, x);
      j["certificate"] = to_json(cert);
      if (!cert.valid())
        throw InvariantError("proof certificate invalid although hypotheses hold");
    }
    *out = make_report(rep.conclusion.tag, j);
  });
}

tailcmp_status tailcmp_verify_cb(uint64_t n, uint64_t k_max, const tailcmp_options *opts,
                                 tailcmp_report **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    *out = tail_report(verify_chaundy_bullard(n, k_max, o.jobs), SweepTarget::ChaundyBullard,
                       json{{"n", n}});
  });
}

tailcmp_status tailcmp_verify_teicher(uint64_t k_max, const tailcmp_options *opts,
                                      tailcmp_report **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    *out = tail_report(verify_teicher(k_max, o.precision, o.jobs), SweepTarget::Teicher);
  });
}

tailcmp_status tailcmp_verify_kane(const uint64_t *lambdas, size_t count,
                                   const tailcmp_options *opts, tailcmp_report **out) {
  if (!out || (!lambdas && count > 0))
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null argument");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    const std::vector<std::uint64_t> seq(lambdas, lambdas + count);
    const TailReport rep = verify_kane_poisson(seq, o.precision, o.jobs);
    std::string csv = "k,lambda_next,verdict,witness\n";
    for (const auto &step : rep.steps)
      csv += std::to_string(step.k) + ',' + std::to_string(seq[step.k]) + ',' +
             to_string(step.verdict.tag) + ',' +
             (step.verdict.witness.is_null() ? "" : '"' + step.verdict.witness.dump() + '"') + '\n';
    *out = make_report(rep.overall(), to_json(rep), csv);
  });
}

tailcmp_status tailcmp_verify_jogdeo(uint64_t n, uint64_t m, uint64_t k_max,
                                     const tailcmp_options *opts, tailcmp_report **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    *out = tail_report(verify_jogdeo_samuels(n, m, k_max, o.jobs), SweepTarget::Jogdeo,
                       json{{"n", n}, {"m", m}});
  });
}

tailcmp_status tailcmp_sweep_conj1(uint64_t m_lo, uint64_t m_hi, uint64_t n_max,
                                   const tailcmp_options *opts, tailcmp_report **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    SweepSpec spec = base_spec(SweepTarget::Conjecture1, o);
    spec.ranges["m"] = {m_lo, m_hi};
    spec.ranges["n"] = {2 * m_lo + 1, n_max};
    *out = sweep_result_report(spec);
  });
}

tailcmp_status tailcmp_sweep_conj2(uint64_t m_lo, uint64_t m_hi, const tailcmp_options *opts,
                                   tailcmp_report **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    SweepSpec spec = base_spec(SweepTarget::Conjecture2, o);
    spec.ranges["m"] = {m_lo, m_hi};
    *out = sweep_result_report(spec);
  });
}

tailcmp_status tailcmp_prop_theorem1(uint64_t trials, uint64_t support_cap,
                                     const tailcmp_options *opts, tailcmp_report **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    if (trials == 0)
      throw PreconditionError("trials must be at least 1");
    SweepSpec spec = base_spec(SweepTarget::PropertyTheorem1, o);
    spec.ranges["trial"] = {0, trials - 1};
    spec.ranges["support"] = {1, support_cap};
    *out = sweep_result_report(spec);
  });
}

tailcmp_status tailcmp_prop_lemma1(uint64_t trials, uint64_t support_cap,
                                   const tailcmp_options *opts, tailcmp_report **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    if (trials == 0)
      throw PreconditionError("trials must be at least 1");
    SweepSpec spec = base_spec(SweepTarget::Lemma1Random, o);
    spec.ranges["trial"] = {0, trials - 1};
    spec.ranges["support"] = {1, support_cap};
    *out = sweep_result_report(spec);
  });
}

tailcmp_status tailcmp_prop_kane(uint64_t sequences, uint64_t max_len, uint64_t lambda_max,
                                 const tailcmp_options *opts, tailcmp_report **out) {
  if (!out)
    return fail(TAILCMP_E_INVALID_ARGUMENT, "null output pointer");
  const auto &o = opts_or_default(opts);
  return guarded([&] {
    SweepSpec spec = base_spec(SweepTarget::Kane, o);
    if (sequences == 0)
      throw PreconditionError("sequences must be at least 1");
    spec.ranges["trial"] = {0, sequences - 1};
    spec.ranges["length"] = {2, max_len};
    spec.ranges["lambda"] = {1, lambda_max};
    *out = sweep_result_report(spec);
  });
}

tailcmp_outcome tailcmp_report_outcome(const tailcmp_report *report) {
  return report ? report->outcome : TAILCMP_UNRESOLVED;
}

const char *tailcmp_report_json(const tailcmp_report *report) {
  return report ? report->json.c_str() : "";
}

const char *tailcmp_report_csv(const tailcmp_report *report) {
  return report ? report->csv.c_str() : "";
}

void tailcmp_report_free(tailcmp_report *report) { delete report; }

} // extern "C"
