#include "tailcmp/sweep.hpp"

#include "tailcmp/errors.hpp"
#include "tailcmp/parallel.hpp"
#include "tailcmp/predicates.hpp"
#include "tailcmp/random_dists.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <utility>

namespace tailcmp {

namespace {

constexpr std::array<std::pair<SweepTarget, const char *>, 8> kTargetNames{{
    {SweepTarget::Conjecture1, "conjecture1"},
    {SweepTarget::Conjecture2, "conjecture2"},
    {SweepTarget::ChaundyBullard, "cb"},
    {SweepTarget::Teicher, "teicher"},
    {SweepTarget::Kane, "kane"},
    {SweepTarget::Jogdeo, "jogdeo"},
    {SweepTarget::PropertyTheorem1, "property-theorem1"},
    {SweepTarget::Lemma1Random, "lemma1-random"},
}};

using Clock = std::chrono::steady_clock;

SweepResult collect(std::vector<SweepRow> rows, Clock::time_point started) {
  SweepResult r;
  r.rows = std::move(rows);
  r.total = r.rows.size();
  for (const auto &row : r.rows) {
    if (row.tag == VerdictTag::Holds)
      ++r.holds;
    else if (row.tag == VerdictTag::Fails)
      r.fails.push_back(row);
    else
      r.unresolved.push_back(row);
  }
  r.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started);
  return r;
}

const IntRange &require_range(const SweepSpec &spec, const std::string &name) {
  auto it = spec.ranges.find(name);
  if (it == spec.ranges.end())
    throw PreconditionError(std::string("sweep '") + to_string(spec.target) + "' needs range '" +
                            name + "'");
  return it->second;
}

SweepRow conjecture1_row(std::uint64_t n, std::uint64_t m) {
  const AlphaSequence alpha = alpha_sequence(binomial_dist(BinomialSpec(n, m)));
  const Verdict l2 = check_L2(alpha);
  SweepRow row;
  row.params = {{"n", n}, {"m", m}};
  row.tag = l2.tag;
  row.witness = l2.witness;
  row.detail = {{"L1", to_string(check_L1(alpha).tag)}};
  return row;
}

struct Conj2Outcome {
  Verdict l2;
  Verdict l1;
  unsigned rounds = 0;
  std::uint64_t cutoff = 0;
  BigRat width;
};

Conj2Outcome conjecture2_l2(std::uint64_t m, const Precision &precision) {
  Conj2Outcome out;
  const std::uint64_t base = default_poisson_cutoff(m);
  for (unsigned round = 0; round < 48 && (base << round) <= precision.cutoff_cap; ++round) {
    out.cutoff = base << round;
    out.width = precision.exp_width / BigRat(BigInt(1) << (64 * round));
    out.rounds = round + 1;
    const AlphaSequence alpha =
        alpha_sequence(poisson_truncate(PoissonSpec(m), out.width, out.cutoff));
    out.l2 = check_L2(alpha);
    out.l1 = check_L1(alpha);
    if (!out.l2.unresolved())
      return out;
  }
  if (out.rounds == 0)
    out.l2 = Verdict::make_unresolved("L2", {{"reason", "cutoff cap below initial cutoff"}});
  return out;
}

SweepRow conjecture2_row(std::uint64_t m, const Precision &precision) {
  Conj2Outcome res = conjecture2_l2(m, precision);
  SweepRow row;
  row.params = {{"m", m}};
  row.tag = res.l2.tag;
  row.witness = res.l2.witness;
  // Independent routes: m = 1 by the alpha-sum identity, m = 2 by Simmons plus
  // that identity (both L2), m >= 3 via the exact L1 reconstruction.
  nlohmann::json cross;
  if (m == 1) {
    cross = {{"route", "lemma1"}, {"tag", "Holds"}};
  } else if (m == 2) {
    cross = {{"route", "simmons+lemma1"}, {"tag", to_string(poisson_simmons(m, precision).tag)}};
  } else {
    cross = {{"route", "poisson-L1-exact"}, {"tag", to_string(poisson_L1_exact(m, precision).tag)}};
  }
  // Each route proves L2: L1 plus a non-negative total sum keeps
  // every prefix sum non-negative.
  const bool route_l2 = cross["tag"] == "Holds";
  row.detail = {{"rounds", res.rounds},
                {"L1_interval", to_string(res.l1.tag)},
                {"cross_check", cross},
                {"consistent", !(route_l2 && res.l2.fails())}};
  if (res.l2.unresolved())
    row.detail["precision_state"] = {{"cutoff", res.cutoff},
                                     {"exp_width", to_string(res.width)}};
  return row;
}

SweepRow theorem1_row(std::uint64_t trial, std::uint64_t seed, std::uint64_t cap) {
  Rng rng = trial_rng(seed, trial);
  const std::uint64_t m = uniform_int(rng, 0, (cap - 2) / 3);
  const std::uint64_t s = uniform_int(rng, m, cap - 1);
  const FiniteDist S = random_right_skewed(rng, s, cap);
  const FiniteDist X = random_left_loaded(rng, m, cap);
  const TheoremReport report = theorem1_check(S, X);
  if (!report.hypotheses_hold())
    throw InvariantError("generated pair violates the hypotheses at trial " + std::to_string(trial));
  const ProofCertificate cert = theorem1_certificate(S, X);
  SweepRow row;
  row.params = {{"trial", trial}, {"s", report.s}, {"m", report.m}};
  const bool ok = report.conclusion.holds() && cert.valid();
  row.tag = ok ? VerdictTag::Holds : VerdictTag::Fails;
  row.detail = {{"route", to_string(cert.route)},
                {"equality", report.lhs_tail == report.rhs_tail}};
  if (!ok)
    row.witness = {{"S", nlohmann::json::parse(finite_dist_to_json(S))},
                   {"X", nlohmann::json::parse(finite_dist_to_json(X))},
                   {"lhs", to_string(report.lhs_tail)},
                   {"rhs", to_string(report.rhs_tail)},
                   {"certificate", to_json(cert)}};
  return row;
}

SweepRow lemma1_row(std::uint64_t trial, std::uint64_t seed, std::uint64_t cap) {
  Rng rng = trial_rng(seed, trial);
  const std::uint64_t m = uniform_int(rng, 0, cap - 2);
  const FiniteDist X = random_integer_mean(rng, m, cap);
  SweepRow row;
  row.params = {{"trial", trial}, {"m", m}};
  try {
    Lemma1Sides sides = lemma1_identity(X);
    row.tag = sides.lhs >= 0 ? VerdictTag::Holds : VerdictTag::Fails;
    if (row.tag == VerdictTag::Fails)
      row.witness = {{"X", nlohmann::json::parse(finite_dist_to_json(X))},
                     {"lhs", to_string(sides.lhs)}};
  } catch (const InvariantError &e) {
    row.tag = VerdictTag::Fails;
    row.witness = {{"X", nlohmann::json::parse(finite_dist_to_json(X))}, {"error", e.what()}};
  }
  return row;
}

std::string csv_escape(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const nlohmann::json &v) {
  if (v.is_null())
    return "";
  if (v.is_string())
    return csv_escape(v.get<std::string>());
  return csv_escape(v.dump());
}

} // namespace

const char *to_string(SweepTarget t) {
  for (const auto &[target, name] : kTargetNames)
    if (target == t)
      return name;
  return "?";
}

std::optional<SweepTarget> parse_target(std::string_view name) {
  for (const auto &[target, n] : kTargetNames)
    if (name == n)
      return target;
  return std::nullopt;
}

IntRange parse_range(std::string_view text) {
  auto parse_u = [&](std::string_view s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        s.size() > 18)
      throw ParseError("malformed range '" + std::string(text) + "'");
    return std::stoull(std::string(s));
  };
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    IntRange r{parse_u(text.substr(0, dots)), parse_u(text.substr(dots + 2))};
    if (r.lo > r.hi)
      throw ParseError("empty range '" + std::string(text) + "'");
    return r;
  }
  std::uint64_t v = parse_u(text);
  return IntRange{v, v};
}

void SweepSpec::validate() const {
  auto need = [&](const std::string &name) {
    const IntRange &r = require_range(*this, name);
    if (r.size() == 0)
      throw PreconditionError("range '" + name + "' is empty");
    return r;
  };
  switch (target) {
  case SweepTarget::Conjecture1: {
    IntRange m = need("m");
    need("n");
    if (m.lo < 1)
      throw PreconditionError("conjecture1 needs m >= 1");
    break;
  }
  case SweepTarget::Conjecture2:
    if (need("m").lo < 1)
      throw PreconditionError("conjecture2 needs m >= 1");
    break;
  case SweepTarget::ChaundyBullard:
    if (need("n").lo < 1 || need("k").lo < 1)
      throw PreconditionError("cb needs n >= 1 and k >= 1");
    break;
  case SweepTarget::Teicher:
    if (need("k").lo < 1)
      throw PreconditionError("teicher needs k >= 1");
    break;
  case SweepTarget::Jogdeo:
    if (need("n").lo < 1 || need("m").lo < 1 || need("k").lo < 1)
      throw PreconditionError("jogdeo needs n, m, k >= 1");
    break;
  case SweepTarget::Kane:
    need("trial");
    if (need("length").hi < 2 || need("lambda").hi < 1)
      throw PreconditionError("kane needs length up to at least 2 and lambda >= 1");
    if (!seed)
      throw PreconditionError("randomized sweep needs a seed");
    break;
  case SweepTarget::PropertyTheorem1:
  case SweepTarget::Lemma1Random:
    need("trial");
    if (need("support").hi < 3)
      throw PreconditionError("support cap must be at least 3");
    if (!seed)
      throw PreconditionError("randomized sweep needs a seed");
    break;
  }
  if (jobs == 0)
    throw PreconditionError("jobs must be at least 1");
}

VerdictTag SweepResult::overall() const {
  if (!fails.empty())
    return VerdictTag::Fails;
  if (!unresolved.empty())
    return VerdictTag::Unresolved;
  return VerdictTag::Holds;
}

SweepResult sweep_conjecture1(IntRange m, std::uint64_t n_max, unsigned jobs) {
  const auto started = Clock::now();
  if (m.lo < 1)
    throw PreconditionError("conjecture1 needs m >= 1");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> grid; // (m, n), n > 2m
  for (std::uint64_t mm = m.lo; mm <= m.hi; ++mm)
    for (std::uint64_t n = 2 * mm + 1; n <= n_max; ++n)
      grid.emplace_back(mm, n);
  auto rows = parallel_map(grid.size(), jobs, [&](std::size_t i) {
    return conjecture1_row(grid[i].second, grid[i].first);
  });
  return collect(std::move(rows), started);
}

SweepResult sweep_conjecture2(IntRange m, const Precision &precision, unsigned jobs) {
  const auto started = Clock::now();
  if (m.lo < 1)
    throw PreconditionError("conjecture2 needs m >= 1");
  auto rows = parallel_map(m.size(), jobs, [&](std::size_t i) {
    return conjecture2_row(m.lo + i, precision);
  });
  return collect(std::move(rows), started);
}

namespace {

// Tail monotonicity along the sequence, and agreement of every step with the
// route through the theorem's hypotheses.
SweepRow kane_row(std::uint64_t trial, const std::vector<std::uint64_t> &lambdas,
                  const Precision &precision) {
  const TailReport report = verify_kane_poisson(lambdas, precision);
  SweepRow row;
  row.params = {{"trial", trial}, {"lambdas", lambdas}};
  row.tag = report.overall();
  bool agree = true;
  nlohmann::json bad = nlohmann::json::array();
  for (const auto &step : report.steps) {
    agree = agree && step.detail["routes_agree"].get<bool>() &&
            step.detail["theorem1_route"] == "Holds";
    if (!step.verdict.holds())
      bad.push_back({{"k", step.k}, {"verdict", to_string(step.verdict.tag)}});
  }
  if (!agree)
    row.tag = combine(row.tag, VerdictTag::Fails);
  if (row.tag != VerdictTag::Holds)
    row.witness = {{"steps", bad}, {"routes_agree", agree}};
  row.detail = {{"steps", report.steps.size()}};
  return row;
}

} // namespace

SweepResult run_property_theorem1(std::uint64_t trials, std::uint64_t seed,
                                  std::uint64_t support_cap, unsigned jobs) {
  const auto started = Clock::now();
  if (support_cap < 3)
    throw PreconditionError("support cap must be at least 3");
  auto rows = parallel_map(trials, jobs, [&](std::size_t i) {
    return theorem1_row(i, seed, support_cap);
  });
  return collect(std::move(rows), started);
}

SweepResult run_property_lemma1(std::uint64_t trials, std::uint64_t seed,
                                std::uint64_t support_cap, unsigned jobs) {
  const auto started = Clock::now();
  if (support_cap < 3)
    throw PreconditionError("support cap must be at least 3");
  auto rows = parallel_map(trials, jobs, [&](std::size_t i) {
    return lemma1_row(i, seed, support_cap);
  });
  return collect(std::move(rows), started);
}

SweepResult run_kane_random(std::uint64_t sequences, std::uint64_t seed, std::uint64_t max_len,
                            std::uint64_t lambda_max, const Precision &precision,
                            unsigned jobs) {
  const auto started = Clock::now();
  auto rows = parallel_map(sequences, jobs, [&](std::size_t i) {
    Rng rng = trial_rng(seed, i);
    return kane_row(i, random_prefix_sequence(rng, max_len, lambda_max), precision);
  });
  return collect(std::move(rows), started);
}

SweepResult sweep_from_tail_report(const TailReport &report, const nlohmann::json &extra_params) {
  const auto started = Clock::now();
  std::vector<SweepRow> rows;
  for (const auto &step : report.steps) {
    SweepRow row;
    row.params = extra_params.is_null() ? nlohmann::json::object() : extra_params;
    row.params["k"] = step.k;
    row.tag = step.verdict.tag;
    row.witness = step.verdict.witness;
    row.detail = {{"lhs", to_json(step.lhs)}, {"rhs", to_json(step.rhs)}};
    rows.push_back(std::move(row));
  }
  return collect(std::move(rows), started);
}

SweepResult run_sweep(const SweepSpec &spec) {
  spec.validate();
  const auto started = Clock::now();
  switch (spec.target) {
  case SweepTarget::Conjecture1:
    return sweep_conjecture1(spec.ranges.at("m"), spec.ranges.at("n").hi, spec.jobs);
  case SweepTarget::Conjecture2:
    return sweep_conjecture2(spec.ranges.at("m"), spec.precision, spec.jobs);
  case SweepTarget::Teicher: {
    const IntRange k = spec.ranges.at("k");
    SweepResult r = sweep_from_tail_report(verify_teicher(k.hi, spec.precision, spec.jobs));
    std::erase_if(r.rows, [&](const SweepRow &row) { return row.params["k"] < k.lo; });
    return collect(std::move(r.rows), started);
  }
  case SweepTarget::ChaundyBullard:
  case SweepTarget::Jogdeo: {
    const IntRange n = spec.ranges.at("n");
    const IntRange k = spec.ranges.at("k");
    const IntRange m = spec.target == SweepTarget::Jogdeo ? spec.ranges.at("m") : IntRange{1, 1};
    std::vector<SweepRow> rows;
    for (std::uint64_t nn = n.lo; nn <= n.hi; ++nn)
      for (std::uint64_t mm = m.lo; mm <= std::min(m.hi, nn); ++mm) {
        TailReport rep = spec.target == SweepTarget::Jogdeo
                             ? verify_jogdeo_samuels(nn, mm, k.hi, spec.jobs)
                             : verify_chaundy_bullard(nn, k.hi, spec.jobs);
        nlohmann::json extra = {{"n", nn}};
        if (spec.target == SweepTarget::Jogdeo)
          extra["m"] = mm;
        for (auto &row : sweep_from_tail_report(rep, extra).rows)
          if (row.params["k"] >= k.lo)
            rows.push_back(std::move(row));
      }
    return collect(std::move(rows), started);
  }
  case SweepTarget::Kane:
    return run_kane_random(spec.ranges.at("trial").size(), *spec.seed,
                           spec.ranges.at("length").hi, spec.ranges.at("lambda").hi,
                           spec.precision, spec.jobs);
  case SweepTarget::PropertyTheorem1:
    return run_property_theorem1(spec.ranges.at("trial").size(), *spec.seed,
                                 spec.ranges.at("support").hi, spec.jobs);
  case SweepTarget::Lemma1Random:
    return run_property_lemma1(spec.ranges.at("trial").size(), *spec.seed,
                               spec.ranges.at("support").hi, spec.jobs);
  }
  throw PreconditionError("unknown sweep target");
}

bool replay_failure(SweepTarget target, const SweepRow &row, const Precision &precision) {
  if (row.tag != VerdictTag::Fails)
    return false;
  switch (target) {
  case SweepTarget::Conjecture1: {
    const auto n = row.params["n"].get<std::uint64_t>();
    const auto m = row.params["m"].get<std::uint64_t>();
    const Verdict v = check_L2(alpha_sequence(binomial_dist(BinomialSpec(n, m))));
    return v.fails() && v.witness == row.witness;
  }
  case SweepTarget::Conjecture2: {
    const auto m = row.params["m"].get<std::uint64_t>();
    return conjecture2_l2(m, precision).l2.fails();
  }
  case SweepTarget::PropertyTheorem1: {
    const FiniteDist S = finite_dist_from_json(row.witness["S"].dump());
    const FiniteDist X = finite_dist_from_json(row.witness["X"].dump());
    const TheoremReport report = theorem1_check(S, X);
    if (!report.conclusion.holds())
      return true;
    return !theorem1_certificate(S, X).valid();
  }
  case SweepTarget::Lemma1Random: {
    const FiniteDist X = finite_dist_from_json(row.witness["X"].dump());
    try {
      return lemma1_identity(X).lhs < 0;
    } catch (const InvariantError &) {
      return true;
    }
  }
  case SweepTarget::Kane: {
    const auto lambdas = row.params["lambdas"].get<std::vector<std::uint64_t>>();
    return kane_row(row.params["trial"], lambdas, precision).tag == VerdictTag::Fails;
  }
  case SweepTarget::Teicher: {
    const auto k = row.params["k"].get<std::uint64_t>();
    return compare_poisson_tails(k, k, k + 1, k + 1, precision).order == Ordering::Less;
  }
  case SweepTarget::ChaundyBullard:
  case SweepTarget::Jogdeo: {
    const auto n = row.params["n"].get<std::uint64_t>();
    const auto m = row.params.contains("m") ? row.params["m"].get<std::uint64_t>() : 1;
    const auto k = row.params["k"].get<std::uint64_t>();
    const TailReport rep = verify_jogdeo_samuels(n, m, k);
    return rep.steps.back().verdict.fails();
  }
  }
  return false;
}

nlohmann::json to_json(const SweepSpec &spec) {
  nlohmann::json ranges = nlohmann::json::object();
  for (const auto &[name, r] : spec.ranges)
    ranges[name] = {{"lo", r.lo}, {"hi", r.hi}};
  nlohmann::json j = {{"target", to_string(spec.target)},
                      {"ranges", ranges},
                      {"precision",
                       {{"exp_width", to_string(spec.precision.exp_width)},
                        {"cutoff_cap", spec.precision.cutoff_cap}}},
                      {"jobs", spec.jobs}};
  j["seed"] = spec.seed ? nlohmann::json(*spec.seed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json sweep_report(const SweepSpec &spec, const SweepResult &result) {
  auto rows_json = [](const std::vector<SweepRow> &rows) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto &r : rows) {
      nlohmann::json j = {{"params", r.params}, {"verdict", to_string(r.tag)}};
      if (!r.witness.is_null())
        j["witness"] = r.witness;
      if (!r.detail.is_null())
        j["detail"] = r.detail;
      a.push_back(std::move(j));
    }
    return a;
  };
  nlohmann::json spec_json = to_json(spec);
  // The report describes the work, not how it was scheduled.
  spec_json.erase("jobs");
  return nlohmann::json{{"spec", spec_json},
                        {"result",
                         {{"total", result.total},
                          {"holds", result.holds},
                          {"fails", rows_json(result.fails)},
                          {"unresolved", rows_json(result.unresolved)},
                          {"overall", to_string(result.overall())},
                          {"wall_time_ms", result.wall_time.count()}}},
                        {"tool_version", kToolVersion}};
}

std::vector<std::string> csv_param_columns(SweepTarget target) {
  switch (target) {
  case SweepTarget::Conjecture1:
    return {"n", "m"};
  case SweepTarget::Conjecture2:
    return {"m"};
  case SweepTarget::ChaundyBullard:
    return {"n", "k"};
  case SweepTarget::Teicher:
    return {"k"};
  case SweepTarget::Kane:
    return {"trial", "lambdas"};
  case SweepTarget::Jogdeo:
    return {"n", "m", "k"};
  case SweepTarget::PropertyTheorem1:
    return {"trial", "s", "m"};
  case SweepTarget::Lemma1Random:
    return {"trial", "m"};
  }
  return {};
}

std::string sweep_csv(SweepTarget target, const SweepResult &result) {
  const auto cols = csv_param_columns(target);
  std::ostringstream out;
  for (const auto &c : cols)
    out << c << ',';
  out << "verdict,witness\n";
  for (const auto &row : result.rows) {
    for (const auto &c : cols)
      out << csv_cell(row.params.contains(c) ? row.params[c] : nlohmann::json()) << ',';
    out << to_string(row.tag) << ',' << csv_cell(row.witness) << '\n';
  }
  return out.str();
}

int exit_status(VerdictTag overall) {
  switch (overall) {
  case VerdictTag::Holds:
    return 0;
  case VerdictTag::Fails:
    return 1;
  case VerdictTag::Unresolved:
    return 2;
  }
  return 2;
}

} // namespace tailcmp
