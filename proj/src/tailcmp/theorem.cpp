#include "tailcmp/theorem.hpp"

#include "tailcmp/parallel.hpp"

#include <algorithm>

namespace tailcmp {

namespace {

Verdict compare_verdict(const char *name, const CertInterval &lhs, const CertInterval &rhs,
                        Ordering o) {
  nlohmann::json values = {{"lhs", to_json(lhs)}, {"rhs", to_json(rhs)}};
  switch (o) {
  case Ordering::Greater:
    return Verdict::make_holds(name, values);
  case Ordering::Equal:
    values["equality"] = true;
    return Verdict::make_holds(name, values);
  case Ordering::Less:
    return Verdict::make_fails(name, values);
  case Ordering::Unresolved:
    break;
  }
  return Verdict::make_unresolved(name, values);
}

BigRat binomial_mean_tail(std::uint64_t trials, std::uint64_t mean) {
  return tail_prob(binomial_dist(BinomialSpec(trials, mean)), mean);
}

} // namespace

bool TheoremReport::hypotheses_hold() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const auto &kv) { return kv.second.holds(); });
}

TheoremReport theorem1_check(const FiniteDist &S, const FiniteDist &X) {
  BigRat mean = mean_exact(X);
  if (!is_integer(mean))
    throw PreconditionError("X must have an integer mean, got " + to_string(mean));
  TheoremReport r;
  r.m = mean.get_num().get_ui();
  r.s = mode_and_unimodality(S).canonical_mode;
  r.hypotheses.emplace("right-skewed", check_right_skewed(S));
  r.hypotheses.emplace("left-loaded", check_left_loaded(alpha_sequence(X)));
  nlohmann::json sm = {{"s", r.s}, {"m", r.m}};
  r.hypotheses.emplace("mode-dominates-mean",
                       r.s >= r.m ? Verdict::make_holds("mode-dominates-mean", sm)
                                  : Verdict::make_fails("mode-dominates-mean", sm));
  r.lhs_tail = tail_prob(S, r.s);
  r.rhs_tail = tail_prob(convolve(S, X), r.s + r.m);
  r.conclusion = compare_verdict("tail-comparison", CertInterval::point(r.lhs_tail),
                                 CertInterval::point(r.rhs_tail), compare(r.lhs_tail, r.rhs_tail));
  return r;
}

nlohmann::json to_json(const TheoremReport &r) {
  nlohmann::json hyp = nlohmann::json::object();
  for (const auto &[name, v] : r.hypotheses)
    hyp[name] = to_json(v);
  return nlohmann::json{{"theorem", "tail-comparison"},
                        {"s", r.s},
                        {"m", r.m},
                        {"hypotheses", hyp},
                        {"lhs_tail", to_string(r.lhs_tail)},
                        {"rhs_tail", to_string(r.rhs_tail)},
                        {"conclusion", to_json(r.conclusion)}};
}

const char *to_string(ProofRoute r) { return r == ProofRoute::L1 ? "L1" : "L2"; }

bool ProofCertificate::valid() const {
  return delta_monotone && split_bound && right_skew_bound && lemma1_bound &&
         reduction_identity && pairing_identity && sbp_identity && route_nonnegative &&
         pairing_sum >= 0;
}

HypothesisError::HypothesisError(Verdict failing)
    : PreconditionError("hypothesis '" + failing.predicate + "' is " + to_string(failing.tag)),
      verdict_(std::move(failing)) {}

ProofCertificate theorem1_certificate(const FiniteDist &S, const FiniteDist &X) {
  TheoremReport report = theorem1_check(S, X);
  for (const auto &[name, v] : report.hypotheses)
    if (!v.holds())
      throw HypothesisError(v);

  ProofCertificate c;
  c.s = report.s;
  c.m = report.m;
  const std::uint64_t s = c.s, m = c.m;
  const auto tx = X.tail_table();
  auto p_s = [&](std::int64_t k) { return S.weight(k); };
  auto tail_x = [&](std::int64_t t) -> BigRat { // P(X >= t)
    if (t <= 0)
      return BigRat(1);
    return static_cast<std::size_t>(t) < tx.size() ? tx[static_cast<std::size_t>(t)] : BigRat(0);
  };
  auto cdf_x = [&](std::int64_t t) -> BigRat { return 1 - tail_x(t + 1); }; // P(X <= t)
  const auto si = static_cast<std::int64_t>(s), mi = static_cast<std::int64_t>(m);

  c.alpha = alpha_sequence(X);
  const auto alpha = c.alpha.exact_values();
  BigRat running = 0;
  for (const auto &a : alpha) {
    running += a;
    c.prefix_sums.push_back(running);
  }
  const BigRat alpha_total = running;

  for (std::int64_t i = 1; i <= mi; ++i)
    c.delta.push_back(p_s(si + i - 1) - p_s(si + mi));
  c.delta_monotone = std::all_of(c.delta.begin(), c.delta.end(), [](const BigRat &d) { return d >= 0; });
  for (std::size_t i = 0; i + 1 < c.delta.size(); ++i)
    c.delta_monotone = c.delta_monotone && c.delta[i] >= c.delta[i + 1];

  c.L = c.L1 = c.L2 = c.R = c.R1 = c.R2 = 0;
  for (std::int64_t i = 1; i <= si; ++i)
    c.L += p_s(si - i) * tail_x(mi + i);
  for (std::int64_t i = 1; i <= mi; ++i) {
    c.R += p_s(si + i - 1) * cdf_x(mi - i);
    c.L1 += p_s(si - i) * tail_x(mi + i);
    c.R1 += p_s(si + i - 1) * tail_x(mi + i);
  }
  if (s > m) {
    BigRat far = 0;
    for (std::int64_t i = mi + 1; i <= si; ++i)
      far += tail_x(mi + i);
    c.L2 = p_s(si - mi - 1) * far;
  }
  c.R2 = p_s(si + mi) * alpha_total;
  c.tail_gap = report.lhs_tail - report.rhs_tail;

  c.pairing_sum = 0;
  for (std::size_t i = 0; i < m; ++i)
    c.pairing_sum += c.delta[i] * alpha[i];
  c.summation_by_parts = 0;
  bool sbp_terms_nonnegative = true;
  if (m > 0) {
    BigRat last = c.delta[m - 1] * c.prefix_sums[m - 1];
    sbp_terms_nonnegative = last >= 0;
    c.summation_by_parts = last;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      BigRat term = (c.delta[i] - c.delta[i + 1]) * c.prefix_sums[i];
      sbp_terms_nonnegative = sbp_terms_nonnegative && term >= 0;
      c.summation_by_parts += term;
    }
  }

  c.split_bound = c.L <= c.L1 + c.L2;
  c.right_skew_bound = c.L1 <= c.R1;
  c.lemma1_bound = c.L2 <= c.R2;
  c.reduction_identity = c.tail_gap == c.R - c.L;
  c.pairing_identity = c.pairing_sum == c.R - (c.R1 + c.R2);
  c.sbp_identity = c.pairing_sum == c.summation_by_parts;

  Verdict l1 = check_L1(c.alpha);
  if (l1.holds() && m > 0) {
    c.route = ProofRoute::L1;
    c.ell = l1.certificate["ell"].get<std::uint64_t>();
    // sum delta_i alpha_i >= delta_ell * sum alpha_i >= 0
    c.route_bound = c.delta[*c.ell - 1] * alpha_total;
    c.route_nonnegative = c.pairing_sum >= c.route_bound && c.route_bound >= 0;
  } else {
    c.route = ProofRoute::L2;
    c.route_bound = c.summation_by_parts;
    c.route_nonnegative = sbp_terms_nonnegative;
  }
  return c;
}

nlohmann::json to_json(const ProofCertificate &c) {
  auto rats = [](const std::vector<BigRat> &v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto &x : v)
      a.push_back(to_string(x));
    return a;
  };
  nlohmann::json j = {
      {"s", c.s},
      {"m", c.m},
      {"delta", rats(c.delta)},
      {"alpha", rats(c.alpha.exact_values())},
      {"prefix_sums", rats(c.prefix_sums)},
      {"pairing_sum", to_string(c.pairing_sum)},
      {"summation_by_parts", to_string(c.summation_by_parts)},
      {"route", to_string(c.route)},
      {"route_bound", to_string(c.route_bound)},
      {"bounds",
       {{"L", to_string(c.L)},
        {"L1", to_string(c.L1)},
        {"L2", to_string(c.L2)},
        {"R", to_string(c.R)},
        {"R1", to_string(c.R1)},
        {"R2", to_string(c.R2)},
        {"tail_gap", to_string(c.tail_gap)}}},
      {"checks",
       {{"delta_monotone", c.delta_monotone},
        {"split_bound", c.split_bound},
        {"right_skew_bound", c.right_skew_bound},
        {"lemma1_bound", c.lemma1_bound},
        {"reduction_identity", c.reduction_identity},
        {"pairing_identity", c.pairing_identity},
        {"sbp_identity", c.sbp_identity},
        {"route_nonnegative", c.route_nonnegative}}},
      {"valid", c.valid()}};
  if (c.ell)
    j["ell"] = *c.ell;
  return j;
}

VerdictTag TailReport::overall() const {
  VerdictTag t = VerdictTag::Holds;
  for (const auto &s : steps)
    t = combine(t, s.verdict.tag);
  return t;
}

nlohmann::json to_json(const TailReport &r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto &s : r.steps) {
    nlohmann::json j = {{"k", s.k},
                        {"lhs", to_json(s.lhs)},
                        {"rhs", to_json(s.rhs)},
                        {"verdict", to_string(s.verdict.tag)}};
    if (!s.verdict.witness.is_null())
      j["witness"] = s.verdict.witness;
    if (!s.detail.is_null())
      j["detail"] = s.detail;
    steps.push_back(std::move(j));
  }
  nlohmann::json j = {{"theorem", r.theorem},
                      {"params", r.params},
                      {"steps", steps},
                      {"overall", to_string(r.overall())}};
  if (!r.notes.is_null())
    j["notes"] = r.notes;
  return j;
}

std::optional<CertInterval> poisson_tail(std::uint64_t lambda, std::uint64_t t,
                                         const Precision &precision, unsigned round) {
  const std::uint64_t base = std::max(default_poisson_cutoff(lambda), t);
  if (round >= 48 || (base << round) > precision.cutoff_cap)
    return std::nullopt;
  const std::uint64_t cutoff = base << round;
  const BigRat width = precision.exp_width / BigRat(BigInt(1) << (64 * round));
  return tail_prob(poisson_truncate(PoissonSpec(lambda), width, cutoff), t);
}

PoissonTailComparison compare_poisson_tails(std::uint64_t la, std::uint64_t ta,
                                            std::uint64_t lb, std::uint64_t tb,
                                            const Precision &precision) {
  PoissonTailComparison out;
  for (unsigned round = 0;; ++round) {
    auto a = poisson_tail(la, ta, precision, round);
    auto b = poisson_tail(lb, tb, precision, round);
    if (!a || !b)
      return out;
    out.lhs = *a;
    out.rhs = *b;
    out.rounds = round + 1;
    out.order = compare(out.lhs, out.rhs);
    if (out.order != Ordering::Unresolved)
      return out;
  }
}

namespace {

// Exact chain P(Bin(nk, m/n) >= km) >= P(Bin(n(k+1), m/n) >= (k+1)m).
TailStep binomial_chain_step(std::uint64_t n, std::uint64_t m, std::uint64_t k) {
  TailStep step;
  step.k = k;
  step.lhs = CertInterval::point(binomial_mean_tail(n * k, m * k));
  step.rhs = CertInterval::point(binomial_mean_tail(n * (k + 1), m * (k + 1)));
  step.verdict = compare_verdict("tail-monotonicity", step.lhs, step.rhs, compare(step.lhs, step.rhs));
  return step;
}

} // namespace

TailReport verify_chaundy_bullard(std::uint64_t n, std::uint64_t k_max, unsigned jobs) {
  if (n < 1 || k_max < 1)
    throw PreconditionError("Chaundy-Bullard check requires n >= 1 and k_max >= 1");
  TailReport r;
  r.theorem = "chaundy-bullard";
  r.params = {{"n", n}, {"k_max", k_max}};
  r.steps = parallel_map(k_max, jobs, [&](std::size_t i) {
    return binomial_chain_step(n, 1, i + 1);
  });
  return r;
}

TailReport verify_jogdeo_samuels(std::uint64_t n, std::uint64_t m, std::uint64_t k_max,
                                 unsigned jobs) {
  if (m < 1 || n < m)
    throw PreconditionError("Jogdeo-Samuels check requires n >= m >= 1");
  if (k_max < 1)
    throw PreconditionError("k_max must be at least 1");
  TailReport r;
  r.theorem = "jogdeo-samuels";
  r.params = {{"n", n}, {"m", m}, {"k_max", k_max}};

  // Left-loadedness of X ~ Bin(n, m/n) does not depend on k.
  const AlphaSequence alpha = alpha_sequence(binomial_dist(BinomialSpec(n, m)));
  const Verdict l1 = check_L1(alpha);
  const Verdict l2 = check_L2(alpha);
  const bool loaded = l1.holds() || l2.holds();
  r.notes = {{"theorem1_range", m <= 2 || (m >= 4 && 3 * m <= n)},
             {"X_L1", to_string(l1.tag)},
             {"X_L2", to_string(l2.tag)}};

  r.steps = parallel_map(k_max, jobs, [&](std::size_t i) {
    const std::uint64_t k = i + 1;
    TailStep step = binomial_chain_step(n, m, k);
    const FiniteDist S = binomial_dist(BinomialSpec(n * k, m * k));
    const Verdict skew = check_right_skewed(S);
    const std::uint64_t s = mode_and_unimodality(S).canonical_mode;
    const bool hyp = skew.holds() && loaded && s >= m;
    step.detail = {{"S_right_skewed", to_string(skew.tag)},
                   {"S_mode", s},
                   {"theorem1_hypotheses", hyp}};
    return step;
  });
  return r;
}

TailReport verify_teicher(std::uint64_t k_max, const Precision &precision, unsigned jobs) {
  if (k_max < 1)
    throw PreconditionError("k_max must be at least 1");
  TailReport r;
  r.theorem = "teicher";
  r.params = {{"k_max", k_max},
              {"exp_width", to_string(precision.exp_width)},
              {"cutoff_cap", precision.cutoff_cap}};
  r.steps = parallel_map(k_max, jobs, [&](std::size_t i) {
    const std::uint64_t k = i + 1;
    auto cmp = compare_poisson_tails(k, k, k + 1, k + 1, precision);
    TailStep step;
    step.k = k;
    step.lhs = cmp.lhs;
    step.rhs = cmp.rhs;
    step.verdict = compare_verdict("tail-monotonicity", cmp.lhs, cmp.rhs, cmp.order);
    step.detail = {{"rounds", cmp.rounds}};
    return step;
  });
  return r;
}

namespace {

// Tail-comparison hypotheses for S ~ Poi(s), X ~ Poi(m), following the Poisson
// lemmas: right-skewness from the exact beta criterion, left-loadedness via
// L2 for m in {1, 2} and L1 for m >= 3.
Verdict poisson_theorem1_route(std::uint64_t s, std::uint64_t m, const Precision &precision) {
  const char *name = "theorem1-route";
  Verdict skew = poisson_right_skew_exact(s);
  Verdict loaded;
  if (m == 1) {
    // A single alpha equals its own sum, non-negative by the alpha-sum identity.
    loaded = Verdict::make_holds("poisson-L2", {{"via", "lemma1"}});
  } else if (m == 2) {
    Verdict simmons = poisson_simmons(m, precision);
    loaded = simmons.holds()
                 ? Verdict::make_holds("poisson-L2", {{"via", "simmons+lemma1"},
                                                      {"alpha_1", simmons.certificate["alpha_1"]}})
                 : Verdict{"poisson-L2", simmons.tag, simmons.witness, simmons.certificate};
  } else {
    loaded = poisson_L1_exact(m, precision);
  }
  nlohmann::json detail = {{"S_right_skewed", to_string(skew.tag)},
                           {"X_left_loaded", to_string(loaded.tag)},
                           {"X_route", loaded.predicate}};
  VerdictTag tag = combine(skew.tag, loaded.tag);
  if (s < m)
    tag = VerdictTag::Fails;
  return Verdict{name, tag, tag == VerdictTag::Fails ? detail : nlohmann::json(nullptr), detail};
}

} // namespace

TailReport verify_kane_poisson(std::span<const std::uint64_t> lambdas, const Precision &precision,
                               unsigned jobs) {
  if (lambdas.size() < 2)
    throw PreconditionError("need at least two Poisson parameters");
  std::vector<std::uint64_t> partial;
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] == 0)
      throw PreconditionError("Poisson parameters must be positive integers");
    if (i > 0 && acc < lambdas[i])
      throw PreconditionError("prefix condition fails at k = " + std::to_string(i) + ": " +
                              std::to_string(acc) + " < " + std::to_string(lambdas[i]));
    acc += lambdas[i];
    partial.push_back(acc);
  }
  TailReport r;
  r.theorem = "kane-poisson";
  nlohmann::json ls = nlohmann::json::array();
  for (auto l : lambdas)
    ls.push_back(l);
  r.params = {{"lambdas", ls},
              {"exp_width", to_string(precision.exp_width)},
              {"cutoff_cap", precision.cutoff_cap}};
  r.steps = parallel_map(lambdas.size() - 1, jobs, [&](std::size_t i) {
    const std::uint64_t s = partial[i], next = partial[i + 1], m = lambdas[i + 1];
    // Poi(l_1) + ... + Poi(l_k) ~ Poi(s).
    auto cmp = compare_poisson_tails(s, s, next, next, precision);
    TailStep step;
    step.k = i + 1;
    step.lhs = cmp.lhs;
    step.rhs = cmp.rhs;
    step.verdict = compare_verdict("tail-monotonicity", cmp.lhs, cmp.rhs, cmp.order);
    Verdict route = poisson_theorem1_route(s, m, precision);
    const bool disagree = route.holds() && step.verdict.fails();
    step.detail = {{"s", s},
                   {"m", m},
                   {"rounds", cmp.rounds},
                   {"theorem1_route", to_string(route.tag)},
                   {"route_detail", route.certificate},
                   {"routes_agree", !disagree}};
    return step;
  });
  return r;
}

} // namespace tailcmp
