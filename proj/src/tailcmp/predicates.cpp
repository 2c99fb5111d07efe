#include "tailcmp/predicates.hpp"

#include "tailcmp/errors.hpp"

#include <functional>
#include <stdexcept>

namespace tailcmp {

namespace {

using WeightOrder = std::function<Ordering(std::uint64_t, std::uint64_t)>;

// Mode and unimodality over indices 0..n-1, given an ordering of weights.
std::optional<ModeReport> mode_report(std::uint64_t n, const WeightOrder &order) {
  ModeReport r;
  std::uint64_t best = 0;
  for (std::uint64_t k = 1; k < n; ++k) {
    Ordering o = order(k, best);
    if (o == Ordering::Unresolved)
      return std::nullopt;
    if (o != Ordering::Less)
      best = k;
  }
  r.canonical_mode = best;
  for (std::uint64_t k = 0; k < n; ++k) {
    if (k == best) {
      r.maximizers.push_back(k);
      continue;
    }
    Ordering o = order(k, best);
    if (o == Ordering::Unresolved)
      return std::nullopt;
    if (o == Ordering::Equal)
      r.maximizers.push_back(k);
  }
  r.unimodal = true;
  for (std::uint64_t k = 0; k + 1 < n; ++k) {
    Ordering step = order(k + 1, k);
    if (step == Ordering::Unresolved)
      return std::nullopt;
    bool ok = k < best ? step != Ordering::Less : step != Ordering::Greater;
    if (!ok) {
      r.unimodal = false;
      r.violation = k;
      break;
    }
  }
  return r;
}

Verdict right_skew_from(const ModeReport &mode, const WeightOrder &order) {
  const char *name = "right-skewed";
  if (!mode.unimodal)
    return Verdict::make_fails(name, {{"reason", "not-unimodal"},
                                      {"mode", mode.canonical_mode},
                                      {"index", *mode.violation}});
  const std::uint64_t s = mode.canonical_mode;
  nlohmann::json ties = nlohmann::json::array();
  for (std::uint64_t i = 1; i <= s; ++i) {
    Ordering o = order(s - i, s + i - 1);
    if (o == Ordering::Unresolved)
      return Verdict::make_unresolved(name, {{"mode", s}, {"i", i}});
    if (o == Ordering::Greater)
      return Verdict::make_fails(name, {{"reason", "left-mass-exceeds-mirror"}, {"mode", s}, {"i", i}});
    if (o == Ordering::Equal)
      ties.push_back(i);
  }
  return Verdict::make_holds(name, {{"mode", s}, {"equal_at", ties}});
}

} // namespace

ModeReport mode_and_unimodality(const FiniteDist &d) {
  auto w = d.weights();
  return *mode_report(w.size(), [&](std::uint64_t j, std::uint64_t k) {
    return compare(w[j], w[k]);
  });
}

std::optional<ModeReport> mode_and_unimodality(const CertDist &d) {
  if (d.family()) {
    // Past lambda the Poisson weights strictly decrease, so the truncated
    // range decides the mode as long as it reaches beyond lambda.
    if (d.cutoff() < d.family()->lambda)
      return std::nullopt;
  } else if (d.tail_mass_hi() > 0) {
    return std::nullopt;
  }
  return mode_report(d.size(), [&](std::uint64_t j, std::uint64_t k) {
    return d.compare_weights(j, k);
  });
}

Verdict check_right_skewed(const FiniteDist &d) {
  return right_skew_from(mode_and_unimodality(d), [&](std::uint64_t j, std::uint64_t k) {
    return compare(d.weight(static_cast<std::int64_t>(j)), d.weight(static_cast<std::int64_t>(k)));
  });
}

Verdict check_right_skewed(const CertDist &d) {
  auto mode = mode_and_unimodality(d);
  if (!mode)
    return Verdict::make_unresolved("right-skewed", {{"reason", "mode undecided"}});
  return right_skew_from(*mode, [&](std::uint64_t j, std::uint64_t k) {
    return d.compare_weights(j, k);
  });
}

std::vector<BigRat> AlphaSequence::exact_values() const {
  if (!exact)
    throw std::logic_error("alpha sequence is interval-valued");
  std::vector<BigRat> out;
  out.reserve(values.size());
  for (const auto &v : values)
    out.push_back(v.lo());
  return out;
}

AlphaSequence alpha_sequence(const FiniteDist &d) {
  BigRat mean = mean_exact(d);
  if (!is_integer(mean))
    throw PreconditionError("alpha sequence needs an integer mean, got " + to_string(mean));
  const std::uint64_t m = mean.get_num().get_ui();
  const auto tail = d.tail_table();
  auto tail_at = [&](std::uint64_t t) { return t < tail.size() ? tail[t] : BigRat(0); };
  AlphaSequence a;
  a.m = m;
  a.values.reserve(m);
  for (std::uint64_t i = 1; i <= m; ++i)
    a.values.push_back(CertInterval::point(1 - tail_at(m - i + 1) - tail_at(m + i)));
  return a;
}

AlphaSequence alpha_sequence(const CertDist &d) {
  if (!d.family())
    throw PreconditionError(
        "alpha sequence of a certified distribution needs a known family with integer mean");
  const std::uint64_t m = d.family()->lambda;
  const auto tail = tail_table(d);
  auto tail_at = [&](std::uint64_t t) {
    return t < tail.size() ? tail[t] : CertInterval(0, d.tail_mass_hi());
  };
  AlphaSequence a;
  a.m = m;
  a.exact = false;
  a.values.reserve(m);
  const CertInterval one = CertInterval::point(1);
  for (std::uint64_t i = 1; i <= m; ++i)
    a.values.push_back(one - tail_at(m - i + 1) - tail_at(m + i));
  return a;
}

Verdict check_single_sign_change(std::span<const CertInterval> v) {
  const char *name = "single-sign-change";
  // Longest certified non-negative prefix; everything after must be <= 0.
  std::size_t prefix = 0;
  while (prefix < v.size() && v[prefix].certainly_nonnegative())
    ++prefix;
  bool rest_nonpositive = true;
  for (std::size_t j = prefix; j < v.size(); ++j)
    rest_nonpositive = rest_nonpositive && v[j].certainly_nonpositive();
  if (rest_nonpositive)
    return Verdict::make_holds(name, {{"ell", prefix}});
  // A certified negative entry followed by a certified positive one.
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].certainly_negative())
      continue;
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[j].certainly_positive())
        return Verdict::make_fails(name, {{"index", i + 1}, {"later_positive", j + 1}});
    break;
  }
  return Verdict::make_unresolved(name, {{"certified_prefix", prefix}});
}

Verdict check_single_sign_change(std::span<const BigRat> v) {
  std::vector<CertInterval> pts;
  pts.reserve(v.size());
  for (const auto &x : v)
    pts.push_back(CertInterval::point(x));
  return check_single_sign_change(std::span<const CertInterval>(pts));
}

Verdict check_u_shaped(std::span<const CertInterval> v) {
  // U-shaped iff the negated first differences change sign once.
  std::vector<CertInterval> drops;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    drops.push_back(v[i] - v[i + 1]);
  Verdict inner = check_single_sign_change(std::span<const CertInterval>(drops));
  Verdict out{"u-shaped", inner.tag, nullptr, nullptr};
  if (inner.holds())
    out.certificate = {{"turn", inner.certificate["ell"].get<std::size_t>() + 1}};
  else if (inner.fails())
    out.witness = {{"rise_at", inner.witness["index"]},
                   {"later_drop_at", inner.witness["later_positive"]}};
  return out;
}

Verdict check_u_shaped(std::span<const BigRat> v) {
  std::vector<CertInterval> pts;
  pts.reserve(v.size());
  for (const auto &x : v)
    pts.push_back(CertInterval::point(x));
  return check_u_shaped(std::span<const CertInterval>(pts));
}

Verdict check_L1(const AlphaSequence &a) {
  const char *name = "L1";
  if (a.m == 0)
    return Verdict::make_holds(name, {{"degenerate", true}});
  Verdict sc = check_single_sign_change(std::span<const CertInterval>(a.values));
  if (sc.holds()) {
    // l ranges over [m], so the non-negative block must include alpha_1.
    std::size_t ell = sc.certificate["ell"];
    if (ell == 0) {
      if (a.values.front().certainly_negative())
        return Verdict::make_fails(name, {{"index", 1}, {"reason", "alpha_1 negative"}});
      return Verdict::make_unresolved(name, {{"certified_prefix", 0}});
    }
    return Verdict::make_holds(name, {{"ell", ell}});
  }
  if (sc.fails())
    return Verdict::make_fails(name, sc.witness);
  if (a.values.front().certainly_negative())
    return Verdict::make_fails(name, {{"index", 1}, {"reason", "alpha_1 negative"}});
  return Verdict::make_unresolved(name, sc.certificate);
}

Verdict check_L2(const AlphaSequence &a) {
  const char *name = "L2";
  if (a.m == 0)
    return Verdict::make_holds(name, {{"degenerate", true}});
  nlohmann::json sums = nlohmann::json::array();
  CertInterval running = CertInterval::point(0);
  std::optional<std::size_t> undecided;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    running = running + a.values[k];
    sums.push_back(to_json(running));
    if (running.certainly_negative())
      return Verdict::make_fails(name, {{"k", k + 1}, {"prefix_sum", to_json(running)}},
                                 {{"prefix_sums", sums}});
    if (!running.certainly_nonnegative() && !undecided)
      undecided = k + 1;
  }
  if (undecided)
    return Verdict::make_unresolved(name, {{"k", *undecided}, {"prefix_sums", sums}});
  return Verdict::make_holds(name, {{"prefix_sums", sums}});
}

Verdict check_left_loaded(const AlphaSequence &a) {
  Verdict l1 = check_L1(a);
  Verdict l2 = check_L2(a);
  nlohmann::json detail = {{"L1", to_json(l1)}, {"L2", to_json(l2)}};
  if (l1.holds() || l2.holds())
    return Verdict::make_holds("left-loaded", detail);
  if (l1.fails() && l2.fails())
    return Verdict::make_fails("left-loaded", {{"L1", l1.witness}, {"L2", l2.witness}}, detail);
  return Verdict::make_unresolved("left-loaded", detail);
}

Lemma1Sides lemma1_identity(const FiniteDist &d) {
  BigRat mean = mean_exact(d);
  if (!is_integer(mean))
    throw PreconditionError("alpha-sum identity needs an integer mean, got " + to_string(mean));
  const std::uint64_t m = mean.get_num().get_ui();
  const auto tail = d.tail_table();
  auto tail_at = [&](std::uint64_t t) { return t < tail.size() ? tail[t] : BigRat(0); };
  Lemma1Sides sides{0, 0};
  for (std::uint64_t i = 1; i <= m; ++i)
    sides.lhs += 1 - tail_at(m - i + 1) - tail_at(m + i);
  for (std::uint64_t t = 2 * m + 1; t < tail.size(); ++t)
    sides.rhs += tail[t];
  if (sides.lhs != sides.rhs)
    throw InvariantError("alpha-sum identity violated: " + to_string(sides.lhs) +
                         " != " + to_string(sides.rhs));
  return sides;
}

Verdict poisson_right_skew_exact(std::uint64_t s) {
  const char *name = "poisson-right-skewed";
  if (s == 0)
    throw PreconditionError("Poisson parameter must be a positive integer");
  // beta_1 = P(s-1)/P(s) through the cancelled-exponential ratio.
  BigRat beta1 = poisson_pmf_ratio(s, s - 1, s);
  if (beta1 > 1)
    return Verdict::make_fails(name, {{"i", 1}, {"beta", to_string(beta1)}});
  // beta_{i+1}/beta_i = (s+i)(s-i)/s^2.
  const BigInt s2 = BigInt(s) * s;
  for (std::uint64_t i = 1; i < s; ++i) {
    if (BigInt(s + i) * (s - i) > s2)
      return Verdict::make_fails(name, {{"i", i}, {"reason", "beta increases"}});
  }
  // Direct: (s-i+1)...(s+i-1) <= s^(2i-1).
  BigInt rising = s; // i = 1: the single factor s
  BigInt power = s;
  nlohmann::json equal_at = nlohmann::json::array();
  for (std::uint64_t i = 1; i <= s; ++i) {
    if (i > 1) {
      rising *= s - i + 1;
      rising *= s + i - 1;
      power *= s2;
    }
    int c = cmp(rising, power);
    if (c > 0)
      return Verdict::make_fails(name, {{"i", i}, {"reason", "direct check"}});
    if (c == 0)
      equal_at.push_back(i);
  }
  return Verdict::make_holds(name, {{"mode", s},
                                    {"beta_1", to_string(beta1)},
                                    {"ratio_checks", s - 1},
                                    {"direct_checks", s},
                                    {"equal_at", equal_at}});
}

Verdict poisson_simmons(std::uint64_t m, const Precision &precision) {
  const char *name = "poisson-simmons";
  if (m == 0)
    throw PreconditionError("Poisson parameter must be a positive integer");
  // alpha_1 = e^-m (A + B) - 1 with A = sum_{k<m} m^k/k!, B = A + m^m/m!.
  BigRat term = 1, a = 0;
  for (std::uint64_t k = 0; k < m; ++k) {
    if (k > 0)
      term *= make_rat(m, k);
    a += term;
  }
  term *= make_rat(m, m);
  const BigRat scaled = 2 * a + term;
  BigRat width = precision.exp_width;
  for (int round = 0; round < 16; ++round, width /= BigRat(BigInt(1) << 64)) {
    CertInterval e = exp_interval(m, width);
    CertInterval alpha1(scaled / e.hi() - 1, scaled / e.lo() - 1);
    if (alpha1.certainly_positive())
      return Verdict::make_holds(name, {{"alpha_1", to_json(alpha1)}});
    if (alpha1.certainly_nonpositive())
      return Verdict::make_fails(name, {{"alpha_1", to_json(alpha1)}});
  }
  return Verdict::make_unresolved(name, {{"width", to_string(width)}});
}

Verdict power_vs_factorial(std::uint64_t m) {
  if (m < 3)
    throw PreconditionError("m^(2m) >= (2m)! requires m >= 3 (it fails for m = 1, 2: 1 < 2, "
                            "16 < 24); got m = " + std::to_string(m));
  BigInt lhs = pow_int(m, 2 * m);
  BigInt rhs = factorial(2 * m);
  nlohmann::json cert = {{"m", m}, {"power", lhs.get_str()}, {"factorial", rhs.get_str()}};
  if (lhs >= rhs)
    return Verdict::make_holds("power-vs-factorial", cert);
  return Verdict::make_fails("power-vs-factorial", {{"m", m}}, cert);
}

Verdict poisson_L1_exact(std::uint64_t m, const Precision &precision) {
  const char *name = "poisson-L1";
  if (m < 3)
    throw PreconditionError("poisson_L1_exact requires m >= 3, got " + std::to_string(m));
  // beta_i = P(m+i)/P(m-i), built incrementally and pinned at both ends by the
  // direct pmf ratio.
  std::vector<BigRat> beta;
  beta.reserve(m);
  const BigInt m2 = BigInt(m) * m;
  beta.push_back(poisson_pmf_ratio(m, m + 1, m - 1));
  std::uint64_t descent_end = 0;
  for (std::uint64_t i = 1; i < m; ++i) {
    BigRat next = beta.back() * make_rat(m2, BigInt(m + i + 1) * (m - i));
    // beta_{i+1} <= beta_i  iff  i^2 + i <= m
    bool descends = next <= beta.back();
    if (descends != (i * i + i <= m))
      throw InvariantError("beta ratio criterion disagrees at i = " + std::to_string(i));
    if (descends)
      descent_end = i;
    beta.push_back(std::move(next));
  }
  if (beta.back() != poisson_pmf_ratio(m, 2 * m, 0))
    throw InvariantError("incremental beta_m disagrees with the direct ratio");

  Verdict u = check_u_shaped(std::span<const BigRat>(beta));
  if (!u.holds())
    return Verdict::make_fails(name, {{"step", "beta U-shaped"}, {"detail", u.witness}});
  if (beta.front() >= 1)
    return Verdict::make_fails(name, {{"step", "beta_1 < 1"}, {"beta_1", to_string(beta.front())}});
  Verdict pf = power_vs_factorial(m);
  if (!pf.holds() || beta.back() < 1)
    return Verdict::make_fails(name, {{"step", "beta_m >= 1"}, {"beta_m", to_string(beta.back())}});

  // a_i = P(m-i)(1 - beta_i) changes sign once, + then -.
  std::vector<BigRat> a_sign;
  a_sign.reserve(m);
  for (const auto &b : beta)
    a_sign.push_back(1 - b);
  Verdict sc = check_single_sign_change(std::span<const BigRat>(a_sign));
  if (!sc.holds())
    return Verdict::make_fails(name, {{"step", "a changes sign once"}, {"detail", sc.witness}});

  // alpha_{i+1} = alpha_i - a_i, so alpha is U-shaped; alpha_1 > 0 and
  // alpha_m = P(0) - P(X >= 2m) <= P(0) - P(2m) <= 0 pin the single sign change.
  Verdict simmons = poisson_simmons(m, precision);
  if (simmons.unresolved())
    return Verdict::make_unresolved(name, {{"step", "alpha_1 > 0"}});
  if (simmons.fails())
    return Verdict::make_fails(name, {{"step", "alpha_1 > 0"}, {"detail", simmons.witness}});

  return Verdict::make_holds(name, {{"m", m},
                                    {"beta_1", to_string(beta.front())},
                                    {"beta_descent_end", descent_end},
                                    {"beta_min_index", u.certificate["turn"]},
                                    {"a_positive_count", sc.certificate["ell"]},
                                    {"alpha_1", simmons.certificate["alpha_1"]}});
}

} // namespace tailcmp
