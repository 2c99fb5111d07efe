#pragma once

// Decision procedures for the hypotheses of the tail-comparison theorem:
// unimodality and mode, right-skewness, the alpha-sequence with Conditions
// L1/L2, and closed-form rational criteria for the Poisson family.

#include "tailcmp/dist.hpp"
#include "tailcmp/verdict.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tailcmp {

struct ModeReport {
  bool unimodal = false;
  std::uint64_t canonical_mode = 0; // largest maximizer
  std::vector<std::uint64_t> maximizers;
  /// When not unimodal: k such that the step k -> k+1 breaks the
  /// up-then-down pattern around canonical_mode.
  std::optional<std::uint64_t> violation;
};

ModeReport mode_and_unimodality(const FiniteDist &d);
/// nullopt when interval overlaps leave some needed ordering undecided.
std::optional<ModeReport> mode_and_unimodality(const CertDist &d);

/// P(S = s - i) <= P(S = s + i - 1) for i in [s], s the canonical mode.
Verdict check_right_skewed(const FiniteDist &d);
Verdict check_right_skewed(const CertDist &d);

/// alpha_i = P(X <= m - i) - P(X >= m + i), i = 1..m.
struct AlphaSequence {
  std::uint64_t m = 0;
  std::vector<CertInterval> values; // degenerate intervals when exact
  bool exact = true;

  /// Throws std::logic_error when the sequence is interval-valued.
  std::vector<BigRat> exact_values() const;
};

/// Throws PreconditionError unless the mean is a non-negative integer. Mean 0
/// yields the empty sequence.
AlphaSequence alpha_sequence(const FiniteDist &d);
/// Requires the Poisson family tag, the only way to certify an integral mean.
AlphaSequence alpha_sequence(const CertDist &d);

/// Condition L1: alpha >= 0 up to some l in [m], <= 0 after. The certificate
/// carries the largest such l.
Verdict check_L1(const AlphaSequence &a);
/// Condition L2: every prefix sum of alpha is >= 0.
Verdict check_L2(const AlphaSequence &a);
/// L1 or L2.
Verdict check_left_loaded(const AlphaSequence &a);

/// (>= 0)* followed by (<= 0)*. Fails with the first negative entry that is
/// followed by a positive one (1-based).
Verdict check_single_sign_change(std::span<const CertInterval> v);
Verdict check_single_sign_change(std::span<const BigRat> v);
/// Non-increasing then non-decreasing.
Verdict check_u_shaped(std::span<const CertInterval> v);
Verdict check_u_shaped(std::span<const BigRat> v);

struct Lemma1Sides {
  BigRat lhs; // sum_{i=1}^m alpha_i
  BigRat rhs; // sum_{i >= m+1} P(X >= m + i)
};

/// Throws PreconditionError for a non-integer mean and InvariantError if the
/// two sides differ.
Lemma1Sides lemma1_identity(const FiniteDist &d);

/// Right-skewness of Poi(s) from integer arithmetic alone: beta_1 = 1 and
/// beta_{i+1} <= beta_i iff s^2 - i^2 <= s^2, with every beta_i <= 1 also
/// checked directly as s^(2i-1) (s-i)! >= (s+i-1)!.
Verdict poisson_right_skew_exact(std::uint64_t s);

/// Simmons' inequality P(X <= m-1) > P(X >= m+1) for X ~ Poi(m), certified
/// against an enclosure of e^m (refined until it resolves or the cap is hit).
Verdict poisson_simmons(std::uint64_t m, const Precision &precision = Precision::defaults());

/// Condition L1 for Poi(m), m >= 3, rebuilt from the U-shape of
/// beta_i = P(m+i)/P(m-i). Throws PreconditionError for m < 3.
Verdict poisson_L1_exact(std::uint64_t m, const Precision &precision = Precision::defaults());

/// m^(2m) >= (2m)!. Throws PreconditionError for m < 3, where it is false
/// (1 < 2 and 16 < 24).
Verdict power_vs_factorial(std::uint64_t m);

} // namespace tailcmp
