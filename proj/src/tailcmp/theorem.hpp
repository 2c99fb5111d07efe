#pragma once

// End-to-end checks of the tail comparison P(S >= s) >= P(S + X >= s + m),
// its proof certificate, and the classical tail-monotonicity inequalities for
// binomial and Poisson sums.

#include "tailcmp/dist.hpp"
#include "tailcmp/errors.hpp"
#include "tailcmp/predicates.hpp"
#include "tailcmp/verdict.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tailcmp {

struct TheoremReport {
  /// "right-skewed", "left-loaded", "mode-dominates-mean"
  std::map<std::string, Verdict> hypotheses;
  std::uint64_t s = 0; // canonical mode of S
  std::uint64_t m = 0; // mean of X
  BigRat lhs_tail;     // P(S >= s)
  BigRat rhs_tail;     // P(S + X >= s + m)
  Verdict conclusion;

  bool hypotheses_hold() const;
};

/// Evaluates every hypothesis and, independently, the conclusion. Throws
/// PreconditionError when X's mean is not an integer.
TheoremReport theorem1_check(const FiniteDist &S, const FiniteDist &X);

nlohmann::json to_json(const TheoremReport &r);

enum class ProofRoute { L1, L2 };

const char *to_string(ProofRoute r);

/// The quantities of the proof, evaluated exactly, and the checks tying them
/// together.
struct ProofCertificate {
  std::uint64_t s = 0;
  std::uint64_t m = 0;
  std::vector<BigRat> delta; // P(S = s+i-1) - P(S = s+m), i in [m]
  AlphaSequence alpha;
  std::vector<BigRat> prefix_sums; // Sigma_i = alpha_1 + ... + alpha_i
  BigRat pairing_sum;              // sum_i delta_i alpha_i
  BigRat summation_by_parts;       // delta_m Sigma_m + sum_{i<m} (delta_i - delta_{i+1}) Sigma_i
  ProofRoute route = ProofRoute::L2;
  std::optional<std::uint64_t> ell; // L1 split point
  BigRat route_bound;               // L1: delta_ell * Sigma_m; L2: summation_by_parts

  // Both sides of the reduced inequality and the intermediate bounds.
  BigRat L, L1, L2, R, R1, R2;
  BigRat tail_gap; // P(S >= s) - P(S + X >= s + m)

  bool delta_monotone = false;      // delta_1 >= ... >= delta_m >= 0
  bool split_bound = false;         // L <= L1 + L2
  bool right_skew_bound = false;    // L1 <= R1
  bool lemma1_bound = false;        // L2 <= R2
  bool reduction_identity = false;  // tail_gap == R - L
  bool pairing_identity = false;    // pairing_sum == R - (R1 + R2)
  bool sbp_identity = false;        // pairing_sum == summation_by_parts
  bool route_nonnegative = false;   // pairing_sum >= route_bound >= 0 (L1) or all SBP terms >= 0 (L2)

  bool valid() const;
};

/// Thrown when a certificate is requested for inputs whose hypotheses fail.
class HypothesisError : public PreconditionError {
public:
  explicit HypothesisError(Verdict failing);
  const Verdict &verdict() const { return verdict_; }

private:
  Verdict verdict_;
};

ProofCertificate theorem1_certificate(const FiniteDist &S, const FiniteDist &X);

nlohmann::json to_json(const ProofCertificate &c);

/// One step k of a tail-monotonicity chain: lhs = P(T_k >= t_k),
/// rhs = P(T_{k+1} >= t_{k+1}).
struct TailStep {
  std::uint64_t k = 0;
  CertInterval lhs;
  CertInterval rhs;
  Verdict verdict;
  nlohmann::json detail;
};

struct TailReport {
  std::string theorem;
  nlohmann::json params;
  std::vector<TailStep> steps;
  nlohmann::json notes;

  VerdictTag overall() const;
};

/// {"theorem", "params", "steps": [{"k", "lhs", "rhs", "verdict", ...}], "notes"}
nlohmann::json to_json(const TailReport &r);

/// Certified P(Poi(lambda) >= t) at refinement round `round`: the cutoff
/// starts at max(default_poisson_cutoff(lambda), t) and doubles each round, and
/// the e^lambda width shrinks by 2^-64 per round. nullopt once the cutoff
/// exceeds precision.cutoff_cap.
std::optional<CertInterval> poisson_tail(std::uint64_t lambda, std::uint64_t t,
                                         const Precision &precision, unsigned round = 0);

/// Certifies P(Poi(la) >= ta) against P(Poi(lb) >= tb), refining until the
/// enclosures separate or the cap is reached.
struct PoissonTailComparison {
  CertInterval lhs;
  CertInterval rhs;
  Ordering order = Ordering::Unresolved;
  unsigned rounds = 0;
};
PoissonTailComparison compare_poisson_tails(std::uint64_t la, std::uint64_t ta,
                                            std::uint64_t lb, std::uint64_t tb,
                                            const Precision &precision);

/// P(Bin(nk, 1/n) >= k) >= P(Bin(n(k+1), 1/n) >= k+1), k = 1..k_max, exactly.
TailReport verify_chaundy_bullard(std::uint64_t n, std::uint64_t k_max, unsigned jobs = 1);

/// P(Poi(k) >= k) >= P(Poi(k+1) >= k+1), k = 1..k_max, certified.
TailReport verify_teicher(std::uint64_t k_max, const Precision &precision = Precision::defaults(),
                          unsigned jobs = 1);

/// Tail monotonicity along partial sums of independent Poi(lambda_i). Throws
/// PreconditionError naming the first k with lambda_1 + ... + lambda_k < lambda_{k+1}.
TailReport verify_kane_poisson(std::span<const std::uint64_t> lambdas,
                               const Precision &precision = Precision::defaults(),
                               unsigned jobs = 1);

/// P(Bin(nk, m/n) >= km) >= P(Bin(n(k+1), m/n) >= (k+1)m), k = 1..k_max,
/// exactly. Throws PreconditionError unless n >= m >= 1.
TailReport verify_jogdeo_samuels(std::uint64_t n, std::uint64_t m, std::uint64_t k_max,
                                 unsigned jobs = 1);

} // namespace tailcmp
