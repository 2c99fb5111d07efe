#pragma once

// Distributions on the non-negative integers: exact finite ones, and
// certified truncations of the Poisson family.

#include "tailcmp/exact.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tailcmp {

/// Precision knobs for certified (interval) computations.
struct Precision {
  BigRat exp_width;             // absolute width of the e^lambda enclosure
  std::uint64_t cutoff_cap;     // largest truncation point tried

  /// exp_width = 10^-30, cutoff_cap = 2^16.
  static Precision defaults();
};

struct PoissonSpec {
  std::uint64_t lambda;

  /// Throws PreconditionError when lambda == 0.
  explicit PoissonSpec(std::uint64_t lambda);
};

/// Bin(n, m/n): mean m, success probability m/n.
struct BinomialSpec {
  std::uint64_t n;
  std::uint64_t m;

  /// Throws PreconditionError unless 1 <= m <= n.
  BinomialSpec(std::uint64_t n, std::uint64_t m);
};

/// Exact distribution with weights on 0..N. Trailing zeros are allowed.
class FiniteDist {
public:
  /// Throws PreconditionError on a negative weight, an empty vector, or a
  /// total different from 1.
  explicit FiniteDist(std::vector<BigRat> weights);

  static FiniteDist point_mass(std::uint64_t at);

  std::span<const BigRat> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  /// P(X = k), zero outside the stored range.
  BigRat weight(std::int64_t k) const;

  /// P(X >= t) for every t in 0..size(); entry size() is 0.
  std::vector<BigRat> tail_table() const;

  friend bool operator==(const FiniteDist &, const FiniteDist &) = default;

private:
  std::vector<BigRat> weights_;
};

/// Truncated distribution with certified weight enclosures on 0..N and a
/// certified upper bound on the mass beyond N.
class CertDist {
public:
  /// Throws PreconditionError when the enclosures cannot belong to a
  /// probability distribution (weights outside [0,1], total mass out of reach).
  CertDist(std::vector<CertInterval> weights, BigRat tail_mass_hi,
           std::optional<PoissonSpec> family = std::nullopt);

  std::span<const CertInterval> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  std::uint64_t cutoff() const { return weights_.size() - 1; }
  const BigRat &tail_mass_hi() const { return tail_mass_hi_; }
  const std::optional<PoissonSpec> &family() const { return family_; }

  /// Enclosure of P(X = k). Beyond the cutoff this is [0, tail_mass_hi] for
  /// untagged distributions, or derived from the last weight through the exact
  /// pmf ratio when the Poisson family is known.
  CertInterval weight(std::int64_t k) const;

  /// Orders P(X = j) against P(X = k): interval comparison first, and the
  /// cancelled-exponential pmf ratio when that is Unresolved and the family
  /// is Poisson.
  Ordering compare_weights(std::uint64_t j, std::uint64_t k) const;

private:
  std::vector<CertInterval> weights_;
  BigRat tail_mass_hi_;
  std::optional<PoissonSpec> family_;
};

FiniteDist binomial_dist(const BinomialSpec &spec);

/// Certified truncation of Poi(lambda) at `cutoff`. e^-lambda is enclosed from
/// exp_interval(lambda, exp_width). Throws PreconditionError unless
/// cutoff + 2 > lambda.
CertDist poisson_truncate(const PoissonSpec &spec, const BigRat &exp_width,
                          std::uint64_t cutoff);

FiniteDist convolve(const FiniteDist &a, const FiniteDist &b);
/// Tail bounds add: P(A + B > Na + Nb) <= P(A > Na) + P(B > Nb).
CertDist convolve(const CertDist &a, const CertDist &b);

BigRat tail_prob(const FiniteDist &d, std::uint64_t t);
/// Intersection of the direct enclosure sum_{k >= t} w_k (+ tail bound) with
/// the complement 1 - sum_{k < t} w_k.
CertInterval tail_prob(const CertDist &d, std::uint64_t t);
/// P(X <= t).
CertInterval cdf(const CertDist &d, std::uint64_t t);

/// Enclosures of P(X >= t) for t = 0..cutoff+1, same construction as
/// tail_prob but in a single pass.
std::vector<CertInterval> tail_table(const CertDist &d);

BigRat mean_exact(const FiniteDist &d);

/// P(Poi(lambda) = j) / P(Poi(lambda) = k) = lambda^(j-k) k! / j!.
BigRat poisson_pmf_ratio(std::uint64_t lambda, std::uint64_t j, std::uint64_t k);

/// Default initial cutoff for Poi(lambda): max(4 lambda, lambda + 16).
std::uint64_t default_poisson_cutoff(std::uint64_t lambda);

/// {"weights": ["num/den", ...]}
std::string finite_dist_to_json(const FiniteDist &d);
/// Throws ParseError on malformed input and PreconditionError when the parsed
/// weights do not form a distribution.
FiniteDist finite_dist_from_json(std::string_view text);

} // namespace tailcmp
