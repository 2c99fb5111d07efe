#include "tailcmp/dist.hpp"

#include "tailcmp/errors.hpp"

#include <algorithm>
#include <json.hpp>

namespace tailcmp {

Precision Precision::defaults() {
  return Precision{make_rat(1, pow_int(10, 30)), std::uint64_t{1} << 16};
}

PoissonSpec::PoissonSpec(std::uint64_t lambda_) : lambda(lambda_) {
  if (lambda == 0)
    throw PreconditionError("Poisson parameter must be a positive integer");
}

BinomialSpec::BinomialSpec(std::uint64_t n_, std::uint64_t m_) : n(n_), m(m_) {
  if (m < 1 || m > n)
    throw PreconditionError("binomial spec requires 1 <= m <= n, got n = " +
                            std::to_string(n) + ", m = " + std::to_string(m));
}

FiniteDist::FiniteDist(std::vector<BigRat> weights) : weights_(std::move(weights)) {
  if (weights_.empty())
    throw PreconditionError("distribution needs at least one weight");
  BigRat total = 0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (weights_[k] < 0)
      throw PreconditionError("negative weight at " + std::to_string(k));
    total += weights_[k];
  }
  if (total != 1)
    throw PreconditionError("weights sum to " + to_string(total) + ", not 1");
}

FiniteDist FiniteDist::point_mass(std::uint64_t at) {
  std::vector<BigRat> w(at + 1, BigRat(0));
  w[at] = 1;
  return FiniteDist(std::move(w));
}

BigRat FiniteDist::weight(std::int64_t k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= weights_.size())
    return 0;
  return weights_[static_cast<std::size_t>(k)];
}

std::vector<BigRat> FiniteDist::tail_table() const {
  std::vector<BigRat> tail(weights_.size() + 1, BigRat(0));
  for (std::size_t k = weights_.size(); k-- > 0;)
    tail[k] = tail[k + 1] + weights_[k];
  return tail;
}

CertDist::CertDist(std::vector<CertInterval> weights, BigRat tail_mass_hi,
                   std::optional<PoissonSpec> family)
    : weights_(std::move(weights)), tail_mass_hi_(std::move(tail_mass_hi)),
      family_(family) {
  if (weights_.empty())
    throw PreconditionError("certified distribution needs at least one weight");
  if (tail_mass_hi_ < 0)
    throw PreconditionError("negative tail mass bound");
  BigRat lo_sum = 0;
  BigRat hi_sum = 0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const auto &w = weights_[k];
    if (w.lo() < 0 || w.hi() > 1)
      throw PreconditionError("weight enclosure at " + std::to_string(k) +
                              " is not inside [0, 1]");
    lo_sum += w.lo();
    hi_sum += w.hi();
  }
  if (lo_sum > 1 || hi_sum + tail_mass_hi_ < 1)
    throw PreconditionError("weight enclosures cannot sum to 1");
}

CertInterval CertDist::weight(std::int64_t k) const {
  if (k < 0)
    return CertInterval::point(0);
  const auto uk = static_cast<std::uint64_t>(k);
  if (uk <= cutoff())
    return weights_[uk];
  if (family_) {
    BigRat ratio = poisson_pmf_ratio(family_->lambda, uk, cutoff());
    const auto &last = weights_.back();
    return CertInterval(last.lo() * ratio, std::min(BigRat(last.hi() * ratio), tail_mass_hi_));
  }
  return CertInterval(0, tail_mass_hi_);
}

Ordering CertDist::compare_weights(std::uint64_t j, std::uint64_t k) const {
  Ordering o = compare(weight(static_cast<std::int64_t>(j)), weight(static_cast<std::int64_t>(k)));
  if (o != Ordering::Unresolved || !family_)
    return o;
  return compare(poisson_pmf_ratio(family_->lambda, j, k), BigRat(1));
}

FiniteDist binomial_dist(const BinomialSpec &spec) {
  // C(n,k) m^k (n-m)^(n-k) / n^n, built from integer numerators.
  const std::uint64_t n = spec.n;
  const BigInt den = pow_int(n, n);
  std::vector<BigInt> succ(n + 1), fail(n + 1);
  succ[0] = 1;
  fail[0] = 1;
  for (std::uint64_t k = 1; k <= n; ++k) {
    succ[k] = succ[k - 1] * spec.m;
    fail[k] = fail[k - 1] * (n - spec.m);
  }
  std::vector<BigRat> w;
  w.reserve(n + 1);
  BigInt c = 1;
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (k > 0) {
      c *= n - k + 1;
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), k);
    }
    w.push_back(make_rat(c * succ[k] * fail[n - k], den));
  }
  return FiniteDist(std::move(w));
}

std::uint64_t default_poisson_cutoff(std::uint64_t lambda) {
  return std::max(4 * lambda, lambda + 16);
}

CertDist poisson_truncate(const PoissonSpec &spec, const BigRat &exp_width,
                          std::uint64_t cutoff) {
  const std::uint64_t lambda = spec.lambda;
  if (cutoff + 2 <= lambda)
    throw PreconditionError("poisson_truncate: cutoff " + std::to_string(cutoff) +
                            " too small for lambda " + std::to_string(lambda));
  const CertInterval e_neg = exp_neg_interval(lambda, exp_width);
  // Weights are rounded outward onto a dyadic grid so that sums of them stay
  // small; the grid is fine enough that the accumulated rounding over all
  // weights stays below the resolution of e_neg itself.
  auto grid_of = [](const BigRat &x) { return mpz_sizeinbase(x.get_den().get_mpz_t(), 2) - 1; };
  const std::uint64_t bits = std::max(grid_of(e_neg.lo()), grid_of(e_neg.hi())) +
                             mpz_sizeinbase(BigInt(cutoff + 1).get_mpz_t(), 2);
  std::vector<CertInterval> weights;
  weights.reserve(cutoff + 1);
  BigRat scaled = 1; // lambda^k / k!
  for (std::uint64_t k = 0; k <= cutoff; ++k) {
    if (k > 0)
      scaled *= make_rat(lambda, k);
    weights.emplace_back(dyadic_floor(scaled * e_neg.lo(), bits),
                         std::min(dyadic_ceil(scaled * e_neg.hi(), bits), BigRat(1)));
  }
  BigRat next = scaled * make_rat(lambda, cutoff + 1);
  BigRat tail = next * make_rat(cutoff + 2, cutoff + 2 - lambda) * e_neg.hi();
  return CertDist(std::move(weights), std::move(tail), spec);
}

FiniteDist convolve(const FiniteDist &a, const FiniteDist &b) {
  const auto wa = a.weights();
  const auto wb = b.weights();
  std::vector<BigRat> out(wa.size() + wb.size() - 1, BigRat(0));
  for (std::size_t i = 0; i < wa.size(); ++i) {
    if (wa[i] == 0)
      continue;
    for (std::size_t j = 0; j < wb.size(); ++j)
      out[i + j] += wa[i] * wb[j];
  }
  return FiniteDist(std::move(out));
}

CertDist convolve(const CertDist &a, const CertDist &b) {
  const auto wa = a.weights();
  const auto wb = b.weights();
  auto sup = [](std::span<const CertInterval> w, const BigRat &tail) {
    BigRat m = tail;
    for (const auto &x : w)
      m = std::max(m, x.hi());
    return std::min(m, BigRat(1));
  };
  // Mass from beyond either cutoff can land on any index.
  const BigRat spill = a.tail_mass_hi() * sup(wb, b.tail_mass_hi()) +
                       b.tail_mass_hi() * sup(wa, a.tail_mass_hi());
  std::vector<BigRat> lo(wa.size() + wb.size() - 1, BigRat(0));
  std::vector<BigRat> hi(lo.size(), BigRat(0));
  for (std::size_t i = 0; i < wa.size(); ++i)
    for (std::size_t j = 0; j < wb.size(); ++j) {
      lo[i + j] += wa[i].lo() * wb[j].lo();
      hi[i + j] += wa[i].hi() * wb[j].hi();
    }
  std::vector<CertInterval> out;
  out.reserve(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k)
    out.emplace_back(lo[k], std::min(BigRat(hi[k] + spill), BigRat(1)));
  return CertDist(std::move(out), a.tail_mass_hi() + b.tail_mass_hi());
}

BigRat tail_prob(const FiniteDist &d, std::uint64_t t) {
  BigRat sum = 0;
  const auto w = d.weights();
  for (std::size_t k = t; k < w.size(); ++k)
    sum += w[k];
  return sum;
}

namespace {

// Meets the direct enclosure of P(X >= t) with the complement of P(X < t).
CertInterval tail_from_sums(const BigRat &below_lo, const BigRat &below_hi,
                            const BigRat &above_lo, const BigRat &above_hi) {
  CertInterval direct(above_lo, std::min(above_hi, BigRat(1)));
  CertInterval complement(std::max(BigRat(1 - below_hi), BigRat(0)), 1 - below_lo);
  return interval_meet(direct, complement);
}

} // namespace

CertInterval tail_prob(const CertDist &d, std::uint64_t t) {
  const auto w = d.weights();
  BigRat below_lo = 0, below_hi = 0, above_lo = 0, above_hi = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k < t) {
      below_lo += w[k].lo();
      below_hi += w[k].hi();
    } else {
      above_lo += w[k].lo();
      above_hi += w[k].hi();
    }
  }
  if (t > d.cutoff() + 1)
    below_hi += d.tail_mass_hi();
  else
    above_hi += d.tail_mass_hi();
  return tail_from_sums(below_lo, below_hi, above_lo, above_hi);
}

std::vector<CertInterval> tail_table(const CertDist &d) {
  const auto w = d.weights();
  const std::size_t n = w.size();
  std::vector<BigRat> suffix_lo(n + 1, BigRat(0)), suffix_hi(n + 1, BigRat(0));
  for (std::size_t k = n; k-- > 0;) {
    suffix_lo[k] = suffix_lo[k + 1] + w[k].lo();
    suffix_hi[k] = suffix_hi[k + 1] + w[k].hi();
  }
  std::vector<CertInterval> out;
  out.reserve(n + 1);
  BigRat below_lo = 0, below_hi = 0;
  for (std::size_t t = 0; t <= n; ++t) {
    if (t > 0) {
      below_lo += w[t - 1].lo();
      below_hi += w[t - 1].hi();
    }
    out.push_back(
        tail_from_sums(below_lo, below_hi, suffix_lo[t], suffix_hi[t] + d.tail_mass_hi()));
  }
  return out;
}

CertInterval cdf(const CertDist &d, std::uint64_t t) {
  CertInterval upper = tail_prob(d, t + 1);
  return CertInterval(1 - upper.hi(), 1 - upper.lo());
}

BigRat mean_exact(const FiniteDist &d) {
  BigRat sum = 0;
  const auto w = d.weights();
  for (std::size_t k = 1; k < w.size(); ++k)
    sum += w[k] * k;
  return sum;
}

BigRat poisson_pmf_ratio(std::uint64_t lambda, std::uint64_t j, std::uint64_t k) {
  if (lambda == 0)
    throw PreconditionError("Poisson parameter must be a positive integer");
  if (j == k)
    return 1;
  // lambda^(j-k) * k! / j!
  if (j > k) {
    BigInt rising = 1; // (k+1) ... j
    for (std::uint64_t i = k + 1; i <= j; ++i)
      rising *= i;
    return make_rat(pow_int(lambda, j - k), rising);
  }
  BigInt rising = 1; // (j+1) ... k
  for (std::uint64_t i = j + 1; i <= k; ++i)
    rising *= i;
  return make_rat(rising, pow_int(lambda, k - j));
}

std::string finite_dist_to_json(const FiniteDist &d) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &w : d.weights())
    arr.push_back(to_string(w));
  return nlohmann::json{{"weights", arr}}.dump();
}

FiniteDist finite_dist_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("distribution JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array())
    throw ParseError("distribution JSON must be an object with a \"weights\" array");
  std::vector<BigRat> weights;
  for (const auto &item : doc["weights"]) {
    if (item.is_string())
      weights.push_back(parse_rat(item.get<std::string>()));
    else if (item.is_number())
      weights.push_back(parse_rat(item.dump()));
    else
      throw ParseError("distribution weights must be strings or numbers");
  }
  return FiniteDist(std::move(weights));
}

} // namespace tailcmp
