#pragma once

// Reference computations for the tests. Each one takes a different route
// from the library: Pascal's rule instead of binomial coefficients, outcome
// enumeration instead of convolution loops, a tabulated value of e instead of
// a Taylor enclosure, and definitions summed term by term.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using Q = mpq_class;

// mpq_class(a, b) is not reduced; arithmetic on unreduced values is undefined.
inline Q frac(long num, long den) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

// Bin(n, p) by Pascal's rule on probabilities.
inline std::vector<Q> binomial_pascal(std::uint64_t n, Q p) {
  p.canonicalize();
  std::vector<Q> row{Q(1)};
  const Q q = 1 - p;
  for (std::uint64_t step = 0; step < n; ++step) {
    std::vector<Q> next(row.size() + 1, Q(0));
    for (std::size_t k = 0; k < row.size(); ++k) {
      next[k] += q * row[k];
      next[k + 1] += p * row[k];
    }
    row = std::move(next);
  }
  return row;
}

// Distribution of A + B by enumerating every pair of outcomes.
inline std::vector<Q> sum_by_enumeration(const std::vector<Q> &a, const std::vector<Q> &b) {
  std::map<std::size_t, Q> acc;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      acc[i + j] += a[i] * b[j];
  std::vector<Q> out(a.size() + b.size() - 1, Q(0));
  for (const auto &[k, v] : acc)
    out[k] = v;
  return out;
}

inline Q tail(const std::vector<Q> &w, std::uint64_t t) {
  Q s = 0;
  for (std::size_t k = t; k < w.size(); ++k)
    s += w[k];
  return s;
}

inline Q cdf(const std::vector<Q> &w, std::int64_t t) {
  Q s = 0;
  for (std::int64_t k = 0; k <= t && k < static_cast<std::int64_t>(w.size()); ++k)
    s += w[k];
  return s;
}

inline Q mean(const std::vector<Q> &w) {
  Q s = 0;
  for (std::size_t k = 0; k < w.size(); ++k)
    s += w[k] * static_cast<unsigned long>(k);
  return s;
}

// alpha_i = P(X <= m - i) - P(X >= m + i) summed straight from the weights.
inline std::vector<Q> alpha(const std::vector<Q> &w, std::uint64_t m) {
  std::vector<Q> a;
  for (std::uint64_t i = 1; i <= m; ++i)
    a.push_back(cdf(w, static_cast<std::int64_t>(m - i)) - tail(w, m + i));
  return a;
}

// sum_{j >= m+1} P(X >= m + j).
inline Q lemma1_rhs(const std::vector<Q> &w, std::uint64_t m) {
  Q s = 0;
  for (std::uint64_t j = m + 1; m + j < w.size(); ++j)
    s += tail(w, m + j);
  return s;
}

inline Q weight(const std::vector<Q> &w, std::int64_t k) {
  return k >= 0 && k < static_cast<std::int64_t>(w.size()) ? w[k] : Q(0);
}

// Largest index of the maximum weight.
inline std::uint64_t largest_mode(const std::vector<Q> &w) {
  std::uint64_t best = 0;
  for (std::size_t k = 1; k < w.size(); ++k)
    if (w[k] >= w[best])
      best = k;
  return best;
}

// Non-decreasing up to some point and non-increasing after it.
inline bool unimodal(const std::vector<Q> &w) {
  std::size_t k = 0;
  while (k + 1 < w.size() && w[k] <= w[k + 1])
    ++k;
  while (k + 1 < w.size() && w[k] >= w[k + 1])
    ++k;
  return k + 1 >= w.size();
}

inline bool right_skewed(const std::vector<Q> &w) {
  if (!unimodal(w))
    return false;
  const auto s = static_cast<std::int64_t>(largest_mode(w));
  for (std::int64_t i = 1; i <= s; ++i)
    if (weight(w, s - i) > weight(w, s + i - 1))
      return false;
  return true;
}

inline bool condition_L2(const std::vector<Q> &a) {
  Q s = 0;
  for (const auto &x : a) {
    s += x;
    if (s < 0)
      return false;
  }
  return true;
}

inline bool condition_L1(const std::vector<Q> &a) {
  for (std::size_t ell = 1; ell <= a.size(); ++ell) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i)
      ok = i < ell ? a[i] >= 0 : a[i] <= 0;
    if (ok)
      return true;
  }
  return a.empty();
}

// e to 60 decimal places, truncated; the true value lies in [lo, lo + 10^-60].
inline Q e_lower() {
  static const Q v(
      "2718281828459045235360287471352662497757247093699959574966967/"
      "1000000000000000000000000000000000000000000000000000000000000");
  return v;
}
inline Q e_upper() { return e_lower() + Q(1, mpz_class("1" + std::string(60, '0'))); }

inline Q power(const Q &x, std::uint64_t n) {
  Q r = 1;
  for (std::uint64_t i = 0; i < n; ++i)
    r *= x;
  return r;
}

struct Bounds {
  Q lo, hi;
  bool contains(const Q &x) const { return lo <= x && x <= hi; }
};

inline Bounds exp_bounds(std::uint64_t lambda) {
  return {power(e_lower(), lambda), power(e_upper(), lambda)};
}

// P(Poi(lambda) = k) enclosed through the tabulated e.
inline Bounds poisson_pmf(std::uint64_t lambda, std::uint64_t k) {
  Q scaled = 1;
  for (std::uint64_t j = 1; j <= k; ++j)
    scaled *= frac(static_cast<long>(lambda), static_cast<long>(j));
  const Bounds e = exp_bounds(lambda);
  return {scaled / e.hi, scaled / e.lo};
}

// P(Poi(lambda) >= t) = 1 - P(Poi(lambda) < t).
inline Bounds poisson_tail(std::uint64_t lambda, std::uint64_t t) {
  Q lo = 0, hi = 0;
  for (std::uint64_t k = 0; k < t; ++k) {
    const Bounds b = poisson_pmf(lambda, k);
    lo += b.lo;
    hi += b.hi;
  }
  return {1 - hi, 1 - lo};
}

// Random distribution with small integer weights over a common denominator.
inline std::vector<Q> random_weights(std::mt19937_64 &rng, std::size_t size) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::vector<long> raw(size);
  long total = 0;
  for (auto &r : raw)
    total += (r = pick(rng));
  if (total == 0) {
    raw[0] = 1;
    total = 1;
  }
  std::vector<Q> w;
  for (long r : raw)
    w.push_back(frac(r, total));
  return w;
}

// Random distribution whose mean is exactly `m`: mass split between points
// below and above m in proportions that balance.
inline std::vector<Q> random_integer_mean(std::mt19937_64 &rng, std::uint64_t m,
                                          std::size_t size) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::vector<Q> raw(size, Q(0));
  for (std::size_t k = 0; k < size; ++k)
    raw[k] = pick(rng);
  // Shift mass so the mean is m: scale the part below m against the part above.
  Q below = 0, above = 0, below_mass = 0, above_mass = 0;
  for (std::size_t k = 0; k < size; ++k) {
    const Q d = Q(static_cast<long>(k)) - static_cast<long>(m);
    if (d < 0) {
      below += -d * raw[k];
      below_mass += raw[k];
    } else if (d > 0) {
      above += d * raw[k];
      above_mass += raw[k];
    }
  }
  if (below == 0 || above == 0) {
    std::vector<Q> w(std::max<std::size_t>(size, m + 1), Q(0));
    w[m] = 1;
    return w;
  }
  for (std::size_t k = 0; k < size; ++k)
    if (k < m)
      raw[k] *= above;
    else if (k > m)
      raw[k] *= below;
  Q total = 0;
  for (const auto &r : raw)
    total += r;
  for (auto &r : raw)
    r /= total;
  return raw;
}

} // namespace oracle
