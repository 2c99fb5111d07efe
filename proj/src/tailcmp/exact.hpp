#pragma once

// Exact scalars, certified intervals and the combinatorial helpers the rest of
// the library is built on. BigInt/BigRat are GMP's mpz_class/mpq_class; every
// BigRat that leaves this module is canonical (lowest terms, positive
// denominator).

#include <cstdint>
#include <gmpxx.h>
#include <string>
#include <string_view>

namespace tailcmp {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// num/den in lowest terms. Throws DomainError when den == 0.
BigRat make_rat(const BigInt &num, const BigInt &den);

/// Parses "a/b", "a", or a decimal literal with optional exponent ("0.25",
/// "1e-30"). Throws ParseError on anything else.
BigRat parse_rat(std::string_view text);

/// Canonical "num/den" text; integers are printed without a denominator.
std::string to_string(const BigRat &x);

bool is_integer(const BigRat &x);

BigInt factorial(std::uint64_t n);
BigInt pow_int(const BigInt &base, std::uint64_t exp);

/// n! / (k! (n-k)!). Throws DomainError when k > n.
BigInt binom_coeff(std::uint64_t n, std::uint64_t k);

enum class Ordering { Less, Equal, Greater, Unresolved };

const char *to_string(Ordering o);

/// Closed interval [lo, hi] of rationals that encloses some true value.
class CertInterval {
public:
  CertInterval() = default;
  /// Throws DomainError when lo > hi.
  CertInterval(BigRat lo, BigRat hi);

  static CertInterval point(const BigRat &x) { return CertInterval(x, x); }

  const BigRat &lo() const { return lo_; }
  const BigRat &hi() const { return hi_; }
  bool is_exact() const { return lo_ == hi_; }
  BigRat width() const { return hi_ - lo_; }
  bool contains(const BigRat &x) const { return lo_ <= x && x <= hi_; }
  bool contains(const CertInterval &other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool intersects(const CertInterval &other) const {
    return lo_ <= other.hi_ && other.lo_ <= hi_;
  }

  bool certainly_nonnegative() const { return lo_ >= 0; }
  bool certainly_positive() const { return lo_ > 0; }
  bool certainly_nonpositive() const { return hi_ <= 0; }
  bool certainly_negative() const { return hi_ < 0; }

  friend bool operator==(const CertInterval &, const CertInterval &) = default;

private:
  BigRat lo_{0};
  BigRat hi_{0};
};

CertInterval interval_add(const CertInterval &a, const CertInterval &b);
CertInterval interval_sub(const CertInterval &a, const CertInterval &b);
CertInterval interval_mul(const CertInterval &a, const CertInterval &b);
CertInterval interval_neg(const CertInterval &a);
/// Intersection of two enclosures of the same value. Throws InvariantError
/// when they are disjoint, since at least one of them would then be unsound.
CertInterval interval_meet(const CertInterval &a, const CertInterval &b);

inline CertInterval operator+(const CertInterval &a, const CertInterval &b) {
  return interval_add(a, b);
}
inline CertInterval operator-(const CertInterval &a, const CertInterval &b) {
  return interval_sub(a, b);
}
inline CertInterval operator*(const CertInterval &a, const CertInterval &b) {
  return interval_mul(a, b);
}

/// Greater iff a.lo > b.hi, Less iff a.hi < b.lo. Equal only when both
/// intervals are degenerate and coincide; overlapping intervals are Unresolved.
Ordering compare(const CertInterval &a, const CertInterval &b);
Ordering compare(const BigRat &a, const BigRat &b);

/// Rounds onto the grid 2^-bits, towards -infinity and +infinity.
BigRat dyadic_floor(const BigRat &x, std::uint64_t bits);
BigRat dyadic_ceil(const BigRat &x, std::uint64_t bits);

/// Encloses e^lambda with hi - lo <= width, from a partial Taylor sum and a
/// geometric bound on the remainder. Throws DomainError unless width > 0.
CertInterval exp_interval(std::uint64_t lambda, const BigRat &width);

/// Encloses e^-lambda. The width bound is relative to the enclosure of
/// e^lambda it is derived from, see exp_interval.
CertInterval exp_neg_interval(std::uint64_t lambda, const BigRat &width);

} // namespace tailcmp
