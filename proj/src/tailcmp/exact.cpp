#include "tailcmp/exact.hpp"

#include "tailcmp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace tailcmp {

BigRat make_rat(const BigInt &num, const BigInt &den) {
  if (den == 0)
    throw DomainError("rational with zero denominator");
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
           return std::isdigit(c) != 0;
         });
}

BigInt parse_signed_int(std::string_view s, std::string_view whole) {
  std::string_view digits = s;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!all_digits(digits))
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  BigInt v(std::string(digits), 10);
  return negative ? BigInt(-v) : v;
}

BigRat parse_decimal(std::string_view text) {
  std::string_view s = text;
  long long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    BigInt ex = parse_signed_int(s.substr(e + 1), text);
    if (!ex.fits_slong_p() || abs(ex) > 100000)
      throw ParseError("exponent out of range in '" + std::string(text) + "'");
    exponent = ex.get_si();
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp)))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long long>(fp.size());
  } else {
    if (!all_digits(s))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    digits = std::string(s);
  }
  BigInt mant(digits, 10);
  if (negative)
    mant = -mant;
  if (exponent >= 0)
    return BigRat(mant * pow_int(10, static_cast<std::uint64_t>(exponent)));
  return make_rat(mant, pow_int(10, static_cast<std::uint64_t>(-exponent)));
}

} // namespace

BigRat parse_rat(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty())
    throw ParseError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_signed_int(text.substr(0, slash), text);
    BigInt den = parse_signed_int(text.substr(slash + 1), text);
    if (den == 0)
      throw ParseError("zero denominator in '" + std::string(text) + "'");
    return make_rat(num, den);
  }
  return parse_decimal(text);
}

std::string to_string(const BigRat &x) { return x.get_str(10); }

bool is_integer(const BigRat &x) { return x.get_den() == 1; }

BigInt factorial(std::uint64_t n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt pow_int(const BigInt &base, std::uint64_t exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

BigInt binom_coeff(std::uint64_t n, std::uint64_t k) {
  if (k > n)
    throw DomainError("binom_coeff: k = " + std::to_string(k) + " exceeds n = " +
                      std::to_string(n));
  k = std::min(k, n - k);
  // After step i the accumulator holds C(n - k + i, i), so each division is exact.
  BigInt acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc *= n - k + i;
    mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), i);
  }
  return acc;
}

const char *to_string(Ordering o) {
  switch (o) {
  case Ordering::Less:
    return "Less";
  case Ordering::Equal:
    return "Equal";
  case Ordering::Greater:
    return "Greater";
  case Ordering::Unresolved:
    return "Unresolved";
  }
  return "?";
}

CertInterval::CertInterval(BigRat lo, BigRat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_)
    throw DomainError("interval with lo > hi: [" + to_string(lo_) + ", " + to_string(hi_) +
                      "]");
}

CertInterval interval_add(const CertInterval &a, const CertInterval &b) {
  return CertInterval(a.lo() + b.lo(), a.hi() + b.hi());
}

CertInterval interval_sub(const CertInterval &a, const CertInterval &b) {
  return CertInterval(a.lo() - b.hi(), a.hi() - b.lo());
}

CertInterval interval_neg(const CertInterval &a) { return CertInterval(-a.hi(), -a.lo()); }

CertInterval interval_mul(const CertInterval &a, const CertInterval &b) {
  if (a.lo() >= 0 && b.lo() >= 0)
    return CertInterval(a.lo() * b.lo(), a.hi() * b.hi());
  BigRat p[4] = {a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
  auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
  return CertInterval(*mn, *mx);
}

CertInterval interval_meet(const CertInterval &a, const CertInterval &b) {
  if (!a.intersects(b))
    throw InvariantError("disjoint enclosures of one quantity");
  return CertInterval(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Ordering compare(const BigRat &a, const BigRat &b) {
  int c = cmp(a, b);
  return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
}

Ordering compare(const CertInterval &a, const CertInterval &b) {
  if (a.lo() > b.hi())
    return Ordering::Greater;
  if (a.hi() < b.lo())
    return Ordering::Less;
  if (a.is_exact() && b.is_exact())
    return Ordering::Equal; // overlapping points coincide
  return Ordering::Unresolved;
}

namespace {

// log2 of a positive rational, accurate to well under one unit.
double log2_of(const BigRat &x) {
  auto log2z = [](const BigInt &z) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log2(m) + static_cast<double>(e);
  };
  return log2z(x.get_num()) - log2z(x.get_den());
}

} // namespace

BigRat dyadic_floor(const BigRat &x, std::uint64_t bits) {
  BigInt scaled = x.get_num() << bits;
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  return make_rat(q, BigInt(1) << bits);
}

BigRat dyadic_ceil(const BigRat &x, std::uint64_t bits) {
  BigInt scaled = x.get_num() << bits;
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  return make_rat(q, BigInt(1) << bits);
}

namespace {

// Smallest b with 2^-b <= slack.
std::uint64_t bits_for(const BigRat &slack) {
  double est = -log2_of(slack);
  std::uint64_t b = est > 0 ? static_cast<std::uint64_t>(est) : 0;
  b = b > 2 ? b - 2 : 0;
  while (make_rat(1, BigInt(1) << b) > slack)
    ++b;
  return b;
}

// Outward rounding onto the grid 2^-b, adding at most `slack` on each side.
CertInterval round_outward(const CertInterval &x, const BigRat &slack) {
  std::uint64_t b = bits_for(slack);
  return CertInterval(dyadic_floor(x.lo(), b), dyadic_ceil(x.hi(), b));
}

// Remainder bound for sum_{j > terms} lambda^j / j!, valid when terms + 2 > lambda:
// lambda^{N+1} / (N+1)! * (N+2) / (N+2-lambda).
BigRat taylor_remainder(std::uint64_t lambda, std::uint64_t terms) {
  const std::uint64_t n1 = terms + 1;
  BigInt num = pow_int(lambda, n1) * (terms + 2);
  BigInt den = factorial(n1) * (terms + 2 - lambda);
  return make_rat(num, den);
}

} // namespace

CertInterval exp_interval(std::uint64_t lambda, const BigRat &width) {
  if (width <= 0)
    throw DomainError("exp_interval: width must be positive");
  if (lambda == 0)
    return CertInterval::point(1);

  // Pick the number of Taylor terms N from a Stirling estimate of the next
  // term, then confirm the remainder bound exactly.
  const BigRat half = width / 2;
  const double target = log2_of(half);
  const double l2lam = std::log2(static_cast<double>(lambda));
  std::uint64_t terms = lambda;
  auto est_log2_term = [&](std::uint64_t n) {
    double k = static_cast<double>(n + 1);
    return k * l2lam - std::lgamma(k + 1.0) / std::log(2.0);
  };
  while (est_log2_term(terms) > target - 4.0)
    terms += std::max<std::uint64_t>(1, terms / 8);
  BigRat remainder = taylor_remainder(lambda, terms);
  while (remainder > half) {
    terms += 4;
    remainder = taylor_remainder(lambda, terms);
  }

  // Horner over integers: 1 + lam(1 + lam/2(1 + ... (1 + lam/N))) = num / N!.
  BigInt num = 1;
  BigInt den = 1;
  for (std::uint64_t j = terms; j >= 1; --j) {
    num = den * j + num * lambda;
    den *= j;
  }
  BigRat partial = make_rat(num, den);
  CertInterval exact(partial, partial + remainder);
  return round_outward(exact, width / 4);
}

CertInterval exp_neg_interval(std::uint64_t lambda, const BigRat &width) {
  CertInterval e = exp_interval(lambda, width);
  CertInterval inv(1 / e.hi(), 1 / e.lo());
  if (inv.is_exact())
    return inv;
  return round_outward(inv, inv.width() / 2);
}

} // namespace tailcmp
