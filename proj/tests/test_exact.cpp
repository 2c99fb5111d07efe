#include <doctest.h>

#include "oracles.hpp"
#include "tailcmp/errors.hpp"
#include "tailcmp/exact.hpp"

#include <random>

using namespace tailcmp;

TEST_SUITE("exact") {

TEST_CASE("parse and print rationals") {
  CHECK(parse_rat("3/6") == BigRat(1, 2));
  CHECK(parse_rat("-4/8") == BigRat(-1, 2));
  CHECK(parse_rat("7") == 7);
  CHECK(parse_rat("0.25") == BigRat(1, 4));
  CHECK(parse_rat("1e-3") == BigRat(1, 1000));
  CHECK(parse_rat("2.5E2") == 250);
  CHECK(to_string(parse_rat("243/3125")) == "243/3125");
  CHECK(to_string(make_rat(6, 3)) == "2");

  for (const char *bad : {"", "1/0", "a", "1/2/3", "1.2.3", "1e", "/3", "3/"})
    CHECK_THROWS_AS(parse_rat(bad), ParseError);
}

TEST_CASE("make_rat canonicalizes and rejects zero denominators") {
  const BigRat r = make_rat(10, -4);
  CHECK(r.get_num() == -5);
  CHECK(r.get_den() == 2);
  CHECK_THROWS_AS(make_rat(1, 0), DomainError);
}

TEST_CASE("printing round-trips every rational") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 100000);
  for (int i = 0; i < 500; ++i) {
    BigRat x(num(rng), den(rng));
    x.canonicalize();
    CHECK(parse_rat(to_string(x)) == x);
  }
}

TEST_CASE("binomial coefficients agree with Pascal's triangle") {
  std::vector<BigInt> row{1};
  for (std::uint64_t n = 0; n <= 60; ++n) {
    for (std::uint64_t k = 0; k <= n; ++k)
      REQUIRE(binom_coeff(n, k) == row[k]);
    std::vector<BigInt> next(row.size() + 1, 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      next[k] += row[k];
      next[k + 1] += row[k];
    }
    row = std::move(next);
  }
  CHECK_THROWS_AS(binom_coeff(3, 4), DomainError);
}

TEST_CASE("factorial and powers") {
  BigInt f = 1;
  for (std::uint64_t n = 0; n <= 50; ++n) {
    if (n > 0)
      f *= static_cast<unsigned long>(n);
    CHECK(factorial(n) == f);
  }
  CHECK(pow_int(3, 0) == 1);
  CHECK(pow_int(2, 100) == BigInt(1) << 100);
  CHECK(pow_int(-3, 3) == -27);
}

TEST_CASE("interval arithmetic encloses pointwise results") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> v(-50, 50), d(1, 20);
  auto rat = [&] {
    BigRat x(v(rng), d(rng));
    x.canonicalize();
    return x;
  };
  for (int trial = 0; trial < 400; ++trial) {
    BigRat a1 = rat(), a2 = rat(), b1 = rat(), b2 = rat();
    if (a1 > a2)
      std::swap(a1, a2);
    if (b1 > b2)
      std::swap(b1, b2);
    const CertInterval a(a1, a2), b(b1, b2);
    // Sample points inside each interval, including the endpoints.
    for (int t = 0; t <= 4; ++t) {
      const BigRat x = a1 + (a2 - a1) * oracle::frac(t, 4);
      const BigRat y = b1 + (b2 - b1) * oracle::frac(4 - t, 4);
      CHECK((a + b).contains(BigRat(x + y)));
      CHECK((a - b).contains(BigRat(x - y)));
      CHECK((a * b).contains(BigRat(x * y)));
      CHECK(interval_neg(a).contains(BigRat(-x)));
    }
  }
}

TEST_CASE("interval comparison") {
  CHECK(compare(CertInterval(1, 2), CertInterval(3, 4)) == Ordering::Less);
  CHECK(compare(CertInterval(3, 4), CertInterval(1, 2)) == Ordering::Greater);
  CHECK(compare(CertInterval(1, 3), CertInterval(2, 4)) == Ordering::Unresolved);
  // Touching endpoints do not separate.
  CHECK(compare(CertInterval(1, 2), CertInterval(2, 3)) == Ordering::Unresolved);
  CHECK(compare(CertInterval::point(2), CertInterval::point(2)) == Ordering::Equal);
  CHECK(compare(CertInterval(2, 2), CertInterval(1, 3)) == Ordering::Unresolved);
  CHECK(compare(BigRat(1, 3), BigRat(2, 6)) == Ordering::Equal);
  CHECK_THROWS_AS(CertInterval(2, 1), DomainError);
}

TEST_CASE("meeting disjoint enclosures is an invariant violation") {
  CHECK(interval_meet(CertInterval(0, 2), CertInterval(1, 3)) == CertInterval(1, 2));
  CHECK_THROWS_AS(interval_meet(CertInterval(0, 1), CertInterval(2, 3)), InvariantError);
}

TEST_CASE("dyadic rounding") {
  const BigRat x(1, 3);
  for (std::uint64_t bits : {0u, 1u, 10u, 64u}) {
    const BigRat lo = dyadic_floor(x, bits), hi = dyadic_ceil(x, bits);
    CHECK(lo <= x);
    CHECK(x <= hi);
    CHECK(hi - lo <= BigRat(1, BigInt(1) << bits));
    CHECK(BigRat(lo * (BigInt(1) << bits)).get_den() == 1);
  }
  CHECK(dyadic_floor(BigRat(-1, 3), 2) == BigRat(-1, 2));
}

TEST_CASE("exp enclosure contains e^lambda and meets the requested width") {
  const BigRat width = parse_rat("1e-30");
  for (std::uint64_t lambda : {1u, 2u, 3u, 7u, 20u, 50u, 100u, 300u}) {
    const CertInterval e = exp_interval(lambda, width);
    const oracle::Bounds ref = oracle::exp_bounds(lambda);
    CHECK(e.width() <= width);
    CHECK(e.lo() <= ref.hi);
    CHECK(ref.lo <= e.hi());
    const CertInterval en = exp_neg_interval(lambda, width);
    CHECK(en.lo() <= 1 / ref.lo);
    CHECK(1 / ref.hi <= en.hi());
    CHECK(en.lo() > 0);
  }
  CHECK(exp_interval(0, width) == CertInterval::point(1));
  CHECK_THROWS_AS(exp_interval(1, 0), DomainError);
}

TEST_CASE("exp enclosure narrows with the width") {
  BigRat width = 1;
  for (int i = 0; i < 6; ++i) {
    width /= 1000;
    const CertInterval e = exp_interval(10, width);
    CHECK(e.width() <= width);
    const oracle::Bounds ref = oracle::exp_bounds(10);
    CHECK(e.lo() <= ref.hi);
    CHECK(ref.lo <= e.hi());
  }
}

} // TEST_SUITE
