#include <doctest.h>

#include "oracles.hpp"
#include "tailcmp/dist.hpp"
#include "tailcmp/errors.hpp"

#include <random>

using namespace tailcmp;

namespace {

std::vector<BigRat> as_vector(const FiniteDist &d) { return {d.weights().begin(), d.weights().end()}; }

std::vector<BigRat> parse_all(std::initializer_list<const char *> ws) {
  std::vector<BigRat> out;
  for (const char *w : ws)
    out.push_back(parse_rat(w));
  return out;
}

bool overlaps(const CertInterval &x, const oracle::Bounds &b) { return x.lo() <= b.hi && b.lo <= x.hi(); }

} // namespace

TEST_SUITE("dist") {

TEST_CASE("finite distributions validate their weights") {
  CHECK_NOTHROW(FiniteDist(parse_all({"1/2", "1/2"})));
  CHECK_NOTHROW(FiniteDist(parse_all({"1", "0", "0"})));
  CHECK_THROWS_AS(FiniteDist(parse_all({"1/2", "1/3"})), PreconditionError);
  CHECK_THROWS_AS(FiniteDist(parse_all({"3/2", "-1/2"})), PreconditionError);
  CHECK_THROWS_AS(FiniteDist(std::vector<BigRat>{}), PreconditionError);
  const FiniteDist d = FiniteDist::point_mass(3);
  CHECK(d.weight(3) == 1);
  CHECK(d.weight(-1) == 0);
  CHECK(d.weight(10) == 0);
}

TEST_CASE("Bin(5, 2/5) has the expected weights") {
  const FiniteDist d = binomial_dist(BinomialSpec(5, 2));
  CHECK(as_vector(d) == parse_all({"243/3125", "810/3125", "1080/3125", "720/3125", "240/3125",
                                   "32/3125"}));
  CHECK(mean_exact(d) == 2);
}

TEST_CASE("binomial weights match Pascal's rule") {
  for (std::uint64_t n = 1; n <= 30; ++n)
    for (std::uint64_t m = 1; m <= n; m += (n > 10 ? 3 : 1)) {
      const auto ref = oracle::binomial_pascal(n, BigRat(m, n));
      const FiniteDist d = binomial_dist(BinomialSpec(n, m));
      REQUIRE(as_vector(d) == ref);
      CHECK(mean_exact(d) == m);
    }
  CHECK_THROWS_AS(BinomialSpec(3, 0), PreconditionError);
  CHECK_THROWS_AS(BinomialSpec(3, 4), PreconditionError);
  CHECK(as_vector(binomial_dist(BinomialSpec(4, 4))) == parse_all({"0", "0", "0", "0", "1"}));
}

TEST_CASE("tail tables and tail probabilities") {
  const FiniteDist d = binomial_dist(BinomialSpec(6, 3));
  const auto w = as_vector(d);
  const auto table = d.tail_table();
  REQUIRE(table.size() == w.size() + 1);
  for (std::uint64_t t = 0; t <= w.size() + 2; ++t) {
    CHECK(tail_prob(d, t) == oracle::tail(w, t));
    if (t <= w.size())
      CHECK(table[t] == oracle::tail(w, t));
  }
  CHECK(tail_prob(d, 3) == BigRat(21, 32));
}

TEST_CASE("convolution agrees with outcome enumeration") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_weights(rng, len(rng));
    const auto b = oracle::random_weights(rng, len(rng));
    const FiniteDist c = convolve(FiniteDist(a), FiniteDist(b));
    REQUIRE(as_vector(c) == oracle::sum_by_enumeration(a, b));
    CHECK(mean_exact(c) == oracle::mean(a) + oracle::mean(b));
  }
}

TEST_CASE("convolving with a point mass shifts") {
  const FiniteDist d = binomial_dist(BinomialSpec(4, 1));
  const FiniteDist shifted = convolve(d, FiniteDist::point_mass(2));
  for (std::int64_t k = 0; k < 8; ++k)
    CHECK(shifted.weight(k + 2) == d.weight(k));
  CHECK(convolve(d, FiniteDist::point_mass(0)) == d);
}

TEST_CASE("Poisson truncation encloses the true weights and tails") {
  const Precision p = Precision::defaults();
  for (std::uint64_t lambda : {1u, 2u, 5u, 13u, 40u}) {
    const CertDist d = poisson_truncate(PoissonSpec(lambda), p.exp_width, default_poisson_cutoff(lambda));
    CHECK(d.cutoff() == default_poisson_cutoff(lambda));
    for (std::uint64_t k = 0; k <= d.cutoff(); k += 3)
      CHECK(overlaps(d.weights()[k], oracle::poisson_pmf(lambda, k)));
    // Beyond the cutoff the family's pmf ratio still gives sound enclosures.
    CHECK(overlaps(d.weight(d.cutoff() + 2), oracle::poisson_pmf(lambda, d.cutoff() + 2)));
    for (std::uint64_t t = 0; t <= lambda + 10; ++t) {
      const CertInterval tail = tail_prob(d, t);
      CHECK(overlaps(tail, oracle::poisson_tail(lambda, t)));
      CHECK(tail.width() < BigRat(1, BigInt(10) * BigInt(1000000000) * 1000000000));
      const CertInterval below = cdf(d, t);
      CHECK(below.lo() <= 1 - oracle::poisson_tail(lambda, t + 1).lo);
    }
    // The tail-mass bound dominates the true mass beyond the cutoff.
    CHECK(oracle::poisson_tail(lambda, d.cutoff() + 1).lo <= d.tail_mass_hi());
  }
}

TEST_CASE("Poisson truncation preconditions") {
  CHECK_THROWS_AS(PoissonSpec(0), PreconditionError);
  CHECK_THROWS_AS(poisson_truncate(PoissonSpec(10), BigRat(1, 1000), 7), PreconditionError);
  CHECK_NOTHROW(poisson_truncate(PoissonSpec(10), BigRat(1, 1000), 9));
  CHECK(default_poisson_cutoff(1) == 17);
  CHECK(default_poisson_cutoff(10) == 40);
}

TEST_CASE("untagged certified distributions bound mass beyond the cutoff by the tail") {
  const CertDist d({CertInterval(BigRat(1, 2), BigRat(1, 2)), CertInterval(BigRat(1, 4), BigRat(1, 3))},
                   BigRat(1, 4));
  CHECK(d.weight(5) == CertInterval(0, BigRat(1, 4)));
  CHECK(d.weight(-1) == CertInterval::point(0));
  CHECK(d.compare_weights(0, 1) == Ordering::Greater);
}

TEST_CASE("Poisson weights beyond an overlap are ordered by the exact pmf ratio") {
  // Poi(3) has P(2) = P(3); neighbouring modes compare Equal from the ratio.
  const CertDist d = poisson_truncate(PoissonSpec(3), BigRat(1, 1000), 12);
  CHECK(d.compare_weights(2, 3) == Ordering::Equal);
  CHECK(d.compare_weights(3, 4) == Ordering::Greater);
  CHECK(d.compare_weights(0, 5) == Ordering::Less);
  CHECK(poisson_pmf_ratio(3, 3, 2) == 1);
  CHECK(poisson_pmf_ratio(4, 6, 4) == BigRat(8, 15));
}

TEST_CASE("Poisson semigroup: Poi(a) * Poi(b) overlaps Poi(a + b)") {
  const Precision p = Precision::defaults();
  for (std::uint64_t a = 1; a <= 10; ++a)
    for (std::uint64_t b = a; b <= 10; b += 3) {
      const CertDist da = poisson_truncate(PoissonSpec(a), p.exp_width, default_poisson_cutoff(a));
      const CertDist db = poisson_truncate(PoissonSpec(b), p.exp_width, default_poisson_cutoff(b));
      const CertDist sum = convolve(da, db);
      const CertDist direct =
          poisson_truncate(PoissonSpec(a + b), p.exp_width, sum.cutoff());
      for (std::uint64_t k = 0; k <= sum.cutoff(); k += 2)
        REQUIRE(sum.weights()[k].intersects(direct.weights()[k]));
      for (std::uint64_t t = 0; t <= 2 * (a + b); ++t)
        REQUIRE(tail_prob(sum, t).intersects(tail_prob(direct, t)));
      CHECK_FALSE(sum.family().has_value());
    }
}

TEST_CASE("certified tail table matches pointwise tails") {
  const CertDist d = poisson_truncate(PoissonSpec(6), BigRat(1, 1000000), 30);
  const auto table = tail_table(d);
  REQUIRE(table.size() == d.cutoff() + 2);
  for (std::uint64_t t = 0; t < table.size(); ++t)
    CHECK(table[t].intersects(tail_prob(d, t)));
  CHECK(table[0].contains(BigRat(1)));
}

TEST_CASE("JSON round trip") {
  const FiniteDist d = binomial_dist(BinomialSpec(5, 2));
  const std::string text = finite_dist_to_json(d);
  CHECK(text == R"({"weights":["243/3125","162/625","216/625","144/625","48/625","32/3125"]})");
  CHECK(finite_dist_from_json(text) == d);
  CHECK(finite_dist_from_json(R"({"weights":[0.5, "1/2"]})") ==
        FiniteDist(parse_all({"1/2", "1/2"})));
  CHECK_THROWS_AS(finite_dist_from_json("{"), ParseError);
  CHECK_THROWS_AS(finite_dist_from_json(R"({"weights":"1"})"), ParseError);
  CHECK_THROWS_AS(finite_dist_from_json(R"({"w":["1"]})"), ParseError);
  CHECK_THROWS_AS(finite_dist_from_json(R"({"weights":["x"]})"), ParseError);
  CHECK_THROWS_AS(finite_dist_from_json(R"({"weights":["1/2"]})"), PreconditionError);
}

} // TEST_SUITE
