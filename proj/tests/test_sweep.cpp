#include <doctest.h>

#include "oracles.hpp"
#include "tailcmp/errors.hpp"
#include "tailcmp/random_dists.hpp"
#include "tailcmp/sweep.hpp"

#include <set>
#include <sstream>

using namespace tailcmp;

namespace {

nlohmann::json without_wall_time(nlohmann::json report) {
  report["result"].erase("wall_time_ms");
  return report;
}

void check_accounting(const SweepResult &r) {
  CHECK(r.total == r.holds + r.fails.size() + r.unresolved.size());
  CHECK(r.total == r.rows.size());
}

} // namespace

TEST_SUITE("sweep") {

TEST_CASE("ranges and targets") {
  CHECK(parse_range("1..20").lo == 1);
  CHECK(parse_range("1..20").hi == 20);
  CHECK(parse_range("7").size() == 1);
  for (const char *bad : {"", "..", "3..", "a..b", "5..2", "-1..3", "1...3"})
    CHECK_THROWS_AS(parse_range(bad), ParseError);
  for (const char *name : {"conjecture1", "conjecture2", "cb", "teicher", "kane", "jogdeo",
                           "property-theorem1", "lemma1-random"}) {
    const auto t = parse_target(name);
    REQUIRE(t.has_value());
    CHECK(std::string(to_string(*t)) == name);
  }
  CHECK_FALSE(parse_target("conj3").has_value());
}

TEST_CASE("spec validation") {
  SweepSpec spec;
  spec.target = SweepTarget::Conjecture1;
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
  spec.ranges["m"] = {1, 3};
  spec.ranges["n"] = {1, 30};
  CHECK_NOTHROW(spec.validate());
  spec.ranges["m"] = {0, 3};
  CHECK_THROWS_AS(spec.validate(), PreconditionError);

  SweepSpec prop;
  prop.target = SweepTarget::PropertyTheorem1;
  prop.ranges["trial"] = {0, 9};
  prop.ranges["support"] = {1, 10};
  CHECK_THROWS_AS(prop.validate(), PreconditionError); // no seed
  prop.seed = 1;
  CHECK_NOTHROW(prop.validate());
  prop.jobs = 0;
  CHECK_THROWS_AS(prop.validate(), PreconditionError);
}

TEST_CASE("conjecture 1 grid agrees with independently computed prefix sums") {
  const SweepResult r = sweep_conjecture1({1, 5}, 30);
  check_accounting(r);
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (const auto &row : r.rows) {
    const auto n = row.params["n"].get<std::uint64_t>();
    const auto m = row.params["m"].get<std::uint64_t>();
    REQUIRE(n > 2 * m);
    seen.insert({n, m});
    const auto w = oracle::binomial_pascal(n, BigRat(m, n));
    const bool l2 = oracle::condition_L2(oracle::alpha(w, m));
    REQUIRE(row.tag == (l2 ? VerdictTag::Holds : VerdictTag::Fails));
  }
  // One row per (n, m) with 2m < n <= 30.
  std::size_t expected = 0;
  for (std::uint64_t m = 1; m <= 5; ++m)
    expected += 30 - 2 * m;
  CHECK(seen.size() == expected);
  CHECK(r.total == expected);
  CHECK(r.unresolved.empty());
}

TEST_CASE("conjecture 1 at n = 5, m = 2") {
  const SweepResult r = sweep_conjecture1({2, 2}, 5);
  REQUIRE(r.total == 1);
  CHECK(r.rows[0].tag == VerdictTag::Holds);
  CHECK(r.rows[0].detail["L1"] == "Holds");
}

TEST_CASE("conjecture 2 small grid with cross-checks") {
  const SweepResult r = sweep_conjecture2({1, 15});
  check_accounting(r);
  CHECK(r.holds == 15);
  for (const auto &row : r.rows) {
    CHECK(row.detail["consistent"] == true);
    CHECK(row.detail["cross_check"]["tag"] == "Holds");
  }
  CHECK(r.rows[0].detail["cross_check"]["route"] == "lemma1");
  CHECK(r.rows[1].detail["cross_check"]["route"] == "simmons+lemma1");
  CHECK(r.rows[2].detail["cross_check"]["route"] == "poisson-L1-exact");
}

TEST_CASE("conjecture 2 reports the precision state when the cap is too low") {
  Precision p = Precision::defaults();
  p.cutoff_cap = 8;
  const SweepResult r = sweep_conjecture2({3, 4}, p);
  check_accounting(r);
  CHECK(r.unresolved.size() == 2);
  CHECK(r.overall() == VerdictTag::Unresolved);
  CHECK(exit_status(r.overall()) == 2);
}

TEST_CASE("property harness: determinism, parallel equivalence, accounting") {
  SweepSpec spec;
  spec.target = SweepTarget::PropertyTheorem1;
  spec.ranges["trial"] = {0, 299};
  spec.ranges["support"] = {3, 30};
  spec.seed = 1234;
  const SweepResult a = run_sweep(spec);
  const SweepResult b = run_sweep(spec);
  spec.jobs = 4;
  const SweepResult c = run_sweep(spec);
  check_accounting(a);
  CHECK(a.fails.empty());
  CHECK(without_wall_time(sweep_report(spec, a)) == without_wall_time(sweep_report(spec, b)));
  CHECK(without_wall_time(sweep_report(spec, a)) == without_wall_time(sweep_report(spec, c)));
  CHECK(sweep_csv(spec.target, a) == sweep_csv(spec.target, c));

  spec.seed = 1235;
  CHECK(sweep_csv(spec.target, run_sweep(spec)) != sweep_csv(spec.target, a));
}

TEST_CASE("property harness includes point masses that hold with equality") {
  const SweepResult r = run_property_theorem1(2000, 5);
  CHECK(r.fails.empty());
  std::size_t equal = 0;
  for (const auto &row : r.rows)
    equal += row.detail["equality"].get<bool>();
  CHECK(equal > 0);
}

TEST_CASE("lemma harness and Kane harness") {
  const SweepResult l = run_property_lemma1(500, 9);
  check_accounting(l);
  CHECK(l.holds == 500);
  const SweepResult k = run_kane_random(20, 9, 8, 20);
  check_accounting(k);
  CHECK(k.holds == 20);
  for (const auto &row : k.rows) {
    const auto lambdas = row.params["lambdas"].get<std::vector<std::uint64_t>>();
    REQUIRE(lambdas.size() >= 2);
    REQUIRE(lambdas.size() <= 8);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      REQUIRE(lambdas[i] >= 1);
      REQUIRE(lambdas[i] <= 20);
      if (i > 0)
        REQUIRE(lambdas[i] <= acc);
      acc += lambdas[i];
    }
  }
}

TEST_CASE("failure replay") {
  // A genuine counterexample to the conclusion, outside the hypotheses.
  SweepRow row;
  row.tag = VerdictTag::Fails;
  row.params = {{"trial", 0}};
  row.witness = {{"S", {{"weights", {"0", "1/2", "1/2"}}}},
                 {"X", {{"weights", {"1/3", "0", "0", "2/3"}}}}};
  CHECK(replay_failure(SweepTarget::PropertyTheorem1, row));

  // A fabricated failure does not reproduce.
  SweepRow fake;
  fake.tag = VerdictTag::Fails;
  fake.params = {{"n", 5}, {"m", 2}};
  fake.witness = {{"k", 2}, {"prefix_sum", "-1"}};
  CHECK_FALSE(replay_failure(SweepTarget::Conjecture1, fake));
  fake.params = {{"m", 4}};
  CHECK_FALSE(replay_failure(SweepTarget::Conjecture2, fake));
  fake.params = {{"k", 3}};
  CHECK_FALSE(replay_failure(SweepTarget::Teicher, fake));
  fake.params = {{"n", 4}, {"k", 3}};
  CHECK_FALSE(replay_failure(SweepTarget::ChaundyBullard, fake));
  fake.params = {{"trial", 0}, {"lambdas", {1, 1, 2}}};
  CHECK_FALSE(replay_failure(SweepTarget::Kane, fake));

  SweepRow holds;
  holds.tag = VerdictTag::Holds;
  CHECK_FALSE(replay_failure(SweepTarget::Conjecture1, holds));
}

TEST_CASE("sweeps over the tail-monotonicity chains") {
  SweepSpec cb;
  cb.target = SweepTarget::ChaundyBullard;
  cb.ranges["n"] = {2, 4};
  cb.ranges["k"] = {3, 6};
  const SweepResult r = run_sweep(cb);
  CHECK(r.total == 3 * 4);
  CHECK(r.holds == r.total);

  SweepSpec jog;
  jog.target = SweepTarget::Jogdeo;
  jog.ranges["n"] = {3, 4};
  jog.ranges["m"] = {1, 3};
  jog.ranges["k"] = {1, 2};
  CHECK(run_sweep(jog).total == (3 + 3) * 2);

  SweepSpec t;
  t.target = SweepTarget::Teicher;
  t.ranges["k"] = {5, 9};
  CHECK(run_sweep(t).total == 5);
}

TEST_CASE("report formats") {
  SweepSpec spec;
  spec.target = SweepTarget::Conjecture1;
  spec.ranges["m"] = {1, 2};
  spec.ranges["n"] = {1, 6};
  const SweepResult r = run_sweep(spec);
  const auto j = sweep_report(spec, r);
  CHECK(j["tool_version"] == kToolVersion);
  CHECK(j["spec"]["target"] == "conjecture1");
  CHECK_FALSE(j["spec"].contains("jobs"));
  CHECK(j["result"]["total"] == r.total);
  CHECK(j["result"]["holds"] == r.holds);
  CHECK(j["result"]["fails"].is_array());
  CHECK(j["result"]["unresolved"].is_array());

  std::istringstream csv(sweep_csv(spec.target, r));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "n,m,verdict,witness");
  std::getline(csv, line);
  CHECK(line == "3,1,Holds,");
  std::size_t rows = 1;
  while (std::getline(csv, line))
    ++rows;
  CHECK(rows == r.total);
  CHECK(exit_status(VerdictTag::Holds) == 0);
  CHECK(exit_status(VerdictTag::Fails) == 1);
}

} // TEST_SUITE
