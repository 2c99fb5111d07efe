#pragma once

// Parameter-grid sweeps for the open conjectures, the randomized property
// harnesses, and their machine-readable reports.

#include "tailcmp/dist.hpp"
#include "tailcmp/theorem.hpp"
#include "tailcmp/verdict.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tailcmp {

inline constexpr const char *kToolVersion = "0.1.0";

enum class SweepTarget {
  Conjecture1,     // L2 for Bin(n, m/n), n > 2m
  Conjecture2,     // L2 for Poi(m)
  ChaundyBullard,  // ranges n, k
  Teicher,         // range k
  Kane,            // random prefix sequences: trial, length, lambda
  Jogdeo,          // ranges n, m, k
  PropertyTheorem1, // trial, support
  Lemma1Random,    // trial, support
};

const char *to_string(SweepTarget t);
/// Accepts the report names ("conjecture1", "cb", "property-theorem1", ...).
std::optional<SweepTarget> parse_target(std::string_view name);

struct IntRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  std::uint64_t size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

/// "a..b" or a single integer "a". Throws ParseError.
IntRange parse_range(std::string_view text);

struct SweepSpec {
  SweepTarget target = SweepTarget::Conjecture1;
  std::map<std::string, IntRange> ranges;
  Precision precision = Precision::defaults();
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;

  /// Throws PreconditionError on a missing or empty range, or a missing seed
  /// for a randomized target.
  void validate() const;
};

struct SweepRow {
  nlohmann::json params;
  VerdictTag tag = VerdictTag::Unresolved;
  nlohmann::json witness;
  nlohmann::json detail;
};

struct SweepResult {
  std::uint64_t total = 0;
  std::uint64_t holds = 0;
  std::vector<SweepRow> fails;
  std::vector<SweepRow> unresolved;
  std::vector<SweepRow> rows; // every grid point, in canonical order
  std::chrono::milliseconds wall_time{0};

  VerdictTag overall() const;
};

SweepResult run_sweep(const SweepSpec &spec);

/// check_L2 on Bin(n, m/n) for m in `m`, 2m < n <= n_max. Exact throughout.
SweepResult sweep_conjecture1(IntRange m, std::uint64_t n_max, unsigned jobs = 1);
/// check_L2 on Poi(m) through certified enclosures, refining until resolved.
SweepResult sweep_conjecture2(IntRange m, const Precision &precision = Precision::defaults(),
                              unsigned jobs = 1);
/// Random pairs satisfying the theorem's hypotheses; conclusion and proof
/// certificate checked on each.
SweepResult run_property_theorem1(std::uint64_t trials, std::uint64_t seed,
                                  std::uint64_t support_cap = 30, unsigned jobs = 1);
/// The alpha-sum identity on random integer-mean distributions.
SweepResult run_property_lemma1(std::uint64_t trials, std::uint64_t seed,
                                std::uint64_t support_cap = 40, unsigned jobs = 1);
/// verify_kane_poisson on random sequences meeting the prefix condition.
SweepResult run_kane_random(std::uint64_t sequences, std::uint64_t seed, std::uint64_t max_len,
                            std::uint64_t lambda_max,
                            const Precision &precision = Precision::defaults(),
                            unsigned jobs = 1);
/// One row per step of a tail-monotonicity report.
SweepResult sweep_from_tail_report(const TailReport &report, const nlohmann::json &extra_params = {});

/// Re-evaluates a failing row from its parameters and witness; true when the
/// failure reproduces.
bool replay_failure(SweepTarget target, const SweepRow &row,
                    const Precision &precision = Precision::defaults());

nlohmann::json to_json(const SweepSpec &spec);
/// {"spec", "result": {"total", "holds", "fails", "unresolved", "wall_time_ms"}, "tool_version"}
nlohmann::json sweep_report(const SweepSpec &spec, const SweepResult &result);
/// Header row, then one row per grid point: params..., verdict, witness.
std::string sweep_csv(SweepTarget target, const SweepResult &result);
/// Column names used by sweep_csv for a target, before verdict and witness.
std::vector<std::string> csv_param_columns(SweepTarget target);

/// 0 all Holds, 1 any Fails, 2 Unresolved without Fails.
int exit_status(VerdictTag overall);

} // namespace tailcmp
