#pragma once

// Seeded generators for the randomized property harnesses.

#include "tailcmp/dist.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace tailcmp {

using Rng = std::mt19937_64;

/// Independent stream for trial `index` of a run seeded with `seed`; the same
/// (seed, index) pair yields the same stream no matter which worker runs it.
Rng trial_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform on [lo, hi], by rejection so the result does not depend on the
/// standard library's distribution implementation.
std::uint64_t uniform_int(Rng &rng, std::uint64_t lo, std::uint64_t hi);

/// Unimodal, right-skewed distribution with canonical mode `mode` on at most
/// `support_cap` points (requires mode < support_cap).
FiniteDist random_right_skewed(Rng &rng, std::uint64_t mode, std::uint64_t support_cap);

/// Distribution with mean exactly `mean` on at most `support_cap` points
/// (requires mean + 2 <= support_cap, or mean == 0).
FiniteDist random_integer_mean(Rng &rng, std::uint64_t mean, std::uint64_t support_cap);

/// Rejection-samples random_integer_mean until Condition L1 or L2 holds.
/// Falls back to the point mass at `mean` after `max_attempts`.
FiniteDist random_left_loaded(Rng &rng, std::uint64_t mean, std::uint64_t support_cap,
                              unsigned max_attempts = 256);

/// lambda_1..lambda_len with lambda_i in [1, lambda_max], len in [2, max_len],
/// and lambda_{k+1} <= lambda_1 + ... + lambda_k.
std::vector<std::uint64_t> random_prefix_sequence(Rng &rng, std::uint64_t max_len,
                                                  std::uint64_t lambda_max);

} // namespace tailcmp
