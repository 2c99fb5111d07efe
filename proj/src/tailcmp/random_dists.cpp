#include "tailcmp/random_dists.hpp"

#include "tailcmp/errors.hpp"
#include "tailcmp/predicates.hpp"

#include <algorithm>

namespace tailcmp {

Rng trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

std::uint64_t uniform_int(Rng &rng, std::uint64_t lo, std::uint64_t hi) {
  if (lo >= hi)
    return lo;
  const std::uint64_t span = hi - lo;
  if (span == UINT64_MAX)
    return rng();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + x % range;
}

namespace {

FiniteDist normalize(const std::vector<std::uint64_t> &counts) {
  BigInt total = 0;
  for (auto c : counts)
    total += c;
  std::vector<BigRat> w;
  w.reserve(counts.size());
  for (auto c : counts)
    w.push_back(make_rat(c, total));
  while (w.size() > 1 && w.back() == 0)
    w.pop_back();
  return FiniteDist(std::move(w));
}

// Integer mass scale; small scales make ties likely.
std::uint64_t random_scale(Rng &rng) {
  static constexpr std::uint64_t scales[] = {2, 4, 12, 100, 100000};
  return scales[uniform_int(rng, 0, std::size(scales) - 1)];
}

} // namespace

FiniteDist random_right_skewed(Rng &rng, std::uint64_t mode, std::uint64_t support_cap) {
  if (mode >= support_cap)
    throw PreconditionError("mode must lie inside the support cap");
  if (uniform_int(rng, 0, 19) == 0)
    return FiniteDist::point_mass(mode);
  const std::uint64_t scale = random_scale(rng);
  const std::uint64_t right_len = uniform_int(rng, 0, support_cap - 1 - mode);
  // right[j] = mass at mode + j, non-increasing, right[1] < right[0].
  std::vector<std::uint64_t> right(right_len + 1);
  right[0] = scale;
  for (std::uint64_t j = 1; j <= right_len; ++j) {
    const std::uint64_t cap = j == 1 ? right[0] - 1 : right[j - 1];
    right[j] = uniform_int(rng, 0, 3) == 0 ? cap : uniform_int(rng, 0, cap);
  }
  auto right_at = [&](std::uint64_t j) { return j <= right_len ? right[j] : 0; };
  // left[i] = mass at mode - i, bounded by its neighbour (unimodality) and by
  // the mirror right[i - 1] (right-skewness).
  std::vector<std::uint64_t> counts(mode + right_len + 1, 0);
  std::uint64_t prev = right[0];
  for (std::uint64_t i = 1; i <= mode; ++i) {
    const std::uint64_t cap = std::min(prev, right_at(i - 1));
    const std::uint64_t v = uniform_int(rng, 0, 3) == 0 ? cap : uniform_int(rng, 0, cap);
    counts[mode - i] = v;
    prev = v;
  }
  for (std::uint64_t j = 0; j <= right_len; ++j)
    counts[mode + j] = right[j];
  return normalize(counts);
}

FiniteDist random_integer_mean(Rng &rng, std::uint64_t mean, std::uint64_t support_cap) {
  if (mean == 0)
    return FiniteDist::point_mass(0);
  if (mean + 2 > support_cap)
    throw PreconditionError("support cap too small for the requested mean");
  if (uniform_int(rng, 0, 19) == 0)
    return FiniteDist::point_mass(mean);
  const std::uint64_t scale = random_scale(rng);
  const std::uint64_t top = uniform_int(rng, mean, support_cap - 1);
  std::vector<std::uint64_t> counts(support_cap, 0);
  for (std::uint64_t k = 0; k <= top; ++k)
    counts[k] = uniform_int(rng, 0, 2) == 0 ? 0 : uniform_int(rng, 0, scale);
  // Balance sum_k (k - mean) c_k to zero with mass on the short side.
  std::int64_t excess = 0;
  for (std::uint64_t k = 0; k < support_cap; ++k)
    excess += (static_cast<std::int64_t>(k) - static_cast<std::int64_t>(mean)) *
              static_cast<std::int64_t>(counts[k]);
  if (excess > 0) {
    const std::uint64_t j = uniform_int(rng, 0, mean - 1);
    const std::uint64_t step = mean - j;
    counts[j] += static_cast<std::uint64_t>(excess) / step;
    counts[mean - 1] += static_cast<std::uint64_t>(excess) % step;
  } else if (excess < 0) {
    const std::uint64_t j = uniform_int(rng, mean + 1, support_cap - 1);
    const std::uint64_t step = j - mean;
    counts[j] += static_cast<std::uint64_t>(-excess) / step;
    counts[mean + 1] += static_cast<std::uint64_t>(-excess) % step;
  }
  if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; }))
    counts[mean] = 1;
  return normalize(counts);
}

FiniteDist random_left_loaded(Rng &rng, std::uint64_t mean, std::uint64_t support_cap,
                              unsigned max_attempts) {
  for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
    FiniteDist x = random_integer_mean(rng, mean, support_cap);
    if (check_left_loaded(alpha_sequence(x)).holds())
      return x;
  }
  return FiniteDist::point_mass(mean);
}

std::vector<std::uint64_t> random_prefix_sequence(Rng &rng, std::uint64_t max_len,
                                                  std::uint64_t lambda_max) {
  if (max_len < 2 || lambda_max < 1)
    throw PreconditionError("need max_len >= 2 and lambda_max >= 1");
  const std::uint64_t len = uniform_int(rng, 2, max_len);
  std::vector<std::uint64_t> out{uniform_int(rng, 1, lambda_max)};
  std::uint64_t acc = out.front();
  while (out.size() < len) {
    const std::uint64_t next = uniform_int(rng, 1, std::min(acc, lambda_max));
    out.push_back(next);
    acc += next;
  }
  return out;
}

} // namespace tailcmp
