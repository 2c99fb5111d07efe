#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace tailcmp {

/// Evaluates fn(i) for i in [0, count) on up to `jobs` threads, each owning a
/// contiguous block of indices. Results come back in index order regardless of
/// the worker count. The first exception thrown by any worker is rethrown.
template <typename Fn>
auto parallel_map(std::size_t count, unsigned jobs, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<std::optional<T>> slots(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, count));
  std::exception_ptr error;
  std::mutex error_mu;
  auto run_block = [&](std::size_t w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    try {
      for (std::size_t i = begin; i < end; ++i)
        slots[i].emplace(fn(i));
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error)
        error = std::current_exception();
    }
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(run_block, w);
  }
  if (error)
    std::rethrow_exception(error);
  std::vector<T> out;
  out.reserve(count);
  for (auto &s : slots)
    out.push_back(std::move(*s));
  return out;
}

} // namespace tailcmp
