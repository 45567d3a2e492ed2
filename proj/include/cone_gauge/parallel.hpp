#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cone_gauge::parallel {

/// Worker count for internal scans. Reads CONE_GAUGE_THREADS (a positive
/// integer); falls back to the hardware concurrency.
unsigned thread_count();

/// Splits [0, n) into contiguous blocks, evaluates fn(begin, end) for each
/// block on its own thread and returns the per-block results in block order.
/// Callers reduce the results in that order, so the outcome does not depend
/// on how many threads ran.
template <class Result, class Fn>
std::vector<Result> map_blocks(std::size_t n, Fn&& fn) {
  const std::size_t blocks =
      std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), n));
  std::vector<Result> results(blocks);
  std::vector<std::exception_ptr> errors(blocks);
  auto run = [&](std::size_t b) {
    const std::size_t begin = n * b / blocks;
    const std::size_t end = n * (b + 1) / blocks;
    try {
      results[b] = fn(begin, end);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };
  std::vector<std::thread> workers;
  workers.reserve(blocks - 1);
  for (std::size_t b = 1; b < blocks; ++b) workers.emplace_back(run, b);
  run(0);
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace cone_gauge::parallel
