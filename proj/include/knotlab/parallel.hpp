#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace knotlab {

/// Worker count for embarrassingly parallel loops. Results never depend on it.
struct ExecPolicy {
  unsigned threads = 1;
};

/// Runs fn(i) for i in [0, n) over contiguous static chunks. Every index is
/// visited exactly once; callers write into index-addressed slots so the
/// outcome is independent of scheduling. If several indices throw, the
/// exception from the lowest chunk is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, ExecPolicy exec, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(exec.threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace knotlab
