#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace relfix {

/// Worker count: RELFIX_THREADS if set and positive, else the hardware count.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on contiguous shards and returns the results
/// in index order, so the output never depends on the number of workers.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& body) {
  std::vector<T> out(n);
  std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = body(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        std::size_t lo = n * w / workers;
        std::size_t hi = n * (w + 1) / workers;
        try {
          for (std::size_t i = lo; i < hi; ++i) out[i] = body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace relfix
