#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sectorspec {

// Dispatch fn(0..n-1) over a transient worker pool. jobs <= 0 uses the
// available hardware parallelism. The first exception thrown by a worker is
// rethrown on the calling thread after all workers join.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         int jobs = 0) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t nthreads = jobs > 0 ? static_cast<std::size_t>(jobs) : (hw ? hw : 2);
  if (nthreads > n) nthreads = n;
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sectorspec
