#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stabcert {

/// Runs body(i) for i in [0, count) on up to `workers` threads.  Work is
/// split into contiguous blocks; callers write results into per-index slots,
/// so the outcome is identical for any worker count.  The first exception
/// thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::int64_t count, int workers, Body&& body) {
  if (count <= 0) return;
  if (workers <= 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::int64_t nthreads =
      std::min<std::int64_t>(workers, count);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(nthreads));
  for (std::int64_t t = 0; t < nthreads; ++t) {
    // Block partition: thread t handles [lo, hi).
    const std::int64_t lo = count * t / nthreads;
    const std::int64_t hi = count * (t + 1) / nthreads;
    threads.emplace_back([&, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace stabcert
