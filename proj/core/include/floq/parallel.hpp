#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace floq {

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Static-partition parallel map over [0, n). Each index must write to its
/// own output slot; reductions happen afterwards in index order, so results
/// do not depend on the thread count.
inline void parallel_for(long n, int threads,
                         const std::function<void(long)>& body) {
  threads = resolve_thread_count(threads);
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  if (threads > n) threads = static_cast<int>(n);

  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  long chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    long begin = t * chunk;
    long end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end]() {
      try {
        for (long i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace floq
