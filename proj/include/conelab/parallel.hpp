#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace conelab {

// Worker cap: CONE_LAB_THREADS when set (>= 1), hardware concurrency
// otherwise.
inline int max_threads() {
  if (const char* env = std::getenv("CONE_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Index-parallel loop. Tasks must be independent and write only their own
// slots, which keeps results deterministic regardless of scheduling. The
// first exception thrown by any task is rethrown after all workers join.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  if (n <= 0) return;
  int workers = std::min(max_threads(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace conelab
