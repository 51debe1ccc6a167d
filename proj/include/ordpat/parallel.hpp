#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ordpat {

// Runs fn(rep) for rep = 0..reps-1 across `threads` workers. Replicates are
// independent; callers write results into per-replicate slots, so numeric
// output is identical for any thread count. The first exception thrown by a
// worker is re-thrown on the calling thread.
template <class Fn>
void parallel_replicates(int reps, int threads, Fn&& fn) {
  if (reps <= 0) return;
  threads = std::max(1, std::min(threads, reps));
  if (threads == 1) {
    for (int rep = 0; rep < reps; ++rep) fn(rep);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int rep = next.fetch_add(1, std::memory_order_relaxed);
        if (rep >= reps) return;
        try {
          fn(rep);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ordpat
