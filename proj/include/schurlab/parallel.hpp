#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace schurlab {

// worker cap: SCHURLAB_THREADS when set (clamped to [1, hardware]), otherwise
// the hardware concurrency, at least 1
inline int thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  int cap = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("SCHURLAB_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested >= 1) cap = std::min(requested, cap);
    } catch (const std::exception&) {
      // unparsable value: keep the hardware default
    }
  }
  return cap;
}

// Evaluates fn(trial) for trial in [0, trials) across up to thread_cap()
// workers and returns the results in trial order, so any fold over them is
// independent of the thread count. fn must not touch shared mutable state;
// derive per-trial randomness from the trial index. The first exception
// thrown by any trial is rethrown on the calling thread.
template <typename R, typename Fn>
std::vector<R> map_trials(long trials, Fn&& fn) {
  std::vector<R> results(static_cast<size_t>(trials < 0 ? 0 : trials));
  if (trials <= 0) return results;

  const int workers = static_cast<int>(std::min<long>(thread_cap(), trials));
  if (workers <= 1) {
    for (long t = 0; t < trials; ++t) results[static_cast<size_t>(t)] = fn(t);
    return results;
  }

  constexpr long kChunk = 64;
  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const long begin = next.fetch_add(kChunk);
      if (begin >= trials) break;
      const long end = std::min(begin + kChunk, trials);
      try {
        for (long t = begin; t < end; ++t)
          results[static_cast<size_t>(t)] = fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        break;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace schurlab
