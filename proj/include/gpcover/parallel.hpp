#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gpcover {

// Worker-pool width used by the parallel helpers. Set once by the CLI from
// --threads / GPCOVER_THREADS; results never depend on the value, only
// wall time does.
inline unsigned& thread_count() {
  static unsigned count = [] {
    if (const char* env = std::getenv("GPCOVER_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
  }();
  return count;
}

// Runs f(i) for i in [0, count), partitioned across threads in fixed
// blocks. f must only write to per-index state.
template <class F>
inline void parallel_for(std::uint64_t count, F f) {
  const unsigned nt = thread_count();
  if (nt <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  const std::uint64_t block = (count + nt * 4 - 1) / (nt * 4);
  std::vector<std::thread> workers;
  workers.reserve(nt);
  for (unsigned t = 0; t < nt; ++t)
    workers.emplace_back([&] {
      for (;;) {
        std::uint64_t lo = next.fetch_add(block);
        if (lo >= count) return;
        std::uint64_t hi = std::min(lo + block, count);
        for (std::uint64_t i = lo; i < hi; ++i) f(i);
      }
    });
  for (auto& w : workers) w.join();
}

}  // namespace gpcover
