#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace polyhom {

// Runs fn(begin, end) over a partition of [0, n) using up to `threads`
// workers. Chunk boundaries are fixed (independent of the thread count), and
// callers only write to disjoint slots, so results are bit-stable for any
// thread count.
inline void parallel_for(std::int64_t n, int threads,
                         const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  if (threads <= 1) {
    fn(0, n);
    return;
  }
  const std::int64_t chunk = 16384;
  std::vector<std::thread> pool;
  std::int64_t next = 0;
  const int workers = std::min<std::int64_t>(threads, (n + chunk - 1) / chunk);
  // Static interleaved assignment of fixed chunks.
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=]() {
      for (std::int64_t start = static_cast<std::int64_t>(w) * chunk; start < n;
           start += static_cast<std::int64_t>(workers) * chunk) {
        const std::int64_t stop = std::min(n, start + chunk);
        fn(start, stop);
      }
    });
  }
  (void)next;
  for (auto& t : pool) t.join();
}

// Pairwise (cascade) summation: grouping depends only on n, so the result is
// identical no matter how the buffer was filled.
inline double pairwise_sum(const double* x, std::int64_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::int64_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace polyhom
