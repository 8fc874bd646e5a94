#pragma once
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qmboot {

// Static block partition of [0, n) over at most `workers` threads.
// workers <= 0 means hardware concurrency. The body must be pure per index;
// results are written to caller-owned slots, so gather order is deterministic.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  std::size_t hw = std::thread::hardware_concurrency();
  std::size_t w = workers > 0 ? static_cast<std::size_t>(workers) : (hw ? hw : 1);
  if (w > n) w = n ? n : 1;
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qmboot
