#pragma once

// Index-sharded parallel map. Each task i writes only slot i of the result
// vector and derives its own random stream from (seed, i), so the output is
// identical for any worker count and any scheduling order.

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace affrec {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

template <class R, class Fn>
std::vector<R> parallel_map_indexed(std::size_t count, int workers, Fn&& fn) {
  std::vector<R> out(count);
  const int w = std::min<std::size_t>(resolve_workers(workers), count ? count : 1);
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load(std::memory_order_relaxed)) return;
        try {
          out[i] = fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed) std::rethrow_exception(error);
  return out;
}

}  // namespace affrec
