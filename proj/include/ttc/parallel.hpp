#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ttc {

inline unsigned effective_threads(unsigned requested = 0) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs fn(begin, end) over contiguous chunks of [begin, end) on `threads`
// workers. The first exception thrown by any worker is rethrown on the caller.
inline void parallel_chunks(std::size_t begin, std::size_t end, unsigned threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t n = end > begin ? end - begin : 0;
  threads = effective_threads(threads);
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    fn(begin, end);
    return;
  }
  if (threads > n) threads = static_cast<unsigned>(n);

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = begin + t * chunk;
    const std::size_t hi = lo + chunk < end ? lo + chunk : end;
    if (lo >= hi) break;
    pool.emplace_back([&, t, lo, hi] {
      try {
        fn(lo, hi);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ttc
