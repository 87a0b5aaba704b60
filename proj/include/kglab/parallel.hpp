#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kglab {

inline std::atomic<unsigned>& worker_thread_cap() {
  static std::atomic<unsigned> cap{0};  // 0: hardware concurrency
  return cap;
}

inline void set_worker_threads(unsigned n) { worker_thread_cap().store(n); }

inline unsigned worker_threads() {
  unsigned cap = worker_thread_cap().load();
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return cap == 0 ? hw : cap;
}

/// Runs body(i) for i in [0, count) on up to worker_threads() threads, handing
/// out indices dynamically. Callers write into per-index slots and combine
/// them in index order afterwards, so results do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kglab
