#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace aiexp {

/// Evaluates fn(i) for i in [0, n) on up to `workers` threads. Results land
/// at their index, so output order never depends on scheduling. The first
/// exception thrown by any task is rethrown on the calling thread.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, unsigned workers, Fn&& fn) {
  std::vector<T> out(n);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace aiexp
