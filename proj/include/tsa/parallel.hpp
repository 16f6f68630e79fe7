#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace tsa {

/// Resolves a requested worker count (0 = hardware concurrency) against the
/// number of tasks.
inline std::size_t worker_count(std::size_t requested, std::size_t tasks) {
  std::size_t n = requested == 0 ? std::max<std::size_t>(1, std::thread::hardware_concurrency()) : requested;
  return std::max<std::size_t>(1, std::min(n, tasks));
}

/// Evaluates f(0..n-1) on a pool of workers and returns the results in index
/// order. The first exception thrown by any task is rethrown after all workers
/// have stopped.
template <class F>
auto parallel_map(std::size_t n, std::size_t threads, F&& f) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };

  const std::size_t workers = worker_count(threads, n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace tsa
