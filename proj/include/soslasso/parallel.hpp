#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace soslasso {

// Runs body(0..n_units) on up to `threads` workers. Units must be independent
// and write only to their own output slot; callers aggregate in index order
// afterwards, so results are identical for any thread count.
inline void parallel_for(int n_units, int threads,
                         const std::function<void(int)>& body) {
  if (n_units <= 0) return;
  if (threads <= 1 || n_units == 1) {
    for (int i = 0; i < n_units; ++i) body(i);
    return;
  }
  const int workers = std::min(threads, n_units);
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto run = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_units) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace soslasso
