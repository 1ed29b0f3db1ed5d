#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qft {

// Run task(0..n_tasks-1) on up to n_jobs worker threads. The first exception
// thrown by any task is rethrown on the calling thread after all workers join.
inline void parallel_for(int n_jobs, int n_tasks,
                         const std::function<void(int)>& task) {
  if (n_tasks <= 0) return;
  n_jobs = std::max(1, std::min(n_jobs, n_tasks));
  if (n_jobs == 1) {
    for (int i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const int i = next.fetch_add(1);
      if (i >= n_tasks) break;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_jobs);
  for (int j = 0; j < n_jobs; ++j) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace qft
