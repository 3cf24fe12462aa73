// Minimal worker pool: independent jobs over an index range, results written
// into caller-owned slots, first exception rethrown after join.
#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spingeo {

/// Job count resolution: explicit > SPINGEO_JOBS > hardware concurrency.
inline int default_jobs(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPINGEO_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

template <class F>
inline void parallel_for(std::size_t count, int jobs, F&& fn) {
  jobs = default_jobs(jobs);
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const std::size_t workers = std::min<std::size_t>(std::size_t(jobs), count);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace spingeo
