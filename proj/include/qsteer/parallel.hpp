#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace qsteer {

// Worker count used when a caller passes workers = 0: the QSTEER_WORKERS
// environment variable if set, else 1. Single-threaded by default so plain
// runs are reproducible without any setup.
inline int default_workers() {
  if (const char* env = std::getenv("QSTEER_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096)
      throw invalid_input_error("QSTEER_WORKERS must be an integer in [1, 4096], got '" +
                                std::string(env) + "'");
    return static_cast<int>(v);
  }
  return 1;
}

inline int resolve_workers(int workers) {
  if (workers == 0) return default_workers();
  if (workers < 0) throw invalid_input_error("worker count must be >= 1");
  return workers;
}

// Runs fn(begin, end) over a partition of [0, n) into contiguous chunks, one
// per worker thread. The partition depends only on (n, workers); callers must
// combine per-chunk results order-independently (e.g. max) or write into a
// preallocated buffer by index, so that results never depend on scheduling.
template <typename Fn>
void parallel_chunks(std::size_t n, int workers, Fn&& fn) {
  const std::size_t nworkers = static_cast<std::size_t>(resolve_workers(workers));
  if (n == 0) return;
  const std::size_t nthreads = std::min(nworkers, n);
  if (nthreads <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&fn, &first_error, &error_mutex, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qsteer
