// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Internal fork-join helper. Work items are split into contiguous blocks,
// one per worker, so the assignment of items to threads never depends on
// timing. The first exception thrown by any worker is rethrown.

#ifndef LMGDPT_SRC_PARALLEL_HPP
#define LMGDPT_SRC_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lmgdpt::detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class F>
void parallel_for(std::ptrdiff_t n, int threads, F&& body) {
  if (n <= 0) return;
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(resolve_threads(threads), n));
  if (workers <= 1) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::ptrdiff_t begin = n * w / workers;
    const std::ptrdiff_t end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::ptrdiff_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lmgdpt::detail

#endif  // LMGDPT_SRC_PARALLEL_HPP
