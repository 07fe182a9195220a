#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace adelic {

// Runs fn(block) for block in [0, n_blocks) on up to `workers` threads.
// Blocks are claimed dynamically; callers write results into slots indexed
// by block so the outcome does not depend on the schedule.
template <class Fn>
void parallel_for_blocks(std::size_t n_blocks, unsigned workers, Fn&& fn) {
  const std::size_t w = std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(1, n_blocks));
  if (w == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::size_t k = 0; k < w; ++k) {
    threads.emplace_back([&, k] {
      try {
        for (std::size_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) fn(b);
      } catch (...) {
        errors[k] = std::current_exception();
        next.store(n_blocks);
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace adelic
