#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace logpart {

/// Runs body(i) for i in [0, count) on up to `threads` workers with a static
/// strided schedule. If any call throws, the exception of the smallest
/// failing index is rethrown, so failures do not depend on the schedule.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> failed_at(workers, std::numeric_limits<std::size_t>::max());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          body(i);
        } catch (...) {
          errors[w] = std::current_exception();
          failed_at[w] = i;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  const auto first = std::min_element(failed_at.begin(), failed_at.end());
  if (*first != std::numeric_limits<std::size_t>::max())
    std::rethrow_exception(errors[static_cast<std::size_t>(first - failed_at.begin())]);
}

}  // namespace logpart
