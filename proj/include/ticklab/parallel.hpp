#pragma once

// OpenMP helpers shared by the kernels. Results never depend on the thread
// count: sums are split into fixed-size blocks and the partials are combined
// in block order.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#include <omp.h>

namespace ticklab::par {

inline constexpr std::size_t kSumBlock = 4096;

/// Deterministic blocked sum of term(i) for i in [0, n).
template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
  const std::size_t blocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
    const std::size_t hi = std::min(n, lo + kSumBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

/// Runs body(i) for i in [0, n) across threads; the first exception thrown
/// by any iteration is rethrown on the calling thread.
template <class Body>
void for_each_index(std::size_t n, Body&& body) {
  std::exception_ptr first;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

inline int max_threads() { return omp_get_max_threads(); }

}  // namespace ticklab::par
