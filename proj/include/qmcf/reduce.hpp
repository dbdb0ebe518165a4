#pragma once

// Deterministic reductions and row-parallel loops. Every sum over cells is a
// sequential sum within each grid row followed by a fixed pairwise tree over
// the row sums, so results do not depend on the thread count.

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace qmcf {

/// Pairwise (tree) sum with a fixed association order.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

/// Runs body(begin, end) over [0, count) split into contiguous chunks, one per thread.
template <class Body>
void parallel_ranges(std::size_t count, int threads, Body&& body) {
  if (threads <= 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::jthread> pool;
  pool.reserve(t - 1);
  for (std::size_t w = 1; w < t; ++w)
    pool.emplace_back([&, w] { body(count * w / t, count * (w + 1) / t); });
  body(0, count / t);
}

/// Sum over rows of row_sum(r), each row evaluated independently.
template <class RowSum>
double row_reduce(std::size_t rows, int threads, RowSum&& row_sum) {
  std::vector<double> partial(rows, 0.0);
  parallel_ranges(rows, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) partial[r] = row_sum(r);
  });
  return pairwise_sum(partial);
}

}  // namespace qmcf
