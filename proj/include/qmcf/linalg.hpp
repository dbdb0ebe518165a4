#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace qmcf {

/// Eigenvalues of a symmetric N x N matrix (row-major) by cyclic Jacobi sweeps.
/// The input is overwritten. Returned in the matrix diagonal order, unsorted.
template <std::size_t N>
std::array<double, N> jacobi_eigenvalues(std::array<double, N * N> a, int max_sweeps = 60) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * N + j]; };
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      diag += at(i, i) * at(i, i);
      for (std::size_t j = i + 1; j < N; ++j) off += at(i, j) * at(i, j);
    }
    if (off == 0.0 || off <= 1e-32 * diag) break;
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::array<double, N> ev{};
  for (std::size_t i = 0; i < N; ++i) ev[i] = at(i, i);
  return ev;
}

}  // namespace qmcf
