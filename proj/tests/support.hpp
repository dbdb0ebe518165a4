#pragma once

// Small helpers shared by the unit tests.

#include <cmath>
#include <random>

#include "qmcf/qtensor.hpp"

namespace qmcf::test {

inline Coeffs5 random_coeffs(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Coeffs5 c{};
  double n = 0.0;
  for (auto& x : c) {
    x = u(rng);
    n += x * x;
  }
  const double scale = radius * std::uniform_real_distribution<double>(0.0, 1.0)(rng) / std::sqrt(n);
  for (auto& x : c) x *= scale;
  return c;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v{g(rng), g(rng), g(rng)};
  const double n = norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

/// Symmetric traceless matrix with independent random entries.
inline Mat3 random_sym_traceless(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = u(rng);
  const double tr = m.trace() / 3.0;
  for (int i = 0; i < 3; ++i) m(i, i) -= tr;
  return m;
}

inline double det3(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline double coeff_dist(const Coeffs5& a, const Coeffs5& b) {
  double acc = 0.0;
  for (int k = 0; k < 5; ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(acc);
}

}  // namespace qmcf::test
