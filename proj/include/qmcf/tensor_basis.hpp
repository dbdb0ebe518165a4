#pragma once

// Diagonal parts of the first two basis tensors and the off-diagonal scale
// shared by every place that converts between coefficients and matrices.

#include <array>

namespace qmcf::basis {

inline constexpr double kSqrt3 = 1.7320508075688772935;
inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// diag(E1) and diag(E2); E3, E4, E5 carry 1/sqrt(2) on the (1,2), (1,3), (2,3) pairs.
inline constexpr std::array<double, 3> kE1{(kSqrt3 - 3.0) / 6.0, (kSqrt3 + 3.0) / 6.0, -kSqrt3 / 3.0};
inline constexpr std::array<double, 3> kE2{(kSqrt3 + 3.0) / 6.0, (kSqrt3 - 3.0) / 6.0, -kSqrt3 / 3.0};

}  // namespace qmcf::basis
