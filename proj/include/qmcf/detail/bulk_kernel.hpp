#pragma once

// Pointwise bulk-potential arithmetic written once for any arithmetic type V
// that supports +, -, * and construction from double (plain double or a SIMD
// lane wrapper). Included by translation units compiled with different
// instruction sets, so everything here has internal linkage.

#include "qmcf/tensor_basis.hpp"

namespace qmcf::detail {
namespace {

struct BulkCoeffs {
  double a, b, c;
};

/// Projection of Q^2 onto the basis, and |q|^2, for the tensor with coefficients q.
template <class V>
inline void square_projection(const V q[5], V p[5], V& n2) {
  using namespace qmcf::basis;
  const V e1x(kE1[0]), e1y(kE1[1]), e1z(kE1[2]);
  const V e2x(kE2[0]), e2y(kE2[1]), e2z(kE2[2]);
  const V is2(kInvSqrt2), s2(kSqrt2);
  const V m00 = e1x * q[0] + e2x * q[1];
  const V m11 = e1y * q[0] + e2y * q[1];
  const V m22 = e1z * (q[0] + q[1]);
  const V m01 = is2 * q[2];
  const V m02 = is2 * q[3];
  const V m12 = is2 * q[4];
  const V p00 = m00 * m00 + m01 * m01 + m02 * m02;
  const V p11 = m01 * m01 + m11 * m11 + m12 * m12;
  const V p22 = m02 * m02 + m12 * m12 + m22 * m22;
  const V p01 = m00 * m01 + m01 * m11 + m02 * m12;
  const V p02 = m00 * m02 + m01 * m12 + m02 * m22;
  const V p12 = m01 * m02 + m11 * m12 + m12 * m22;
  p[0] = e1x * p00 + e1y * p11 + e1z * p22;
  p[1] = e2x * p00 + e2y * p11 + e2z * p22;
  p[2] = s2 * p01;
  p[3] = s2 * p02;
  p[4] = s2 * p12;
  n2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3] + q[4] * q[4];
}

/// g = a q - b proj(Q^2) + c |q|^2 q.
template <class V>
inline void bulk_gradient(const V q[5], V g[5], const BulkCoeffs& k) {
  V p[5];
  V n2;
  square_projection(q, p, n2);
  const V a(k.a), b(k.b), cn = V(k.c) * n2;
  for (int i = 0; i < 5; ++i) g[i] = (a + cn) * q[i] - b * p[i];
}

/// F = a/2 |q|^2 - b/3 tr Q^3 + c/4 |q|^4, using tr Q^3 = proj(Q^2) . q.
template <class V>
inline V bulk_energy(const V q[5], const BulkCoeffs& k) {
  V p[5];
  V n2;
  square_projection(q, p, n2);
  const V tr3 = p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3] + p[4] * q[4];
  return V(0.5 * k.a) * n2 - V(k.b / 3.0) * tr3 + V(0.25 * k.c) * n2 * n2;
}

}  // namespace
}  // namespace qmcf::detail
