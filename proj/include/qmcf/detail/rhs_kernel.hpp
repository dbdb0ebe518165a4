#pragma once

// Shared body of the right-hand-side kernels. Lanes<V> supplies load/store and
// the lane count for the arithmetic type V.

#include "qmcf/detail/bulk_kernel.hpp"
#include "qmcf/kernels.hpp"

namespace qmcf::detail {
namespace {

template <class V>
struct Lanes;

template <>
struct Lanes<double> {
  static constexpr std::size_t width = 1;
  static double load(const double* p) { return *p; }
  static void store(double* p, double v) { *p = v; }
};

template <class V>
inline void rhs_at(const double* const* q, double* const* out, std::size_t p, const RhsParams& P) {
  using L = Lanes<V>;
  V qc[5], g[5];
  for (int c = 0; c < 5; ++c) qc[c] = L::load(q[c] + p);
  bulk_gradient(qc, g, BulkCoeffs{P.a, P.b, P.c});
  const V center(-2.0 * P.dim);
  const V ih2(P.inv_h2), ie2(P.inv_eps2);
  for (int c = 0; c < 5; ++c) {
    const double* s = q[c] + p;
    V lap = L::load(s - 1) + L::load(s + 1) + center * qc[c];
    if (P.dim >= 2) lap = lap + L::load(s - P.sy) + L::load(s + P.sy);
    if (P.dim >= 3) lap = lap + L::load(s - P.sz) + L::load(s + P.sz);
    L::store(out[c] + p, ih2 * lap - ie2 * g[c]);
  }
}

template <class V>
inline void rhs_span(const double* const* q, double* const* out, std::size_t begin, std::size_t count,
                     const RhsParams& P) {
  constexpr std::size_t w = Lanes<V>::width;
  std::size_t p = begin;
  const std::size_t end = begin + count;
  for (; p + w <= end; p += w) rhs_at<V>(q, out, p, P);
  for (; p < end; ++p) rhs_at<double>(q, out, p, P);
}

template <class V>
inline void bulk_gradient_span(const double* const* q, double* const* g, std::size_t n, double a, double b,
                               double c) {
  using L = Lanes<V>;
  constexpr std::size_t w = L::width;
  const BulkCoeffs k{a, b, c};
  std::size_t p = 0;
  for (; p + w <= n; p += w) {
    V qc[5], gc[5];
    for (int i = 0; i < 5; ++i) qc[i] = L::load(q[i] + p);
    bulk_gradient(qc, gc, k);
    for (int i = 0; i < 5; ++i) L::store(g[i] + p, gc[i]);
  }
  for (; p < n; ++p) {
    double qc[5], gc[5];
    for (int i = 0; i < 5; ++i) qc[i] = q[i][p];
    bulk_gradient(qc, gc, k);
    for (int i = 0; i < 5; ++i) g[i][p] = gc[i];
  }
}

}  // namespace
}  // namespace qmcf::detail
