// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "qmcf/detail/rhs_kernel.hpp"

namespace qmcf::detail {
namespace {

struct f64x4 {
  __m256d v;
  f64x4() = default;
  f64x4(__m256d x) : v(x) {}
  explicit f64x4(double s) : v(_mm256_set1_pd(s)) {}
};

inline f64x4 operator+(f64x4 a, f64x4 b) { return _mm256_add_pd(a.v, b.v); }
inline f64x4 operator-(f64x4 a, f64x4 b) { return _mm256_sub_pd(a.v, b.v); }
inline f64x4 operator*(f64x4 a, f64x4 b) { return _mm256_mul_pd(a.v, b.v); }

template <>
struct Lanes<f64x4> {
  static constexpr std::size_t width = 4;
  static f64x4 load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, f64x4 x) { _mm256_storeu_pd(p, x.v); }
};

}  // namespace
}  // namespace qmcf::detail

namespace qmcf::kernels {

void rhs_avx2(const double* const* q, double* const* out, std::size_t begin, std::size_t count, const RhsParams& p) {
  detail::rhs_span<detail::f64x4>(q, out, begin, count, p);
}

void bulk_gradient_avx2(const double* const* q, double* const* g, std::size_t n, double a, double b, double c) {
  detail::bulk_gradient_span<detail::f64x4>(q, g, n, a, b, c);
}

}  // namespace qmcf::kernels
