#pragma once

// Stencil kernels for the Landau-de Gennes right-hand side. A portable scalar
// reference and an AVX2 variant share one templated implementation; the
// variant is chosen at runtime from the CPU features.

#include <cstddef>
#include <string>

namespace qmcf {

enum class KernelKind { Auto, Scalar, Avx2 };

const char* to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& name);

struct RhsParams {
  int dim = 2;
  double inv_h2 = 1.0;
  double inv_eps2 = 1.0;
  double a = 3.0, b = 9.0, c = 1.0;
  std::ptrdiff_t sy = 0;  ///< padded stride of axis 1
  std::ptrdiff_t sz = 0;  ///< padded stride of axis 2
};

/// out = Laplacian(q) - inv_eps2 * bulk_gradient(q) for the padded indices
/// [begin, begin + count). Neighbors are read from q, including ghosts.
using RhsSpanFn = void (*)(const double* const* q, double* const* out, std::size_t begin, std::size_t count,
                           const RhsParams& p);
/// g = bulk_gradient(q) for n consecutive entries of each component plane.
using BulkGradientFn = void (*)(const double* const* q, double* const* g, std::size_t n, double a, double b,
                                double c);

struct KernelSet {
  KernelKind kind = KernelKind::Scalar;
  RhsSpanFn rhs = nullptr;
  BulkGradientFn bulk_gradient = nullptr;
};

bool avx2_compiled();
bool cpu_supports_avx2();
/// Auto picks AVX2 when compiled in and supported. An explicit Avx2 request on a
/// machine without it throws ConfigError.
KernelSet select_kernels(KernelKind requested);

namespace kernels {
void rhs_scalar(const double* const* q, double* const* out, std::size_t begin, std::size_t count, const RhsParams& p);
void bulk_gradient_scalar(const double* const* q, double* const* g, std::size_t n, double a, double b, double c);
#if defined(QMCF_HAVE_AVX2)
void rhs_avx2(const double* const* q, double* const* out, std::size_t begin, std::size_t count, const RhsParams& p);
void bulk_gradient_avx2(const double* const* q, double* const* g, std::size_t n, double a, double b, double c);
#endif
}  // namespace kernels

}  // namespace qmcf
