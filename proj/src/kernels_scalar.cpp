#include "qmcf/detail/rhs_kernel.hpp"

namespace qmcf::kernels {

void rhs_scalar(const double* const* q, double* const* out, std::size_t begin, std::size_t count, const RhsParams& p) {
  detail::rhs_span<double>(q, out, begin, count, p);
}

void bulk_gradient_scalar(const double* const* q, double* const* g, std::size_t n, double a, double b, double c) {
  detail::bulk_gradient_span<double>(q, g, n, a, b, c);
}

}  // namespace qmcf::kernels
