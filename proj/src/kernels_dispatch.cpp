#include "qmcf/errors.hpp"
#include "qmcf/kernels.hpp"

namespace qmcf {

const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Auto: return "auto";
    case KernelKind::Scalar: return "scalar";
    case KernelKind::Avx2: return "avx2";
  }
  return "auto";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "auto") return KernelKind::Auto;
  if (name == "scalar") return KernelKind::Scalar;
  if (name == "avx2") return KernelKind::Avx2;
  throw ConfigError("unknown kernel '" + name + "' (expected auto, scalar or avx2)");
}

bool avx2_compiled() {
#if defined(QMCF_HAVE_AVX2)
  return true;
#else
  return false;
#endif
}

bool cpu_supports_avx2() {
#if defined(QMCF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

KernelSet select_kernels(KernelKind requested) {
  const bool avx2 = avx2_compiled() && cpu_supports_avx2();
  if (requested == KernelKind::Avx2 && !avx2) throw ConfigError("AVX2 kernels requested but not available");
#if defined(QMCF_HAVE_AVX2)
  if (avx2 && requested != KernelKind::Scalar)
    return {KernelKind::Avx2, &kernels::rhs_avx2, &kernels::bulk_gradient_avx2};
#endif
  return {KernelKind::Scalar, &kernels::rhs_scalar, &kernels::bulk_gradient_scalar};
}

}  // namespace qmcf
