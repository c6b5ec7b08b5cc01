#include "udmac/errors.hpp"
#include "udmac/simd/cpu.hpp"
#include "udmac/simd/red_kernel.hpp"

namespace udmac::simd {

bool avx2_kernel_available() {
#if defined(UDMAC_WITH_AVX2)
  return cpu_supports_avx2();
#else
  return false;
#endif
}

RedKernel select_red_kernel(KernelPreference preference) {
  switch (preference) {
    case KernelPreference::Scalar:
      return {&count_red_scalar, "scalar"};
    case KernelPreference::Avx2:
#if defined(UDMAC_WITH_AVX2)
      if (cpu_supports_avx2()) return {&count_red_avx2, "avx2"};
#endif
      throw ConfigError("AVX2 red-region kernel requested but not available on this build/CPU");
    case KernelPreference::Auto:
      break;
  }
#if defined(UDMAC_WITH_AVX2)
  if (cpu_supports_avx2()) return {&count_red_avx2, "avx2"};
#endif
  return {&count_red_scalar, "scalar"};
}

}  // namespace udmac::simd
