#include "udmac/simd/cpu.hpp"

namespace udmac::simd {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported;
#else
  return false;
#endif
}

}  // namespace udmac::simd
