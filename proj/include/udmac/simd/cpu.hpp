#pragma once

namespace udmac::simd {

// Runtime CPU feature probes; false on non-x86 targets.
bool cpu_supports_avx2();

}  // namespace udmac::simd
