#pragma once

// Red-region membership over a batch of returning-UAV positions.
//
// A returning UAV at P flies straight toward the inbound target C (the GU,
// or the point above it on the activity plane) for at most `reach_km`
// (v * t, capped at |C - P|). It is "red" for the waiting UAV U when that
// segment passes within `range_km` of U. With dv = C - P and w = U - P, the
// closest segment point is P + dv * k, where
//
//   k = clamp(w . dv, 0, min(reach * |dv|, |dv|^2)) / |dv|^2,
//
// and the test is |w - dv * k|^2 <= range^2. No FMA contraction is allowed
// in any variant, so every variant returns the same count bit-for-bit.

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

namespace udmac::simd {

struct PointsView {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> z;

  std::size_t size() const { return x.size(); }
};

struct RedTarget {
  double ux = 0.0, uy = 0.0, uz = 0.0;  // waiting UAV
  double cx = 0.0, cy = 0.0, cz = 0.0;  // inbound target
  double reach_km = 0.0;
  double range_km = 0.0;
};

std::size_t count_red_scalar(const PointsView& points, const RedTarget& target);
#if defined(UDMAC_WITH_AVX2)
std::size_t count_red_avx2(const PointsView& points, const RedTarget& target);
#endif

enum class KernelPreference { Auto, Scalar, Avx2 };

using CountRedFn = std::size_t (*)(const PointsView&, const RedTarget&);

struct RedKernel {
  CountRedFn count = nullptr;
  std::string_view name;
};

// Auto picks AVX2 when compiled in and supported by the running CPU.
// Requesting Avx2 where it is unavailable throws udmac::ConfigError.
RedKernel select_red_kernel(KernelPreference preference = KernelPreference::Auto);

bool avx2_kernel_available();

}  // namespace udmac::simd
