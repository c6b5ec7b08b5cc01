// Compiled with -mavx2 only; reached through select_red_kernel() after a
// runtime CPU check.

#include <immintrin.h>

#include "udmac/simd/red_kernel.hpp"

namespace udmac::simd {

std::size_t count_red_avx2(const PointsView& points, const RedTarget& t) {
  constexpr std::size_t kWidth = 4;
  const std::size_t n = points.size();
  const std::size_t simd_end = n / kWidth * kWidth;

  const __m256d ux = _mm256_set1_pd(t.ux);
  const __m256d uy = _mm256_set1_pd(t.uy);
  const __m256d uz = _mm256_set1_pd(t.uz);
  const __m256d cx = _mm256_set1_pd(t.cx);
  const __m256d cy = _mm256_set1_pd(t.cy);
  const __m256d cz = _mm256_set1_pd(t.cz);
  const __m256d reach = _mm256_set1_pd(t.reach_km);
  const __m256d range2 = _mm256_set1_pd(t.range_km * t.range_km);
  const __m256d zero = _mm256_setzero_pd();

  std::size_t hits = 0;
  for (std::size_t i = 0; i < simd_end; i += kWidth) {
    const __m256d px = _mm256_loadu_pd(points.x.data() + i);
    const __m256d py = _mm256_loadu_pd(points.y.data() + i);
    const __m256d pz = _mm256_loadu_pd(points.z.data() + i);
    const __m256d dx = _mm256_sub_pd(cx, px);
    const __m256d dy = _mm256_sub_pd(cy, py);
    const __m256d dz = _mm256_sub_pd(cz, pz);
    const __m256d wx = _mm256_sub_pd(ux, px);
    const __m256d wy = _mm256_sub_pd(uy, py);
    const __m256d wz = _mm256_sub_pd(uz, pz);
    const __m256d len2 = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
    const __m256d proj = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(wx, dx), _mm256_mul_pd(wy, dy)), _mm256_mul_pd(wz, dz));
    const __m256d len = _mm256_sqrt_pd(len2);
    const __m256d hi = _mm256_min_pd(_mm256_mul_pd(reach, len), len2);
    const __m256d s = _mm256_min_pd(_mm256_max_pd(proj, zero), hi);
    const __m256d nonzero = _mm256_cmp_pd(len2, zero, _CMP_GT_OQ);
    const __m256d k = _mm256_and_pd(_mm256_div_pd(s, len2), nonzero);
    const __m256d ex = _mm256_sub_pd(wx, _mm256_mul_pd(dx, k));
    const __m256d ey = _mm256_sub_pd(wy, _mm256_mul_pd(dy, k));
    const __m256d ez = _mm256_sub_pd(wz, _mm256_mul_pd(dz, k));
    const __m256d dist2 = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey)), _mm256_mul_pd(ez, ez));
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(dist2, range2, _CMP_LE_OQ));
    hits += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }

  if (simd_end < n) {
    const PointsView tail{points.x.subspan(simd_end), points.y.subspan(simd_end),
                          points.z.subspan(simd_end)};
    hits += count_red_scalar(tail, t);
  }
  return hits;
}

}  // namespace udmac::simd
