#include "udmac/simd/red_kernel.hpp"

#include <algorithm>

namespace udmac::simd {

std::size_t count_red_scalar(const PointsView& points, const RedTarget& t) {
  const double range2 = t.range_km * t.range_km;
  const std::size_t n = points.size();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double px = points.x[i];
    const double py = points.y[i];
    const double pz = points.z[i];
    const double dx = t.cx - px;
    const double dy = t.cy - py;
    const double dz = t.cz - pz;
    const double wx = t.ux - px;
    const double wy = t.uy - py;
    const double wz = t.uz - pz;
    const double len2 = dx * dx + dy * dy + dz * dz;
    const double proj = wx * dx + wy * dy + wz * dz;
    const double len = std::sqrt(len2);
    const double hi = std::min(t.reach_km * len, len2);
    const double s = std::min(std::max(proj, 0.0), hi);
    const double k = len2 > 0.0 ? s / len2 : 0.0;
    const double ex = wx - dx * k;
    const double ey = wy - dy * k;
    const double ez = wz - dz * k;
    const double dist2 = ex * ex + ey * ey + ez * ez;
    hits += dist2 <= range2 ? 1 : 0;
  }
  return hits;
}

}  // namespace udmac::simd
