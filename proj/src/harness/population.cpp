#include "udmac/harness/population.hpp"

#include <cmath>
#include <numbers>

#include "udmac/errors.hpp"

namespace udmac::harness {

using geometry::Dimension;
using geometry::Vec3;

std::vector<Vec3> stratified_positions(const geometry::SceneGeometry& geom, int count) {
  geom.validate();
  if (count < 0) throw ConfigError("UAV count must be >= 0");
  const double r = geom.comm_range_km;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double u = (i + 0.5) / count;
    const double phi = golden * i;
    switch (geom.dim) {
      case Dimension::One: {
        const double rho = r + u * (geom.plane_radius() - r);
        out.push_back({rho, 0.0, geom.height_km});
        break;
      }
      case Dimension::Two: {
        const double outer = geom.plane_radius();
        const double rho = std::sqrt(r * r + u * (outer * outer - r * r));
        out.push_back({rho * std::cos(phi), rho * std::sin(phi), geom.height_km});
        break;
      }
      case Dimension::Three: {
        const double R = geom.scene_radius_km;
        const double d = std::cbrt(r * r * r + u * (R * R * R - r * r * r));
        const double cos_polar = u;
        const double sin_polar = std::sqrt(1.0 - cos_polar * cos_polar);
        out.push_back({d * sin_polar * std::cos(phi), d * sin_polar * std::sin(phi), d * cos_polar});
        break;
      }
    }
  }
  return out;
}

markov::ScfCount scf_count_at(const geometry::SceneGeometry& geom, int uavs, double wait_s,
                              markov::Rounding rounding) {
  const auto positions = stratified_positions(geom, uavs);
  return markov::nscf_from_positions(geom, positions, wait_s, rounding);
}

}  // namespace udmac::harness
