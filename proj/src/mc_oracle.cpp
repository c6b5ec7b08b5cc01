#include "udmac/mc_oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "udmac/errors.hpp"
#include "udmac/rng.hpp"

namespace udmac::oracle {

using geometry::Dimension;
using geometry::SceneGeometry;
using geometry::Vec3;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

simd::RedTarget make_target(const SceneGeometry& geom, const Vec3& uav, double wait_s) {
  const Vec3 c = inbound_target(geom);
  simd::RedTarget t;
  t.ux = uav.x;
  t.uy = uav.y;
  t.uz = uav.z;
  t.cx = c.x;
  t.cy = c.y;
  t.cz = c.z;
  t.reach_km = geom.speed_km_per_s * wait_s;
  t.range_km = geom.comm_range_km;
  return t;
}

McEstimate make_estimate(std::size_t hits, std::size_t n) {
  McEstimate e;
  e.hits = hits;
  e.n = n;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
  return e;
}

}  // namespace

void SamplerConfig::validate() const {
  if (num_points < 1) throw ConfigError("Monte Carlo sampler needs num_points >= 1");
  geom.validate();
}

void PointCloud::reserve(std::size_t n) {
  x_.reserve(n);
  y_.reserve(n);
  z_.reserve(n);
}

void PointCloud::push_back(const Vec3& p) {
  x_.push_back(p.x);
  y_.push_back(p.y);
  z_.push_back(p.z);
}

Vec3 inbound_target(const SceneGeometry& geom) {
  if (geom.dim == Dimension::Three) return {0.0, 0.0, 0.0};
  return {0.0, 0.0, geom.height_km};
}

PointCloud sample_returning_positions(const SamplerConfig& cfg) {
  cfg.validate();
  const SceneGeometry& g = cfg.geom;
  Rng rng(cfg.seed, "mc/dim" + std::to_string(geometry::to_int(g.dim)));
  PointCloud cloud;
  cloud.reserve(cfg.num_points);

  const double inner = g.plane_comm_range();
  const double outer = g.plane_radius();
  switch (g.dim) {
    case Dimension::One:
      for (std::size_t i = 0; i < cfg.num_points; ++i) {
        const double side = rng.below(2) == 0 ? 1.0 : -1.0;
        const double x = inner + rng.uniform() * (outer - inner);
        cloud.push_back({side * x, 0.0, g.height_km});
      }
      break;
    case Dimension::Two: {
      const double inner2 = inner * inner;
      const double span2 = outer * outer - inner2;
      for (std::size_t i = 0; i < cfg.num_points; ++i) {
        const double rho = std::sqrt(inner2 + rng.uniform() * span2);
        const double phi = kTwoPi * rng.uniform();
        cloud.push_back({rho * std::cos(phi), rho * std::sin(phi), g.height_km});
      }
      break;
    }
    case Dimension::Three: {
      const double r3 = std::pow(g.comm_range_km, 3);
      const double span3 = std::pow(g.scene_radius_km, 3) - r3;
      for (std::size_t i = 0; i < cfg.num_points; ++i) {
        const double rho = std::cbrt(r3 + rng.uniform() * span3);
        const double cos_polar = rng.uniform();
        const double sin_polar = std::sqrt(1.0 - cos_polar * cos_polar);
        const double phi = kTwoPi * rng.uniform();
        cloud.push_back({rho * sin_polar * std::cos(phi), rho * sin_polar * std::sin(phi),
                         rho * cos_polar});
      }
      break;
    }
  }
  return cloud;
}

bool is_red(const SceneGeometry& geom, const Vec3& uav, const Vec3& returning, double wait_s) {
  const double x[] = {returning.x};
  const double y[] = {returning.y};
  const double z[] = {returning.z};
  return simd::count_red_scalar({x, y, z}, make_target(geom, uav, wait_s)) == 1;
}

McEstimate estimate_scf_probability(const SceneGeometry& geom, const Vec3& uav, double wait_s,
                                    const PointCloud& samples, simd::KernelPreference kernel) {
  if (samples.size() == 0) throw ConfigError("Monte Carlo estimate needs at least one sample");
  if (!(wait_s >= 0.0)) throw DomainError("waiting time must be >= 0");
  const auto k = simd::select_red_kernel(kernel);
  return make_estimate(k.count(samples.view(), make_target(geom, uav, wait_s)), samples.size());
}

McEstimate estimate_scf_probability(const SceneGeometry& geom, const Vec3& uav, double wait_s,
                                    const SamplerConfig& cfg) {
  if (geom.dim != cfg.geom.dim) throw ConfigError("sampler dimension differs from query dimension");
  return estimate_scf_probability(geom, uav, wait_s, sample_returning_positions(cfg));
}

}  // namespace udmac::oracle
