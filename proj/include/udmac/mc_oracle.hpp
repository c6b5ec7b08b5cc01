#pragma once

// Monte Carlo oracle for the closed-form SCF probabilities: scatter returning
// UAVs uniformly over the activity space outside the GU range and count the
// fraction that reaches the waiting UAV within t.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "udmac/geometry.hpp"
#include "udmac/simd/red_kernel.hpp"

namespace udmac::oracle {

struct SamplerConfig {
  std::size_t num_points = 100000;
  std::uint64_t seed = 1;
  geometry::SceneGeometry geom;

  void validate() const;
};

struct McEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;  // sqrt(p(1-p)/n)
  std::size_t hits = 0;
  std::size_t n = 0;
};

// Structure-of-arrays point set, laid out for the batch kernels.
class PointCloud {
 public:
  void reserve(std::size_t n);
  void push_back(const geometry::Vec3& p);

  std::size_t size() const { return x_.size(); }
  geometry::Vec3 operator[](std::size_t i) const { return {x_[i], y_[i], z_[i]}; }
  simd::PointsView view() const { return {x_, y_, z_}; }

  bool operator==(const PointCloud&) const = default;

 private:
  std::vector<double> x_, y_, z_;
};

// Uniform over: both line segments sqrt(r^2-H^2) < |x| <= sqrt(R^2-H^2)
// (1-D), the annulus at height H (2-D), or the hemispherical shell
// r < |p| <= R, z >= 0 (3-D). The stream seed is derived from
// (cfg.seed, "mc/dim<k>").
PointCloud sample_returning_positions(const SamplerConfig& cfg);

// Point the returning UAV flies toward: (0, 0, H) in 1-D/2-D, the GU in 3-D.
geometry::Vec3 inbound_target(const geometry::SceneGeometry& geom);

bool is_red(const geometry::SceneGeometry& geom, const geometry::Vec3& uav,
            const geometry::Vec3& returning, double wait_s);

McEstimate estimate_scf_probability(const geometry::SceneGeometry& geom, const geometry::Vec3& uav,
                                    double wait_s, const PointCloud& samples,
                                    simd::KernelPreference kernel = simd::KernelPreference::Auto);

McEstimate estimate_scf_probability(const geometry::SceneGeometry& geom, const geometry::Vec3& uav,
                                    double wait_s, const SamplerConfig& cfg);

}  // namespace udmac::oracle
