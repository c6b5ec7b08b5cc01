#pragma once

// Closed-form probability that a non-returning UAV is met by a returning UAV
// (and can hand its packets over for store-carry-and-forward delivery)
// within a waiting time t, for line, plane and hemispherical activity spaces.
//
// Units: distances in km, time in s, speed in km/s.

#include <string>
#include <vector>

namespace udmac::geometry {

enum class Dimension : int { One = 1, Two = 2, Three = 3 };

Dimension dimension_from_int(int dim);
int to_int(Dimension dim);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double norm(const Vec3& v);

// The activity space shared by all probability math. The GU sits at the
// origin; 1-D and 2-D UAVs fly at height `height_km`.
struct SceneGeometry {
  double scene_radius_km = 5.0;
  double comm_range_km = 0.1;
  double height_km = 0.05;
  double speed_km_per_s = 0.005;
  Dimension dim = Dimension::One;

  static SceneGeometry from_kmh(double scene_radius_km, double comm_range_km,
                                double height_km, double speed_kmh,
                                Dimension dim);

  // Throws DomainError when 0 < r < R, 0 <= H < r (dims 1-2) or v > 0 fails.
  void validate() const;

  // sqrt(R^2 - H^2): the scene boundary on the activity line/plane.
  double plane_radius() const;
  // sqrt(r^2 - H^2): the GU communication range on the activity line/plane.
  double plane_comm_range() const;
  // Length, area or volume of the activity space outside the GU range.
  double space_measure() const;
};

struct ScfQuery {
  double distance_km = 0.0;  // UAV to GU
  double wait_s = 0.0;
};

enum class CaseBranch { I, II };

struct NamedMeasure {
  std::string name;
  double value = 0.0;
};

// Intermediate quantities of one evaluation. `parts` holds S1..S3 (km^2),
// V1..V3 (km^3), or the 1-D red-segment length as S1 (km).
struct RedRegionBreakdown {
  double theta = 0.0;
  double alpha = 0.0;
  std::vector<NamedMeasure> parts;
  double region_measure = 0.0;
  double space_measure = 0.0;
  CaseBranch case_branch = CaseBranch::I;
  double probability = 0.0;
};

// Largest waiting time for which the reach region stays inside the scene
// (case I); for t > t* the boundary-clipped case II applies.
double case_boundary_time(const SceneGeometry& geom, double distance_km);

RedRegionBreakdown scf_probability_1d(const SceneGeometry& geom, const ScfQuery& q);
RedRegionBreakdown scf_probability_2d(const SceneGeometry& geom, const ScfQuery& q);
RedRegionBreakdown scf_probability_3d(const SceneGeometry& geom, const ScfQuery& q);

// Dispatches on geom.dim.
RedRegionBreakdown scf_probability(const SceneGeometry& geom, const ScfQuery& q);

// p_t(x, y, z) bound to one UAV position; evaluate for any t >= 0.
class ScfProbability {
 public:
  ScfProbability(const SceneGeometry& geom, const Vec3& position);

  double distance_km() const { return distance_km_; }
  double boundary_time() const;
  RedRegionBreakdown breakdown(double wait_s) const;
  double operator()(double wait_s) const { return breakdown(wait_s).probability; }

 private:
  SceneGeometry geom_;
  double distance_km_;
};

ScfProbability scf_probability(const SceneGeometry& geom, const Vec3& position);

// Throws DomainError unless `position` lies on the activity line (1-D:
// y = 0, z = H), plane (2-D: z = H) or upper half-space (3-D: z >= 0).
void validate_position(const SceneGeometry& geom, const Vec3& position);

// Canonical UAV placement used by the oracle and harness for a distance d:
// (sqrt(d^2 - H^2), 0, H) on the line/plane, (0, 0, d) in 3-D.
Vec3 canonical_position(const SceneGeometry& geom, double distance_km);

namespace detail {

// Branch-forced evaluation; callers are responsible for query validation.
CaseBranch select_branch(const SceneGeometry& geom, const ScfQuery& q);
RedRegionBreakdown evaluate_1d(const SceneGeometry& geom, const ScfQuery& q, CaseBranch branch);
RedRegionBreakdown evaluate_2d(const SceneGeometry& geom, const ScfQuery& q, CaseBranch branch);
RedRegionBreakdown evaluate_3d(const SceneGeometry& geom, const ScfQuery& q, CaseBranch branch);

}  // namespace detail

}  // namespace udmac::geometry
