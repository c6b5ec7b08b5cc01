#include "udmac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "udmac/errors.hpp"

namespace udmac::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPositionTolerance = 1e-9;

template <typename... Args>
[[noreturn]] void fail(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  throw DomainError(os.str());
}

double horizontal_distance(const SceneGeometry& geom, double d) {
  return std::sqrt(d * d - geom.height_km * geom.height_km);
}

double boundary_reach(const SceneGeometry& geom, double d) {
  if (geom.dim == Dimension::Three) return geom.scene_radius_km - d;
  return geom.plane_radius() - horizontal_distance(geom, d);
}

void validate_query(const SceneGeometry& geom, const ScfQuery& q) {
  geom.validate();
  const double r = geom.comm_range_km;
  const double d = q.distance_km;
  if (!std::isfinite(q.wait_s) || q.wait_s < 0.0) fail("waiting time must be >= 0, got ", q.wait_s);
  if (!(d > r) || !(d <= geom.scene_radius_km)) {
    fail("UAV distance d = ", d, " km must satisfy r < d <= R (r = ", r,
         ", R = ", geom.scene_radius_km, ")");
  }
  if (geom.dim != Dimension::Three && horizontal_distance(geom, d) < r) {
    fail("horizontal distance sqrt(d^2 - H^2) = ", horizontal_distance(geom, d),
         " km is inside the communication range r = ", r);
  }
}

double reach_alpha(double r, double reach) { return std::acos(r / reach); }

}  // namespace

Dimension dimension_from_int(int dim) {
  switch (dim) {
    case 1: return Dimension::One;
    case 2: return Dimension::Two;
    case 3: return Dimension::Three;
    default: fail("dimension must be 1, 2 or 3, got ", dim);
  }
}

int to_int(Dimension dim) { return static_cast<int>(dim); }

double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

SceneGeometry SceneGeometry::from_kmh(double scene_radius_km, double comm_range_km,
                                      double height_km, double speed_kmh, Dimension dim) {
  SceneGeometry g;
  g.scene_radius_km = scene_radius_km;
  g.comm_range_km = comm_range_km;
  g.height_km = height_km;
  g.speed_km_per_s = speed_kmh / 3600.0;
  g.dim = dim;
  g.validate();
  return g;
}

void SceneGeometry::validate() const {
  if (!(comm_range_km > 0.0) || !(comm_range_km < scene_radius_km)) {
    fail("scene requires 0 < r < R, got r = ", comm_range_km, ", R = ", scene_radius_km);
  }
  if (dim != Dimension::Three && (!(height_km >= 0.0) || !(height_km < comm_range_km))) {
    fail("activity height requires 0 <= H < r, got H = ", height_km, ", r = ", comm_range_km);
  }
  if (!(speed_km_per_s > 0.0) || !std::isfinite(speed_km_per_s)) {
    fail("UAV speed must be positive, got ", speed_km_per_s, " km/s");
  }
}

double SceneGeometry::plane_radius() const {
  return std::sqrt(scene_radius_km * scene_radius_km - height_km * height_km);
}

double SceneGeometry::plane_comm_range() const {
  return std::sqrt(comm_range_km * comm_range_km - height_km * height_km);
}

double SceneGeometry::space_measure() const {
  const double R = scene_radius_km;
  const double r = comm_range_km;
  switch (dim) {
    case Dimension::One: return 2.0 * (plane_radius() - plane_comm_range());
    case Dimension::Two: return kPi * (R * R - r * r);
    case Dimension::Three: return 2.0 / 3.0 * kPi * (R * R * R - r * r * r);
  }
  return 0.0;
}

double case_boundary_time(const SceneGeometry& geom, double distance_km) {
  validate_query(geom, ScfQuery{distance_km, 0.0});
  const double reach = boundary_reach(geom, distance_km);
  return std::max(0.0, (reach - geom.comm_range_km) / geom.speed_km_per_s);
}

namespace detail {

CaseBranch select_branch(const SceneGeometry& geom, const ScfQuery& q) {
  // Compared in time rather than distance so the branch flips exactly at the
  // value case_boundary_time reports.
  const double spare = boundary_reach(geom, q.distance_km) - geom.comm_range_km;
  if (spare < 0.0) return CaseBranch::II;
  return q.wait_s <= spare / geom.speed_km_per_s ? CaseBranch::I : CaseBranch::II;
}

RedRegionBreakdown evaluate_1d(const SceneGeometry& geom, const ScfQuery& q, CaseBranch branch) {
  const double r = geom.comm_range_km;
  const double vt = geom.speed_km_per_s * q.wait_s;
  RedRegionBreakdown out;
  out.alpha = reach_alpha(r, r + vt);
  out.case_branch = branch;
  const double length = branch == CaseBranch::I
                            ? 2.0 * r + vt
                            : r + boundary_reach(geom, q.distance_km);
  out.parts = {{"S1", length}};
  out.region_measure = length;
  out.space_measure = geom.space_measure();
  out.probability = out.region_measure / out.space_measure;
  return out;
}

RedRegionBreakdown evaluate_2d(const SceneGeometry& geom, const ScfQuery& q, CaseBranch branch) {
  const double r = geom.comm_range_km;
  const double reach = r + geom.speed_km_per_s * q.wait_s;
  const double horiz = horizontal_distance(geom, q.distance_km);
  RedRegionBreakdown out;
  out.theta = std::asin(std::min(1.0, r / horiz));
  out.alpha = reach_alpha(r, reach);
  out.case_branch = branch;
  const double theta = out.theta;
  const double alpha = out.alpha;

  // Half of the communication disk lying outside the two tangent rays.
  const double s1 = (0.25 - theta / (2.0 * kPi)) * kPi * r * r;
  if (branch == CaseBranch::I) {
    const double s2 = 0.5 * r * reach * std::sin(alpha);
    const double s3 = (kPi / 2.0 + theta - alpha) / (2.0 * kPi) * kPi * reach * reach;
    out.parts = {{"S1", s1}, {"S2", s2}, {"S3", s3}};
    out.region_measure = 2.0 * (s1 + s2 + s3);
  } else {
    const double plane_r2 = geom.plane_radius() * geom.plane_radius();
    const double s2 = theta / (2.0 * kPi) * kPi * plane_r2;
    const double s3 = 0.5 * r * horiz * std::cos(theta);
    out.parts = {{"S1", s1}, {"S2", s2}, {"S3", s3}};
    out.region_measure = 2.0 * (s1 + s2 - s3);
  }
  out.space_measure = geom.space_measure();
  out.probability = out.region_measure / out.space_measure;
  return out;
}

RedRegionBreakdown evaluate_3d(const SceneGeometry& geom, const ScfQuery& q, CaseBranch branch) {
  const double R = geom.scene_radius_km;
  const double r = geom.comm_range_km;
  const double d = q.distance_km;
  const double reach = r + geom.speed_km_per_s * q.wait_s;
  RedRegionBreakdown out;
  out.theta = std::asin(std::min(1.0, r / d));
  out.alpha = reach_alpha(r, reach);
  out.case_branch = branch;

  const double ratio = r / d;
  // Spherical cap of the communication ball on the GU side of the tangent cone.
  const double v1 = kPi / 3.0 * r * r * r * (1.0 - ratio) * (1.0 - ratio) * (2.0 + ratio);
  if (branch == CaseBranch::I) {
    const double theta = out.theta;
    const double tilt = out.alpha - theta;
    const double height = r * std::sin(theta) + reach * std::sin(tilt);
    const double near_radius = r * std::cos(theta);
    const double far_radius = reach * std::cos(tilt);
    // Frustum between the tangent circle and the reach circle.
    const double v2 = kPi / 3.0 * height *
                      (near_radius * near_radius + far_radius * far_radius +
                       near_radius * far_radius);
    const double s = std::sin(tilt);
    // Cap of the reach ball beyond the frustum.
    const double v3 = kPi / 3.0 * reach * reach * reach * (1.0 - s) * (1.0 - s) * (2.0 + s);
    out.parts = {{"V1", v1}, {"V2", v2}, {"V3", v3}};
    out.region_measure = v1 + v2 + v3;
  } else {
    const double d2 = d * d;
    const double chord = d2 - r * r;
    const double v2 = kPi / 3.0 *
                      (2.0 * R * R * R * d2 * (d - std::sqrt(chord)) - r * r * chord * chord) /
                      (d2 * d);
    out.parts = {{"V1", v1}, {"V2", v2}};
    out.region_measure = v1 + v2;
  }
  out.space_measure = geom.space_measure();
  out.probability = out.region_measure / out.space_measure;
  return out;
}

}  // namespace detail

RedRegionBreakdown scf_probability_1d(const SceneGeometry& geom, const ScfQuery& q) {
  if (geom.dim != Dimension::One) fail("scf_probability_1d requires a 1-D scene");
  validate_query(geom, q);
  return detail::evaluate_1d(geom, q, detail::select_branch(geom, q));
}

RedRegionBreakdown scf_probability_2d(const SceneGeometry& geom, const ScfQuery& q) {
  if (geom.dim != Dimension::Two) fail("scf_probability_2d requires a 2-D scene");
  validate_query(geom, q);
  return detail::evaluate_2d(geom, q, detail::select_branch(geom, q));
}

RedRegionBreakdown scf_probability_3d(const SceneGeometry& geom, const ScfQuery& q) {
  if (geom.dim != Dimension::Three) fail("scf_probability_3d requires a 3-D scene");
  validate_query(geom, q);
  return detail::evaluate_3d(geom, q, detail::select_branch(geom, q));
}

RedRegionBreakdown scf_probability(const SceneGeometry& geom, const ScfQuery& q) {
  switch (geom.dim) {
    case Dimension::One: return scf_probability_1d(geom, q);
    case Dimension::Two: return scf_probability_2d(geom, q);
    case Dimension::Three: return scf_probability_3d(geom, q);
  }
  fail("unknown dimension");
}

void validate_position(const SceneGeometry& geom, const Vec3& p) {
  geom.validate();
  switch (geom.dim) {
    case Dimension::One:
      if (std::abs(p.y) > kPositionTolerance || std::abs(p.z - geom.height_km) > kPositionTolerance) {
        fail("1-D positions must lie on the activity line y = 0, z = H");
      }
      break;
    case Dimension::Two:
      if (std::abs(p.z - geom.height_km) > kPositionTolerance) {
        fail("2-D positions must lie on the activity plane z = H");
      }
      break;
    case Dimension::Three:
      if (p.z < 0.0) fail("3-D positions must satisfy z >= 0");
      break;
  }
}

ScfProbability::ScfProbability(const SceneGeometry& geom, const Vec3& position)
    : geom_(geom), distance_km_(norm(position)) {
  validate_position(geom, position);
  validate_query(geom, ScfQuery{distance_km_, 0.0});
}

double ScfProbability::boundary_time() const { return case_boundary_time(geom_, distance_km_); }

RedRegionBreakdown ScfProbability::breakdown(double wait_s) const {
  return geometry::scf_probability(geom_, ScfQuery{distance_km_, wait_s});
}

ScfProbability scf_probability(const SceneGeometry& geom, const Vec3& position) {
  return ScfProbability(geom, position);
}

Vec3 canonical_position(const SceneGeometry& geom, double distance_km) {
  if (geom.dim == Dimension::Three) return {0.0, 0.0, distance_km};
  return {horizontal_distance(geom, distance_km), 0.0, geom.height_km};
}

}  // namespace udmac::geometry
