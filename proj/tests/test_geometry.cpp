#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gen.hpp"
#include "udmac/errors.hpp"
#include "udmac/geometry.hpp"

using namespace udmac;
using namespace udmac::geometry;

namespace {

SceneGeometry scene(Dimension dim, double H = 0.05) {
  SceneGeometry g;
  g.scene_radius_km = 5.0;
  g.comm_range_km = 0.1;
  g.height_km = H;
  g.speed_km_per_s = 0.005;
  g.dim = dim;
  return g;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("boundary time examples") {
  CHECK(case_boundary_time(scene(Dimension::One, 0.0), 2.5) == doctest::Approx(480.0).epsilon(1e-12));
  CHECK(case_boundary_time(scene(Dimension::One, 0.0), 4.95) == 0.0);
  CHECK(case_boundary_time(scene(Dimension::Three), 2.5) == doctest::Approx(480.0).epsilon(1e-12));
}

TEST_CASE("1-D line values") {
  const auto g = scene(Dimension::One, 0.0);
  CHECK(scf_probability_1d(g, {2.5, 0.0}).probability == doctest::Approx(0.2 / 9.8).epsilon(1e-14));
  const auto at_star = scf_probability_1d(g, {2.5, 480.0});
  CHECK(at_star.case_branch == CaseBranch::I);
  CHECK(at_star.probability == doctest::Approx(2.6 / 9.8).epsilon(1e-12));
  const auto late = scf_probability_1d(g, {2.5, 600.0});
  CHECK(late.case_branch == CaseBranch::II);
  CHECK(late.probability == doctest::Approx(2.6 / 9.8).epsilon(1e-12));
  REQUIRE(late.parts.size() == 1);
  CHECK(late.parts[0].name == "S1");
  CHECK(late.parts[0].value == doctest::Approx(2.6).epsilon(1e-12));
}

TEST_CASE("1-D branches meet at the boundary time") {
  testgen::Gen gen(11);
  for (int i = 0; i < 500; ++i) {
    const auto g = gen.scene(Dimension::One);
    const double d = gen.distance(g);
    const double ts = case_boundary_time(g, d);
    const ScfQuery q{d, ts};
    const double one = detail::evaluate_1d(g, q, CaseBranch::I).probability;
    const double two = detail::evaluate_1d(g, q, CaseBranch::II).probability;
    if (ts > 0.0) CHECK(std::abs(one - two) <= 1e-9 * two);
  }
}

TEST_CASE("t = 0 reduces to the communication ball") {
  // Only where the ball is not clipped by the scene edge at t = 0.
  testgen::Gen gen(12);
  auto interior = [&](const SceneGeometry& g) {
    for (;;) {
      const double d = gen.distance(g);
      if (case_boundary_time(g, d) > 0.0) return d;
    }
  };
  for (int i = 0; i < 500; ++i) {
    {
      const auto g = gen.scene(Dimension::One);
      const double R = g.scene_radius_km, r = g.comm_range_km, H = g.height_km;
      const double want = r / (std::sqrt(R * R - H * H) - std::sqrt(r * r - H * H));
      CHECK(rel_err(scf_probability(g, ScfQuery{interior(g), 0.0}).probability, want) <= 1e-12);
    }
    {
      const auto g = gen.scene(Dimension::Two);
      const double R = g.scene_radius_km, r = g.comm_range_km;
      const double want = r * r / (R * R - r * r);
      CHECK(rel_err(scf_probability(g, ScfQuery{interior(g), 0.0}).probability, want) <= 1e-12);
    }
    {
      const auto g = gen.scene(Dimension::Three);
      const double R = g.scene_radius_km, r = g.comm_range_km;
      const double want = 2.0 * r * r * r / (R * R * R - r * r * r);
      CHECK(rel_err(scf_probability(g, ScfQuery{interior(g), 0.0}).probability, want) <= 1e-12);
    }
  }
  CHECK(scf_probability(scene(Dimension::Two), ScfQuery{2.5, 0.0}).probability ==
        doctest::Approx(4.0016e-4).epsilon(1e-4));
  CHECK(scf_probability(scene(Dimension::Three), ScfQuery{2.5, 0.0}).probability ==
        doctest::Approx(1.60002e-5).epsilon(1e-5));
}

// Closed-form values transcribed independently (double precision, Python),
// together with a 2e6-point Monte Carlo estimate of the same configuration.
TEST_CASE("golden fixtures") {
  struct Fixture {
    Dimension dim;
    double d, t;
    double closed;
    double mc;
  };
  const Fixture fixtures[] = {
      {Dimension::Two, 2.5, 300.0, 0.0055732526387400876, 0.0055435},
      {Dimension::Two, 4.9, 100.0, 0.00045659409302376854, 0.0004435},
      {Dimension::Two, 4.9, 600.0, 0.00045659409302376854, 0.0004435},
      {Dimension::Three, 2.5, 300.0, 0.00034828654686859002, 0.00033},
      {Dimension::Three, 2.5, 600.0, 0.00070816592158364313, 0.0007235},
  };
  for (const auto& f : fixtures) {
    CAPTURE(f.d);
    CAPTURE(f.t);
    const double p = scf_probability(scene(f.dim), ScfQuery{f.d, f.t}).probability;
    CHECK(rel_err(p, f.closed) <= 1e-12);
    CHECK(std::abs(p - f.mc) <= 0.02);
  }
  CHECK(scf_probability(scene(Dimension::Two), ScfQuery{2.5, 300.0}).case_branch == CaseBranch::I);
  CHECK(scf_probability(scene(Dimension::Two), ScfQuery{4.9, 100.0}).case_branch == CaseBranch::II);
  CHECK(scf_probability(scene(Dimension::Three), ScfQuery{2.5, 300.0}).case_branch == CaseBranch::I);
}

TEST_CASE("3-D case II matches the aggregate closed form") {
  testgen::Gen gen(13);
  for (int i = 0; i < 500; ++i) {
    const auto g = gen.scene(Dimension::Three);
    const double R = g.scene_radius_km, r = g.comm_range_km;
    const double d = gen.distance(g);
    const double R3 = R * R * R, d2 = d * d;
    const double want = (2 * R3 * d2 * (d - std::sqrt(d2 - r * r)) + 2 * r * r * r * d2 * d -
                         r * r * r * r * d2 - r * r * d2 * d2) /
                        (2 * d2 * d * (R3 - r * r * r));
    const double got = detail::evaluate_3d(g, {d, 0.0}, CaseBranch::II).probability;
    CHECK(rel_err(got, want) <= 1e-9);
  }
}

TEST_CASE("position dispatch") {
  const auto g1 = scene(Dimension::One);
  const double d1 = std::sqrt(2.5 * 2.5 + 0.05 * 0.05);
  CHECK(scf_probability(g1, Vec3{2.5, 0.0, 0.05})(300.0) ==
        scf_probability_1d(g1, {d1, 300.0}).probability);

  const auto g3 = scene(Dimension::Three);
  const auto p3 = scf_probability(g3, Vec3{0.0, 0.0, 2.5});
  CHECK(p3.distance_km() == 2.5);
  CHECK(p3(300.0) == scf_probability_3d(g3, {2.5, 300.0}).probability);

  const auto g2 = scene(Dimension::Two);
  const auto p2 = scf_probability(g2, Vec3{1.5, 2.0, 0.05});
  CHECK(p2.distance_km() == doctest::Approx(std::sqrt(6.25 + 0.0025)).epsilon(1e-15));
  CHECK(p2(300.0) == scf_probability_2d(g2, {p2.distance_km(), 300.0}).probability);
  CHECK(p2(300.0) == doctest::Approx(0.0055729925077258151).epsilon(1e-12));
  CHECK(std::abs(p2(300.0) - 0.00557) <= 0.02);

  CHECK(p3.boundary_time() == doctest::Approx(480.0));
}

TEST_CASE("structural invariants over random queries") {
  testgen::Gen gen(14);
  constexpr double half_pi = std::numbers::pi / 2;
  for (Dimension dim : {Dimension::One, Dimension::Two, Dimension::Three}) {
    for (int i = 0; i < 400; ++i) {
      const auto g = gen.scene(dim);
      const double d = gen.distance(g);
      const double ts = case_boundary_time(g, d);
      const double horizon = ts + 2.0 * g.scene_radius_km / g.speed_km_per_s;
      double prev = -1.0;
      for (int k = 0; k <= 20; ++k) {
        const double t = horizon * k / 20.0;
        const auto b = scf_probability(g, ScfQuery{d, t});
        CHECK(b.theta >= 0.0);
        CHECK(b.theta < half_pi);
        CHECK(b.alpha >= 0.0);
        CHECK(b.alpha < half_pi);
        for (const auto& part : b.parts) CHECK(part.value >= 0.0);
        CHECK(b.region_measure <= b.space_measure);
        CHECK(b.probability >= 0.0);
        CHECK(b.probability <= 1.0);
        CHECK(b.probability >= prev);
        const bool clipped_from_start = ts == 0.0 && b.case_branch == CaseBranch::II && k == 0;
        if (!clipped_from_start) CHECK(b.case_branch == (t <= ts ? CaseBranch::I : CaseBranch::II));
        prev = b.probability;
      }
      const double sat = scf_probability(g, ScfQuery{d, ts + 1e-3}).probability;
      for (double t : {ts + 1.0, ts + 100.0, ts + 1e5}) {
        CHECK(scf_probability(g, ScfQuery{d, t}).probability == sat);
      }
    }
  }
}

TEST_CASE("line beats plane beats space on the preset grid") {
  for (double d = 0.5; d <= 4.5; d += 0.5) {
    for (double t = 0.0; t <= 600.0; t += 60.0) {
      const double p1 = scf_probability(scene(Dimension::One), ScfQuery{d, t}).probability;
      const double p2 = scf_probability(scene(Dimension::Two), ScfQuery{d, t}).probability;
      const double p3 = scf_probability(scene(Dimension::Three), ScfQuery{d, t}).probability;
      CAPTURE(d);
      CAPTURE(t);
      CHECK(p1 > p2);
      CHECK(p2 > p3);
    }
  }
}

TEST_CASE("speed conversion") {
  const auto g = SceneGeometry::from_kmh(5.0, 0.1, 0.05, 18.0, Dimension::Two);
  CHECK(g.speed_km_per_s == doctest::Approx(0.005).epsilon(1e-15));
}

TEST_CASE("rejected inputs") {
  const auto g1 = scene(Dimension::One);
  const auto g3 = scene(Dimension::Three);
  CHECK_THROWS_AS(scf_probability(g3, ScfQuery{0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(scf_probability(g3, ScfQuery{0.05, 0.0}), DomainError);
  CHECK_THROWS_AS(scf_probability(g3, ScfQuery{5.01, 0.0}), DomainError);
  CHECK_THROWS_AS(scf_probability(g3, ScfQuery{2.5, -1.0}), DomainError);
  CHECK_THROWS_AS(scf_probability(g1, ScfQuery{0.105, 0.0}), DomainError);  // horizontal < r
  CHECK_THROWS_AS(scf_probability_2d(g1, ScfQuery{2.5, 0.0}), DomainError);
  CHECK_THROWS_AS(case_boundary_time(g1, 6.0), DomainError);
  CHECK_THROWS_AS(scf_probability(g1, Vec3{2.5, 0.1, 0.05}), DomainError);
  CHECK_THROWS_AS(scf_probability(scene(Dimension::Two), Vec3{2.5, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(scf_probability(g3, Vec3{0.0, 0.0, -2.5}), DomainError);
  CHECK_THROWS_AS(dimension_from_int(4), DomainError);

  auto bad = scene(Dimension::Two);
  bad.height_km = 0.1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = scene(Dimension::Two);
  bad.comm_range_km = 6.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = scene(Dimension::Two);
  bad.speed_km_per_s = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
