#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "udmac/errors.hpp"
#include "udmac/harness/commands.hpp"
#include "udmac/harness/config.hpp"
#include "udmac/harness/csv.hpp"
#include "udmac/harness/population.hpp"

using namespace udmac;
using namespace udmac::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("udmac_harness_" + name);
  std::filesystem::remove_all(p);
  return p;
}

// Small but non-trivial run of every command.
ExperimentConfig small() {
  auto cfg = preset("paper-2023");
  apply_override(cfg, "sweep.d_km=1,2.5,4");
  apply_override(cfg, "sweep.t_s=0,300,600");
  apply_override(cfg, "sweep.seeds=3,4");
  apply_override(cfg, "sweep.mc_samples=5000");
  apply_override(cfg, "sweep.freeze_slots=0,50");
  apply_override(cfg, "sim.duration_s=0.05");
  return cfg;
}

}  // namespace

TEST_CASE("format_number round trips and is locale free") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(100.0) == "100");
  CHECK(format_number(0.1) == "0.1");
  for (double v : {1.0 / 3.0, 2.0e-300, 6.02214076e23, 0.00045659409302376854, -7.25}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK_THROWS_AS(format_number(std::numeric_limits<double>::quiet_NaN()), Error);
  CHECK_THROWS_AS(format_number(std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("csv table layout") {
  Table t{"demo", {"a", "b", "c"}, {}};
  t.add({std::int64_t{1}, 0.25, std::string("x")});
  t.add({std::int64_t{-2}, 1e-7, std::string("")});
  CHECK(to_csv(t) == "a,b,c\n1,0.25,x\n-2,1e-07,\n");
  CHECK_THROWS_AS(t.add({std::int64_t{1}}), Error);
  CHECK(t.column("b") == 1);
  CHECK(t.number(0, "b") == 0.25);
  CHECK(t.number(1, "a") == -2.0);
  CHECK_THROWS(t.column("nope"));

  const auto dir = scratch("csv");
  CHECK_THROWS_AS(write_csv(t, dir / "missing"), IoError);
  std::filesystem::create_directories(dir);
  const auto path = write_csv(t, dir);
  CHECK(path.filename() == "demo.csv");
  CHECK(slurp(path) == to_csv(t));
  std::filesystem::remove_all(dir);
}

TEST_CASE("overrides and ini") {
  auto cfg = preset("paper-2023");
  apply_override(cfg, "mac.uavs=50");
  apply_override(cfg, "sweep.t_s=0:100:50");
  apply_override(cfg, "sweep.seeds=1..3");
  apply_override(cfg, " data.channel_policy = partitioned ");
  CHECK(cfg.uavs == 50);
  CHECK(cfg.t_grid_s == std::vector<double>{0, 50, 100});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cfg.channel_policy == sim::ChannelPolicy::Partitioned);

  CHECK_THROWS_AS(apply_override(cfg, "mac.nonsense=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "nosection.uavs=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "mac.uavs"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "mac.uavs=fifty"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "mac.rounding=sideways"), ConfigError);
  CHECK_THROWS_AS(preset("nope"), ConfigError);

  std::istringstream ini("[mac]\nuavs = 30\n[sim]\nduration_s = 0.25\n");
  apply_ini(cfg, ini, "mem");
  CHECK(cfg.uavs == 30);
  CHECK(cfg.sim_duration_s == 0.25);

  std::istringstream bad("[mac]\nwindow = 3\n");
  CHECK_THROWS_AS(apply_ini(cfg, bad, "mem"), ConfigError);

  // canonical text reads back to the same canonical text
  auto copy = preset("paper-2023");
  std::istringstream again(to_ini(cfg));
  apply_ini(copy, again, "round-trip");
  CHECK(to_ini(copy) == to_ini(cfg));
}

TEST_CASE("validation happens before any compute") {
  auto cfg = small();
  apply_override(cfg, "sweep.seeds=");
  CHECK_THROWS_WITH_AS(throughput(cfg), doctest::Contains("sweep.seeds"), ConfigError);

  cfg = small();
  apply_override(cfg, "sweep.t_s=");
  CHECK_THROWS_WITH_AS(validate_prob(cfg), doctest::Contains("sweep.t_s"), ConfigError);

  cfg = small();
  apply_override(cfg, "sweep.d_km=9");
  CHECK_THROWS_AS(validate_prob(cfg), ConfigError);

  cfg = small();
  apply_override(cfg, "data.payload_bits=40000");
  CHECK_THROWS_AS(simulate(cfg), AdmissibilityError);

  CHECK_THROWS_AS(run_command("bogus", small()), ConfigError);
}

TEST_CASE("population count follows the closed form") {
  const auto cfg = preset("paper-2023");
  const auto g = cfg.scene(geometry::Dimension::One);
  const auto pos = stratified_positions(g, 100);
  CHECK(pos.size() == 100);
  for (const auto& p : pos) {
    const double horiz = std::hypot(p.x, p.y);
    CHECK(horiz >= g.comm_range_km);
    CHECK(std::sqrt(horiz * horiz + p.z * p.z) <= g.scene_radius_km + 1e-12);
  }
  const auto c0 = scf_count_at(g, 100, 0.0, markov::Rounding::Floor);
  const auto c1 = scf_count_at(g, 100, 600.0, markov::Rounding::Floor);
  CHECK(c0.count <= c1.count);
  CHECK(c1.count == static_cast<int>(std::floor(c1.expected)));
}

TEST_CASE("commands produce consistent tables") {
  const auto cfg = small();
  const auto vp = validate_prob(cfg);
  REQUIRE(vp.tables.size() == 2);
  CHECK(vp.tables[0].rows.size() == 3 * 2 * 3 * 3);
  CHECK(vp.tables[1].rows.size() == 3);
  for (std::size_t i = 0; i < vp.tables[1].rows.size(); ++i) {
    CHECK(vp.tables[1].number(i, "max_abs_err") <= 0.05);
  }

  const auto th = throughput(cfg);
  const auto& sum = th.tables[1];
  CHECK(sum.rows.size() == 3 * 3);
  for (std::size_t i = 0; i < sum.rows.size(); ++i) {
    CHECK(sum.number(i, "udmac_over_vemac") > 1.0);
    CHECK(sum.number(i, "s_analytic_bps") >= sum.number(i, "s_classic_bps") - 1e-6);
  }

  const auto fz = freeze_tradeoff(cfg);
  CHECK(fz.tables[0].rows.size() == 3 * 3 * 2 * 2);
  const auto sm = simulate(cfg);
  CHECK(sm.tables[0].rows.size() == 2 * 2);
  const auto cp = compare(cfg);
  CHECK(cp.tables[0].rows.size() == 3 * 3 * 2 * 2 * 2);
}

TEST_CASE("explicit scf sweep bypasses geometry") {
  auto cfg = small();
  apply_override(cfg, "sweep.scf_counts=0,20");
  apply_override(cfg, "sweep.protocols=udmac");
  const auto th = throughput(cfg);
  const auto& sum = th.tables[1];
  REQUIRE(sum.rows.size() == 2);
  CHECK(std::get<std::string>(sum.rows[0][0]).empty());
  CHECK(std::get<std::string>(sum.rows[0][sum.column("s_vemac_sim_bps")]).empty());
  CHECK(sum.number(1, "n_scf") == 20);
}

TEST_CASE("outputs are byte identical across reruns and job counts") {
  const auto cfg = small();
  for (const auto& name : command_names()) {
    const auto a = run_command(name, cfg, RunOptions{1});
    const auto b = run_command(name, cfg, RunOptions{3});
    REQUIRE(a.tables.size() == b.tables.size());
    for (std::size_t i = 0; i < a.tables.size(); ++i) CHECK_MESSAGE(to_csv(a.tables[i]) == to_csv(b.tables[i]), name);
    CHECK(manifest_text(a, cfg, RunOptions{1}) == manifest_text(b, cfg, RunOptions{3}));
  }
}

TEST_CASE("kernel choice does not change validate-prob output") {
  auto cfg = small();
  const auto s = validate_prob(cfg, RunOptions{1, simd::KernelPreference::Scalar});
  const auto a = validate_prob(cfg, RunOptions{1, simd::KernelPreference::Auto});
  CHECK(to_csv(s.tables[0]) == to_csv(a.tables[0]));
}

TEST_CASE("write_outputs and manifest") {
  const auto cfg = small();
  const auto out = simulate(cfg);
  const auto dir = scratch("out");
  const auto files = write_outputs(out, cfg, RunOptions{}, dir);
  REQUIRE(files.size() == 2);
  CHECK(std::filesystem::exists(dir / "sim.csv"));
  const auto manifest = slurp(dir / "sim.manifest.ini");
  CHECK(manifest.find("command = sim") != std::string::npos);
  CHECK(manifest.find("seeds = 3,4") != std::string::npos);
  CHECK(manifest.find("outputs = sim.csv") != std::string::npos);
  std::filesystem::remove_all(dir);

  CHECK(resolve_out_dir(std::string("x/y")) == "x/y");
}
