#include "udmac/harness/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "udmac/errors.hpp"
#include "udmac/harness/population.hpp"
#include "udmac/mc_oracle.hpp"
#include "udmac/parallel.hpp"
#include "udmac/version.hpp"

namespace udmac::harness {

namespace {

using geometry::Dimension;
using std::int64_t;

int64_t as_int(auto v) { return static_cast<int64_t>(v); }

std::string fmt2(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

bool has_protocol(const ExperimentConfig& cfg, sim::Protocol p) {
  return std::find(cfg.protocols.begin(), cfg.protocols.end(), p) != cfg.protocols.end();
}

// One (dimension, waiting time) operating point of the analytic population.
struct OperatingPoint {
  std::string dim;  // "" for an explicit N_scf sweep
  std::string t_s;
  double expected = 0.0;
  int scf_count = 0;
};

std::vector<OperatingPoint> operating_points(const ExperimentConfig& cfg) {
  std::vector<OperatingPoint> out;
  if (!cfg.scf_grid.empty()) {
    for (int k : cfg.scf_grid) out.push_back({"", "", static_cast<double>(k), k});
    return out;
  }
  for (int dim : cfg.dims) {
    const auto g = cfg.scene(geometry::dimension_from_int(dim));
    for (double t : cfg.t_grid_s) {
      const auto count = scf_count_at(g, cfg.uavs, t, cfg.rounding);
      out.push_back({std::to_string(dim), format_number(t), count.expected, count.count});
    }
  }
  return out;
}

// Runs every protocol of cfg for each distinct (N_scf, F) and seed; returns
// the stats keyed by (N_scf, F, seed index, protocol).
struct SimGrid {
  std::vector<sim::Protocol> protocols;
  std::map<std::pair<int, int>, std::size_t> point_index;
  std::vector<sim::ComparisonRow> rows;
  std::size_t per_point = 0;

  const sim::SimStats& at(int scf, int freeze, std::size_t seed_index, sim::Protocol p) const {
    const std::size_t base = point_index.at({scf, freeze}) * per_point;
    const std::size_t pi = static_cast<std::size_t>(
        std::find(protocols.begin(), protocols.end(), p) - protocols.begin());
    return rows.at(base + seed_index * protocols.size() + pi).stats;
  }
};

SimGrid run_grid(const ExperimentConfig& cfg, const std::vector<std::pair<int, int>>& wanted,
                 const std::vector<sim::Protocol>& protocols, const RunOptions& opts) {
  SimGrid grid;
  grid.protocols = protocols;
  std::vector<sim::SweepPoint> points;
  for (const auto& key : wanted) {
    if (grid.point_index.count(key)) continue;
    grid.point_index[key] = points.size();
    points.push_back({key.first, key.second});
  }
  grid.per_point = cfg.seeds.size() * protocols.size();
  grid.rows = sim::compare(cfg.sim_config(), protocols, points, cfg.seeds, opts.jobs);
  return grid;
}

Cell maybe(bool present, double v) { return present ? Cell{v} : Cell{std::string()}; }

}  // namespace

CommandOutput validate_prob(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  CommandOutput out;
  out.command = "validate-prob";

  struct Task {
    int dim;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int dim : cfg.dims) {
    for (auto seed : cfg.seeds) tasks.push_back({dim, seed});
  }
  const auto kernel = simd::select_red_kernel(opts.kernel);

  struct Row {
    double d, t, t_star, closed, p_mc, se;
    bool case_one;
  };
  const auto blocks = parallel_map(tasks.size(), opts.jobs, [&](std::size_t i) {
    const auto g = cfg.scene(geometry::dimension_from_int(tasks[i].dim));
    oracle::SamplerConfig sc;
    sc.num_points = cfg.mc_samples;
    sc.seed = tasks[i].seed;
    sc.geom = g;
    const auto cloud = oracle::sample_returning_positions(sc);
    std::vector<Row> rows;
    for (double d : cfg.d_grid_km) {
      const auto uav = geometry::canonical_position(g, d);
      const double t_star = geometry::case_boundary_time(g, d);
      for (double t : cfg.t_grid_s) {
        const auto b = geometry::scf_probability(g, geometry::ScfQuery{d, t});
        const auto est = oracle::estimate_scf_probability(g, uav, t, cloud, opts.kernel);
        rows.push_back({d, t, t_star, b.probability, est.p_hat, est.std_error,
                        b.case_branch == geometry::CaseBranch::I});
      }
    }
    return rows;
  });

  Table detail{"validate_prob",
               {"dim", "d_km", "t_s", "seed", "case", "t_star_s", "p_closed", "p_mc", "stderr", "abs_err"},
               {}};
  Table summary{"validate_prob_summary",
                {"dim", "points", "samples", "max_abs_err", "max_p_closed", "max_p_mc", "frac_within_4se"},
                {}};
  std::size_t block = 0;
  for (int dim : cfg.dims) {
    std::size_t points = 0, inside = 0;
    double max_err = 0.0, max_closed = 0.0, max_mc = 0.0;
    for (auto seed : cfg.seeds) {
      for (const auto& r : blocks[block]) {
        const double err = std::abs(r.p_mc - r.closed);
        detail.add({as_int(dim), r.d, r.t, as_int(seed), std::string(r.case_one ? "I" : "II"), r.t_star,
                    r.closed, r.p_mc, r.se, err});
        ++points;
        // A zero-hit estimate has zero stderr; floor the band at one sample.
        inside += err <= 4.0 * std::max(r.se, 1.0 / static_cast<double>(cfg.mc_samples));
        max_err = std::max(max_err, err);
        max_closed = std::max(max_closed, r.closed);
        max_mc = std::max(max_mc, r.p_mc);
      }
      ++block;
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(points);
    summary.add({as_int(dim), as_int(points), as_int(cfg.mc_samples), max_err, max_closed, max_mc, frac});
    out.summary.push_back(std::to_string(dim) + "-D: " + std::to_string(points) + " points, max |closed - mc| = " +
                          format_number(max_err) + ", max p = " + format_number(max_closed));
  }
  out.summary.push_back("kernel: " + std::string(kernel.name));
  out.tables.push_back(std::move(detail));
  out.tables.push_back(std::move(summary));
  return out;
}

CommandOutput throughput(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  CommandOutput out;
  out.command = "throughput";
  const auto points = operating_points(cfg);
  const bool with_ud = has_protocol(cfg, sim::Protocol::UdMac);
  const bool with_ve = has_protocol(cfg, sim::Protocol::VeMac);

  std::vector<std::pair<int, int>> wanted;
  for (const auto& p : points) wanted.push_back({p.scf_count, cfg.sim_freeze_slots});
  const auto grid = run_grid(cfg, wanted, cfg.protocols, opts);

  const double classic = markov::throughput(cfg.backoff, markov::PopulationMix::from_counts(cfg.uavs, 0),
                                            cfg.timing, cfg.tin)
                             .throughput_bps;

  Table rows{"throughput",
             {"dim", "t_s", "n_scf_expected", "n_scf", "seed", "s_analytic_bps", "s_classic_bps",
              "s_udmac_sim_bps", "s_vemac_sim_bps", "udmac_over_vemac", "sim_vs_analytic_rel_err",
              "udmac_scf_share"},
             {}};
  Table summary{"throughput_summary",
                {"dim", "t_s", "n_scf_expected", "n_scf", "seeds", "s_analytic_bps", "s_classic_bps",
                 "s_udmac_sim_bps", "s_vemac_sim_bps", "udmac_over_vemac", "sim_vs_analytic_rel_err"},
                {}};
  double worst_err = 0.0, lo_ratio = 1e300, hi_ratio = 0.0;
  for (const auto& p : points) {
    const double analytic = markov::throughput(cfg.backoff, markov::PopulationMix::from_counts(cfg.uavs, p.scf_count),
                                               cfg.timing, cfg.tin)
                                .throughput_bps;
    std::vector<double> ud, ve;
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      double u = 0.0, v = 0.0, share = 0.0;
      if (with_ud) {
        const auto& st = grid.at(p.scf_count, cfg.sim_freeze_slots, s, sim::Protocol::UdMac);
        u = st.throughput_bps;
        share = st.scf_bit_share();
        ud.push_back(u);
      }
      if (with_ve) {
        v = grid.at(p.scf_count, cfg.sim_freeze_slots, s, sim::Protocol::VeMac).throughput_bps;
        ve.push_back(v);
      }
      rows.add({p.dim, p.t_s, p.expected, as_int(p.scf_count), as_int(cfg.seeds[s]), analytic, classic,
                maybe(with_ud, u), maybe(with_ve, v), maybe(with_ud && with_ve && v > 0, u / v),
                maybe(with_ud, std::abs(u - analytic) / analytic), maybe(with_ud, share)});
    }
    const double mu = mean(ud), mv = mean(ve);
    const double err = std::abs(mu - analytic) / analytic;
    if (with_ud) worst_err = std::max(worst_err, err);
    if (with_ud && with_ve && mv > 0) {
      lo_ratio = std::min(lo_ratio, mu / mv);
      hi_ratio = std::max(hi_ratio, mu / mv);
    }
    summary.add({p.dim, p.t_s, p.expected, as_int(p.scf_count), as_int(cfg.seeds.size()), analytic, classic,
                 maybe(with_ud, mu), maybe(with_ve, mv), maybe(with_ud && with_ve && mv > 0, mu / mv),
                 maybe(with_ud, err)});
  }
  if (with_ud) out.summary.push_back("max |sim - analytic| / analytic = " + fmt2(100 * worst_err) + "%");
  if (with_ud && with_ve) {
    out.summary.push_back("UD-MAC / VeMAC improvement: " + fmt2(100 * (lo_ratio - 1)) + "% .. " +
                          fmt2(100 * (hi_ratio - 1)) + "%");
  }
  out.tables.push_back(std::move(rows));
  out.tables.push_back(std::move(summary));
  return out;
}

CommandOutput freeze_tradeoff(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  CommandOutput out;
  out.command = "freeze-tradeoff";
  const auto points = operating_points(cfg);
  std::vector<std::pair<int, int>> wanted;
  for (const auto& p : points) {
    for (int f : cfg.freeze_grid) wanted.push_back({p.scf_count, f});
  }
  const auto grid = run_grid(cfg, wanted, {sim::Protocol::UdMac}, opts);

  Table rows{"freeze_tradeoff",
             {"dim", "t_s", "n_scf", "freeze_slots", "seed", "s_total_bps", "s_scf_bps", "s_mh_bps", "mh_share"},
             {}};
  Table summary{"freeze_tradeoff_summary",
                {"dim", "t_s", "n_scf", "freeze_slots", "seeds", "s_total_bps", "s_scf_bps", "s_mh_bps",
                 "mh_share"},
                {}};
  for (const auto& p : points) {
    for (int f : cfg.freeze_grid) {
      std::vector<double> total, scf, mh, share;
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        const auto& st = grid.at(p.scf_count, f, s, sim::Protocol::UdMac);
        total.push_back(st.throughput_bps);
        scf.push_back(st.mode(sim::Mode::Scf).throughput_bps);
        mh.push_back(st.mode(sim::Mode::Mh).throughput_bps);
        share.push_back(st.delivered_bits() > 0 ? 1.0 - st.scf_bit_share() : 0.0);
        rows.add({p.dim, p.t_s, as_int(p.scf_count), as_int(f), as_int(cfg.seeds[s]), total.back(), scf.back(),
                  mh.back(), share.back()});
      }
      summary.add({p.dim, p.t_s, as_int(p.scf_count), as_int(f), as_int(cfg.seeds.size()), mean(total), mean(scf),
                   mean(mh), mean(share)});
    }
  }
  out.summary.push_back(std::to_string(summary.rows.size()) + " (t, F) points x " +
                        std::to_string(cfg.seeds.size()) + " seeds");
  out.tables.push_back(std::move(rows));
  out.tables.push_back(std::move(summary));
  return out;
}

CommandOutput simulate(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  CommandOutput out;
  out.command = "sim";
  const auto grid = run_grid(cfg, {{cfg.sim_scf_count, cfg.sim_freeze_slots}}, cfg.protocols, opts);
  Table rows{"sim",
             {"protocol", "seed", "uavs", "n_scf", "freeze_slots", "sim_time_s", "rounds", "idle_slots",
              "scf_successes", "mh_successes", "scf_collisions", "mh_collisions", "preemptions", "blocked",
              "s_total_bps", "s_scf_bps", "s_mh_bps"},
             {}};
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    for (auto p : cfg.protocols) {
      const auto& st = grid.at(cfg.sim_scf_count, cfg.sim_freeze_slots, s, p);
      const auto& sc = st.mode(sim::Mode::Scf);
      const auto& mh = st.mode(sim::Mode::Mh);
      rows.add({std::string(sim::to_string(p)), as_int(cfg.seeds[s]), as_int(cfg.uavs), as_int(cfg.sim_scf_count),
                as_int(cfg.sim_freeze_slots), st.sim_time_s, as_int(st.rounds), as_int(st.idle_slots),
                as_int(sc.successes), as_int(mh.successes), as_int(sc.collisions), as_int(mh.collisions),
                as_int(st.preemptions), as_int(sc.blocked + mh.blocked), st.throughput_bps, sc.throughput_bps,
                mh.throughput_bps});
      out.summary.push_back(std::string(sim::to_string(p)) + " seed " + std::to_string(cfg.seeds[s]) + ": " +
                            fmt2(st.throughput_bps / 1e6) + " Mbps");
    }
  }
  out.tables.push_back(std::move(rows));
  return out;
}

CommandOutput compare(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  CommandOutput out;
  out.command = "compare";
  const auto points = operating_points(cfg);
  std::vector<std::pair<int, int>> wanted;
  for (const auto& p : points) {
    for (int f : cfg.freeze_grid) wanted.push_back({p.scf_count, f});
  }
  const auto grid = run_grid(cfg, wanted, cfg.protocols, opts);
  Table rows{"compare",
             {"dim", "t_s", "n_scf", "freeze_slots", "seed", "protocol", "s_total_bps", "s_scf_bps", "s_mh_bps",
              "scf_share", "successes", "collisions"},
             {}};
  for (const auto& p : points) {
    for (int f : cfg.freeze_grid) {
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        for (auto proto : cfg.protocols) {
          const auto& st = grid.at(p.scf_count, f, s, proto);
          const auto& sc = st.mode(sim::Mode::Scf);
          const auto& mh = st.mode(sim::Mode::Mh);
          rows.add({p.dim, p.t_s, as_int(p.scf_count), as_int(f), as_int(cfg.seeds[s]),
                    std::string(sim::to_string(proto)), st.throughput_bps, sc.throughput_bps, mh.throughput_bps,
                    st.scf_bit_share(), as_int(sc.successes + mh.successes), as_int(sc.collisions + mh.collisions)});
        }
      }
    }
  }
  out.summary.push_back(std::to_string(rows.rows.size()) + " rows");
  out.tables.push_back(std::move(rows));
  return out;
}

std::vector<std::string> command_names() {
  return {"validate-prob", "throughput", "freeze-tradeoff", "sim", "compare"};
}

CommandOutput run_command(std::string_view name, const ExperimentConfig& cfg, const RunOptions& opts) {
  if (name == "validate-prob") return validate_prob(cfg, opts);
  if (name == "throughput") return throughput(cfg, opts);
  if (name == "freeze-tradeoff") return freeze_tradeoff(cfg, opts);
  if (name == "sim") return simulate(cfg, opts);
  if (name == "compare") return compare(cfg, opts);
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string manifest_text(const CommandOutput& out, const ExperimentConfig& cfg, const RunOptions& opts) {
  std::ostringstream os;
  os << "[run]\n";
  os << "command = " << out.command << '\n';
  os << "tool = udmac " << kVersion << '\n';
  if (out.command == "validate-prob") os << "mc_kernel = " << simd::select_red_kernel(opts.kernel).name << '\n';
  os << "outputs = ";
  for (std::size_t i = 0; i < out.tables.size(); ++i) os << (i ? "," : "") << out.tables[i].name << ".csv";
  os << "\n\n" << to_ini(cfg);
  return os.str();
}

std::vector<std::filesystem::path> write_outputs(const CommandOutput& out, const ExperimentConfig& cfg,
                                                 const RunOptions& opts, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> files;
  for (const auto& t : out.tables) files.push_back(write_csv(t, dir));
  const auto manifest = dir / (out.command + ".manifest.ini");
  std::ofstream m(manifest, std::ios::binary | std::ios::trunc);
  if (!m) throw IoError("cannot open " + manifest.string() + " for writing");
  m << manifest_text(out, cfg, opts);
  m.close();
  if (!m) throw IoError("failed writing " + manifest.string());
  files.push_back(manifest);
  return files;
}

std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("UDMAC_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "results";
}

}  // namespace udmac::harness
