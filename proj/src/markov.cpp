#include "udmac/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "udmac/errors.hpp"

namespace udmac::markov {

namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << name << " must lie in [0, 1], got " << p;
    throw DomainError(os.str());
  }
}

void require_collision_prob(double pc) {
  if (!(pc >= 0.0 && pc < 1.0)) {
    std::ostringstream os;
    os << "collision probability must lie in [0, 1), got " << pc;
    throw DomainError(os.str());
  }
}

// Closed form on the closed interval pc in [0, 1]; the solver probes pc = 1.
double tau_closed_form(double pc, const BackoffParams& bp, double p_scf) {
  const double w = bp.min_window;
  const double php = bp.p_has_packet;
  double denom = w + 1.0;
  if (bp.max_stage == 0) {
    denom += 2.0 * p_scf;
  } else {
    // sum_{j<m} (2pc)^j replaces (1 - (2pc)^m) / (1 - 2pc).
    double series = 0.0;
    double term = 1.0;
    for (int j = 0; j < bp.max_stage; ++j) {
      series += term;
      term *= 2.0 * pc;
    }
    denom += pc * w * series + 2.0 * (1.0 - pc) * p_scf;
  }
  return 2.0 * (2.0 * php - 1.0) / (php * denom);
}

}  // namespace

void BackoffParams::validate() const {
  if (min_window < 1) throw ConfigError("minimum contention window W must be >= 1");
  if (max_stage < 0) throw ConfigError("maximum backoff stage m must be >= 0");
  if (max_stage > 30) throw ConfigError("maximum backoff stage m must be <= 30");
  if (!(p_has_packet > 0.5 && p_has_packet <= 1.0)) {
    throw DomainError("P_hp must lie in (1/2, 1]; the idle-state normalization is "
                      "non-positive below 1/2");
  }
}

int BackoffParams::window(int stage) const { return min_window << std::clamp(stage, 0, max_stage); }

void PopulationMix::validate() const {
  if (total < 1) throw ConfigError("population N must be >= 1");
  if (scf_count < 0 || scf_count > total) throw ConfigError("N_scf must satisfy 0 <= N_scf <= N");
  require_probability(p_scf, "P_scf");
}

PopulationMix PopulationMix::from_counts(int total, int scf_count) {
  PopulationMix mix;
  mix.total = total;
  mix.scf_count = scf_count;
  mix.p_scf = total > 0 ? static_cast<double>(scf_count) / total : 0.0;
  mix.validate();
  return mix;
}

double StationaryDistribution::total() const {
  double sum = idle + semi_active;
  for (const auto& stage : backoff) sum = std::accumulate(stage.begin(), stage.end(), sum);
  return sum;
}

double StationaryDistribution::transmit_probability() const {
  double sum = 0.0;
  for (const auto& stage : backoff) sum += stage.front();
  return sum;
}

StationaryDistribution stationary_distribution(double pc, const BackoffParams& bp, double p_scf) {
  bp.validate();
  require_collision_prob(pc);
  require_probability(p_scf, "P_scf");
  const int m = bp.max_stage;

  // Stage heads b_{i,0} relative to b00.
  std::vector<double> head(m + 1);
  head[0] = 1.0;
  for (int i = 1; i < m; ++i) head[i] = head[i - 1] * pc;
  if (m >= 1) head[m] = std::pow(pc, m) / (1.0 - pc);
  const double head_sum = std::accumulate(head.begin(), head.end(), 0.0);

  StationaryDistribution dist;
  dist.backoff.resize(m + 1);
  double relative_total = p_scf;
  for (int i = 0; i <= m; ++i) {
    double inflow = 0.0;
    if (m == 0) {
      inflow = head[0];
    } else if (i == 0) {
      inflow = (1.0 - pc) * head_sum;
    } else if (i < m) {
      inflow = pc * head[i - 1];
    } else {
      inflow = pc * (head[m - 1] + head[m]);
    }
    const int wi = bp.window(i);
    auto& stage = dist.backoff[i];
    stage.resize(wi);
    for (int k = 0; k < wi; ++k) {
      stage[k] = static_cast<double>(wi - k) / wi * inflow;
      relative_total += stage[k];
    }
  }

  dist.idle = (1.0 - bp.p_has_packet) / bp.p_has_packet;
  dist.b00 = (1.0 - dist.idle) / relative_total;
  for (auto& stage : dist.backoff) {
    for (double& b : stage) b *= dist.b00;
  }
  dist.semi_active = p_scf * dist.b00;
  return dist;
}

double tau_from_pc(double pc, const BackoffParams& bp, double p_scf) {
  bp.validate();
  require_collision_prob(pc);
  require_probability(p_scf, "P_scf");
  return tau_closed_form(pc, bp, p_scf);
}

ClassSolution solve_scf_class(const BackoffParams& bp, const PopulationMix& mix,
                              const SolverOptions& options) {
  bp.validate();
  mix.validate();
  ClassSolution out;
  const int n = mix.scf_count;
  if (n == 0) {
    out.empty = true;
    return out;
  }
  auto map = [&](double tau) {
    const double pc = 1.0 - std::pow(1.0 - tau, n - 1);
    return tau_closed_form(pc, bp, 1.0);
  };
  const auto fp = solve_unit_fixed_point(map, options, "SCF class (tau_scf, P_c1)");
  out.tau = fp.value;
  out.collision_prob = 1.0 - std::pow(1.0 - out.tau, n - 1);
  out.residual = fp.residual;
  return out;
}

ClassSolution solve_mh_class(const BackoffParams& bp, const PopulationMix& mix, double tau_scf,
                             const SolverOptions& options) {
  bp.validate();
  mix.validate();
  require_probability(tau_scf, "tau_scf");
  ClassSolution out;
  const int n_mh = mix.mh_count();
  if (n_mh == 0) {
    out.empty = true;
    return out;
  }
  const double scf_silent = std::pow(1.0 - tau_scf, mix.scf_count);
  auto collision = [&](double tau) {
    if (n_mh == 1) return 0.0;
    return scf_silent * (1.0 - std::pow(1.0 - tau, n_mh - 1));
  };
  auto map = [&](double tau) { return tau_closed_form(collision(tau), bp, 0.0); };
  const auto fp = solve_unit_fixed_point(map, options, "MH class (tau_mh, P_c2)");
  out.tau = fp.value;
  out.collision_prob = collision(out.tau);
  out.residual = fp.residual;
  return out;
}

FixedPointSolution solve_fixed_point(const BackoffParams& bp, const PopulationMix& mix,
                                     const SolverOptions& options) {
  const ClassSolution scf = solve_scf_class(bp, mix, options);
  const ClassSolution mh = solve_mh_class(bp, mix, scf.tau, options);
  FixedPointSolution out;
  out.tau_scf = scf.tau;
  out.p_c1 = scf.collision_prob;
  out.scf_empty = scf.empty;
  out.tau_mh = mh.tau;
  out.p_c2 = mh.collision_prob;
  out.mh_empty = mh.empty;
  out.residual = std::max(scf.residual, mh.residual);
  return out;
}

void TimingParams::validate() const {
  const double all[] = {rts_us, cts_us, rcts_us, sifs_us, difs_us, slot_us};
  for (double v : all) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("control timings must be positive");
  }
  if (!(difs_us > sifs_us)) throw ConfigError("SCF priority requires DIFS > SIFS");
}

double TimingParams::success_time_us() const {
  return rts_us + sifs_us + cts_us + sifs_us + rcts_us + difs_us;
}

double TimingParams::collision_time_us() const { return rts_us + difs_us; }

void ThroughputInputs::validate() const {
  if (!(payload_bits > 0.0)) throw ConfigError("payload E[P] must be positive");
  if (channels < 1) throw ConfigError("number of data channels M must be >= 1");
  if (!(rate_bps > 0.0)) throw ConfigError("data rate r_tr must be positive");
}

double payload_bound_bits(const TimingParams& timing, const ThroughputInputs& tin) {
  return timing.success_time_us() * 1e-6 * tin.channels * tin.rate_bps;
}

void check_admissible(const TimingParams& timing, const ThroughputInputs& tin) {
  timing.validate();
  tin.validate();
  const double bound = payload_bound_bits(timing, tin);
  if (tin.payload_bits > bound) throw AdmissibilityError(tin.payload_bits, bound);
}

ThroughputReport throughput(const BackoffParams& bp, const PopulationMix& mix,
                            const TimingParams& timing, const ThroughputInputs& tin,
                            const SolverOptions& options) {
  check_admissible(timing, tin);
  ThroughputReport out;
  out.fixed_point = solve_fixed_point(bp, mix, options);
  const auto& fp = out.fixed_point;
  const int n_scf = mix.scf_count;
  const int n_mh = mix.mh_count();

  const double scf_silent = std::pow(1.0 - fp.tau_scf, n_scf);
  const double mh_silent = std::pow(1.0 - fp.tau_mh, n_mh);
  out.p_tr = 1.0 - scf_silent * mh_silent;
  out.scf_success = n_scf > 0 ? n_scf * fp.tau_scf * std::pow(1.0 - fp.tau_scf, n_scf - 1) : 0.0;
  out.mh_success =
      n_mh > 0 ? n_mh * fp.tau_mh * scf_silent * std::pow(1.0 - fp.tau_mh, n_mh - 1) : 0.0;
  const double success = out.scf_success + out.mh_success;
  out.p_s = out.p_tr > 0.0 ? success / out.p_tr : 0.0;

  const double sigma = timing.slot_us * 1e-6;
  const double ts = timing.success_time_us() * 1e-6;
  const double tc = timing.collision_time_us() * 1e-6;
  out.expected_slot_s = (1.0 - out.p_tr) * sigma + success * ts + (out.p_tr - success) * tc;
  out.throughput_bps = success * tin.payload_bits / out.expected_slot_s;
  out.scf_throughput_bps = out.scf_success * tin.payload_bits / out.expected_slot_s;
  out.mh_throughput_bps = out.mh_success * tin.payload_bits / out.expected_slot_s;
  return out;
}

ScfCount nscf_from_positions(const geometry::SceneGeometry& geom,
                             std::span<const geometry::Vec3> positions, double wait_s,
                             Rounding rounding) {
  ScfCount out;
  for (const auto& pos : positions) out.expected += geometry::scf_probability(geom, pos)(wait_s);
  switch (rounding) {
    case Rounding::Floor: out.count = static_cast<int>(std::floor(out.expected)); break;
    case Rounding::Round: out.count = static_cast<int>(std::lround(out.expected)); break;
    case Rounding::Ceil: out.count = static_cast<int>(std::ceil(out.expected)); break;
  }
  return out;
}

}  // namespace udmac::markov
