#pragma once

// Two-class (SCF-priority / MH) saturation throughput model built on the
// bidimensional backoff Markov chain, extended with the idle and semi-active
// states.

#include <span>
#include <vector>

#include "udmac/fixed_point.hpp"
#include "udmac/geometry.hpp"

namespace udmac::markov {

struct BackoffParams {
  int min_window = 64;  // W = CW_min + 1
  int max_stage = 4;    // m; W_i = 2^i W
  double p_has_packet = 1.0;

  void validate() const;
  int window(int stage) const;
};

struct PopulationMix {
  int total = 100;     // N
  int scf_count = 0;   // N_scf
  double p_scf = 0.0;  // P_scf; P_mh = 1 - P_scf

  double p_mh() const { return 1.0 - p_scf; }
  int mh_count() const { return total - scf_count; }
  void validate() const;

  // Mix with P_scf = N_scf / N.
  static PopulationMix from_counts(int total, int scf_count);
};

struct StationaryDistribution {
  double b00 = 0.0;
  std::vector<std::vector<double>> backoff;  // backoff[i][k] = b_{i,k}
  double idle = 0.0;
  double semi_active = 0.0;

  double total() const;
  double transmit_probability() const;  // sum_i b_{i,0}
};

// Builds b_{i,k} from the one-step transfer structure with b00 fixed by the
// normalization condition. Throws DomainError for pc outside [0, 1) or
// P_hp <= 1/2 (the printed idle term makes b00 non-positive there).
StationaryDistribution stationary_distribution(double pc, const BackoffParams& bp, double p_scf);

// tau as a function of the conditional collision probability, in the
// (1 - 2pc)-cancelled geometric-series form, finite at pc = 1/2.
double tau_from_pc(double pc, const BackoffParams& bp, double p_scf);

struct ClassSolution {
  double tau = 0.0;
  double collision_prob = 0.0;
  double residual = 0.0;
  bool empty = false;  // no contenders in this class
};

// tau_scf = tau(P_c1; P_scf = 1), P_c1 = 1 - (1 - tau_scf)^(N_scf - 1).
ClassSolution solve_scf_class(const BackoffParams& bp, const PopulationMix& mix,
                              const SolverOptions& options = {});

// tau_mh = tau(P_c2; P_scf = 0),
// P_c2 = (1 - tau_scf)^N_scf [1 - (1 - tau_mh)^(N - N_scf - 1)].
ClassSolution solve_mh_class(const BackoffParams& bp, const PopulationMix& mix, double tau_scf,
                             const SolverOptions& options = {});

struct FixedPointSolution {
  double tau_scf = 0.0;
  double tau_mh = 0.0;
  double p_c1 = 0.0;
  double p_c2 = 0.0;
  double residual = 0.0;
  bool scf_empty = false;
  bool mh_empty = false;
};

FixedPointSolution solve_fixed_point(const BackoffParams& bp, const PopulationMix& mix,
                                     const SolverOptions& options = {});

// Control-channel timing in microseconds.
struct TimingParams {
  double rts_us = 4.5;
  double cts_us = 3.2;
  double rcts_us = 3.2;
  double sifs_us = 10.0;
  double difs_us = 28.0;
  double slot_us = 9.0;  // sigma

  void validate() const;
  double success_time_us() const;    // RTS + SIFS + CTS + SIFS + RCTS + DIFS
  double collision_time_us() const;  // RTS + DIFS
};

struct ThroughputInputs {
  double payload_bits = 27000.0;  // E[P]
  int channels = 13;              // M
  double rate_bps = 36e6;         // r_tr

  void validate() const;
  double transfer_time_s() const { return payload_bits / rate_bps; }
};

// T_s * M * r_tr, the largest payload the data plane absorbs without queueing.
double payload_bound_bits(const TimingParams& timing, const ThroughputInputs& tin);

// Throws AdmissibilityError when E[P] > T_s * M * r_tr.
void check_admissible(const TimingParams& timing, const ThroughputInputs& tin);

struct ThroughputReport {
  FixedPointSolution fixed_point;
  double p_tr = 0.0;
  double p_s = 0.0;
  double scf_success = 0.0;  // per-slot probability of a lone SCF RTS
  double mh_success = 0.0;   // per-slot probability of a lone MH RTS and no SCF RTS
  double expected_slot_s = 0.0;
  double throughput_bps = 0.0;
  double scf_throughput_bps = 0.0;
  double mh_throughput_bps = 0.0;
};

ThroughputReport throughput(const BackoffParams& bp, const PopulationMix& mix,
                            const TimingParams& timing, const ThroughputInputs& tin,
                            const SolverOptions& options = {});

enum class Rounding { Floor, Round, Ceil };

struct ScfCount {
  double expected = 0.0;  // sum of p_t over positions
  int count = 0;          // quantized
};

ScfCount nscf_from_positions(const geometry::SceneGeometry& geom,
                             std::span<const geometry::Vec3> positions, double wait_s,
                             Rounding rounding = Rounding::Floor);

}  // namespace udmac::markov
