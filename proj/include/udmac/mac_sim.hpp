#pragma once

// Seeded simulator of control-channel contention under UD-MAC (SIFS/DIFS
// priority, binary exponential backoff, post-SCF freezing, multi-channel
// data plane) and a VeMAC-style partitioned slotted baseline.
//
// UD-MAC advances in contention rounds. Every round opens with an idle
// sensing window (one empty slot sigma, or the DIFS that closes the previous
// busy period) in which each waiting backoff counter steps down once; then
//   - active UAVs whose counter is 0 send an RTS, SCF after SIFS first;
//     MH RTSs are only sent when no SCF UAV transmits, otherwise the MH
//     UAVs are preempted and redraw a stage-0 counter;
//   - no RTS: the round is an empty slot (sigma);
//   - one RTS: RTS/CTS/RCTS handshake (T_s) and a data-channel reservation
//     for E[P]/r_tr seconds;
//   - several RTSs: collision (T_c), senders move up one backoff stage.
// An SCF UAV that succeeds goes semi-active for F empty slots and then
// rejoins contention at stage 0.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "udmac/markov.hpp"

namespace udmac::sim {

enum class Protocol { UdMac, VeMac };
enum class ModeAssignment { FixedSplit, Bernoulli };
enum class ChannelPolicy { Shared, Partitioned };
enum class Mode { Scf = 0, Mh = 1 };
enum class Lifecycle { Idle, Active, SemiActive };

std::string_view to_string(Protocol p);
std::string_view to_string(Mode m);
Protocol protocol_from_string(std::string_view s);

struct SimConfig {
  markov::PopulationMix population;
  markov::BackoffParams backoff;
  markov::TimingParams timing;
  markov::ThroughputInputs tin;
  int freeze_slots = 0;  // F, counted in empty slots
  ModeAssignment mode_assignment = ModeAssignment::FixedSplit;
  double duration_s = 1.0;
  std::uint64_t seed = 1;
  Protocol protocol = Protocol::UdMac;
  int vemac_frame_slots = 100;  // L
  std::optional<double> vemac_slot_us;  // defaults to T_s
  ChannelPolicy channel_policy = ChannelPolicy::Shared;
  int a2a_channels = 6;  // Partitioned only; A2G gets the remaining M - a2a

  void validate() const;
  double vemac_slot_duration_us() const;
};

struct UavState {
  int id = 0;
  Mode mode = Mode::Mh;
  Lifecycle lifecycle = Lifecycle::Active;
  int backoff_stage = 0;
  int backoff_counter = 0;
  int freeze_remaining = 0;
};

struct ModeStats {
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;  // collision rounds (slots, for VeMAC)
  std::uint64_t rts_sent = 0;
  std::uint64_t blocked = 0;  // handshakes that found no free data channel
  double delivered_bits = 0.0;
  double throughput_bps = 0.0;

  bool operator==(const ModeStats&) const = default;
};

struct SimStats {
  double sim_time_s = 0.0;
  double idle_time_s = 0.0;
  double success_time_s = 0.0;
  double collision_time_s = 0.0;
  std::uint64_t rounds = 0;
  std::uint64_t idle_slots = 0;
  std::uint64_t preemptions = 0;
  std::array<ModeStats, 2> per_mode{};
  double throughput_bps = 0.0;

  const ModeStats& mode(Mode m) const { return per_mode[static_cast<int>(m)]; }
  ModeStats& mode(Mode m) { return per_mode[static_cast<int>(m)]; }
  double busy_time_s() const { return success_time_s + collision_time_s; }
  double delivered_bits() const;
  // Share of delivered bits carried in SCF mode; 0 when nothing was delivered.
  double scf_bit_share() const;

  bool operator==(const SimStats&) const = default;
};

enum class RoundOutcome { Idle, Success, Collision };

struct RoundRecord {
  std::uint64_t index = 0;
  double start_s = 0.0;
  std::vector<int> scf_senders;
  std::vector<int> mh_senders;
  std::vector<int> preempted;
  RoundOutcome outcome = RoundOutcome::Idle;
};

// Hooks for tests and tracing; the default implementations do nothing.
class SimObserver {
 public:
  virtual ~SimObserver() = default;
  // `states` is the population as it stood when the round started.
  virtual void on_round(const RoundRecord& round, std::span<const UavState> states);
  virtual void on_backoff_draw(int uav, int stage, int counter, int window);
};

SimStats run_udmac(const SimConfig& cfg, SimObserver* observer = nullptr);
SimStats run_vemac(const SimConfig& cfg);
SimStats run(const SimConfig& cfg);

// Expected successes per VeMAC frame: n (1 - 1/L)^(n-1) per class partition.
double vemac_expected_successes_per_frame(const SimConfig& cfg);

struct SweepPoint {
  int scf_count = 0;
  int freeze_slots = 0;
};

struct ComparisonRow {
  SweepPoint point;
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::UdMac;
  SimStats stats;
};

// Runs every protocol at every (point, seed) with the same seed and
// population for all protocols. Rows are ordered point-major, then seed,
// then protocol, independent of `jobs`.
std::vector<ComparisonRow> compare(const SimConfig& base, std::span<const Protocol> protocols,
                                   std::span<const SweepPoint> points,
                                   std::span<const std::uint64_t> seeds, int jobs = 1);

}  // namespace udmac::sim
