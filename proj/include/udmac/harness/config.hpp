#pragma once

// Experiment configuration: every knob of a harness run, loadable from an
// INI-style file ([section] key = value), overridable per key, and printable
// back in canonical form for the run manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udmac/geometry.hpp"
#include "udmac/mac_sim.hpp"
#include "udmac/markov.hpp"

namespace udmac::harness {

struct ExperimentConfig {
  // [scene]
  double scene_radius_km = 5.0;
  double comm_range_km = 0.1;
  double height_km = 0.05;
  double speed_kmh = 18.0;

  // [mac]
  int uavs = 100;
  markov::BackoffParams backoff;
  markov::Rounding rounding = markov::Rounding::Floor;
  sim::ModeAssignment mode_assignment = sim::ModeAssignment::FixedSplit;

  // [timing], [data]
  markov::TimingParams timing;
  markov::ThroughputInputs tin;
  sim::ChannelPolicy channel_policy = sim::ChannelPolicy::Shared;
  int a2a_channels = 6;

  // [vemac]
  int vemac_frame_slots = 100;
  std::optional<double> vemac_slot_us;  // unset: T_s

  // [sim]
  double sim_duration_s = 1.0;
  int sim_scf_count = 0;
  int sim_freeze_slots = 0;

  // [sweep]
  std::vector<int> dims{1, 2, 3};
  std::vector<double> d_grid_km;
  std::vector<double> t_grid_s;
  std::vector<int> freeze_grid;
  std::vector<int> scf_grid;  // explicit N_scf sweep; empty: derive from t
  std::vector<std::uint64_t> seeds;
  std::size_t mc_samples = 100000;
  std::vector<sim::Protocol> protocols{sim::Protocol::UdMac, sim::Protocol::VeMac};

  geometry::SceneGeometry scene(geometry::Dimension dim) const;
  sim::SimConfig sim_config() const;  // population N, N_scf = sim_scf_count

  // Throws ConfigError naming the offending key.
  void validate() const;
};

std::vector<std::string> preset_names();
ExperimentConfig preset(std::string_view name);

// Applies every key of an INI file on top of `cfg`. Unknown sections or keys
// are errors.
void apply_ini(ExperimentConfig& cfg, std::istream& in, const std::string& source);
void apply_ini_file(ExperimentConfig& cfg, const std::filesystem::path& path);

// "section.key=value".
void apply_override(ExperimentConfig& cfg, std::string_view assignment);
void set_value(ExperimentConfig& cfg, std::string_view section, std::string_view key,
               std::string_view value);

// Canonical INI text of every key, in a fixed order.
std::string to_ini(const ExperimentConfig& cfg);

}  // namespace udmac::harness
