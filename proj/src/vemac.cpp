#include <cmath>
#include <vector>

#include "udmac/errors.hpp"
#include "udmac/mac_sim.hpp"
#include "udmac/rng.hpp"

namespace udmac::sim {

namespace {

struct Partition {
  int scf_uavs = 0;
  int mh_uavs = 0;
  int scf_slots = 0;
  int mh_slots = 0;
};

// SCF slots = ceil(L * N_scf / N); MH gets the rest of the frame.
Partition make_partition(int frame_slots, int total, int scf_uavs) {
  Partition p;
  p.scf_uavs = scf_uavs;
  p.mh_uavs = total - scf_uavs;
  p.scf_slots = static_cast<int>((static_cast<long long>(frame_slots) * scf_uavs + total - 1) / total);
  p.mh_slots = frame_slots - p.scf_slots;
  if ((p.scf_uavs > 0 && p.scf_slots == 0) || (p.mh_uavs > 0 && p.mh_slots == 0)) {
    throw ConfigError("VeMAC frame of " + std::to_string(frame_slots) +
                      " slots leaves a populated mode class without slots");
  }
  return p;
}

double expected_class_successes(int claimants, int slots) {
  if (claimants == 0) return 0.0;
  return claimants * std::pow(1.0 - 1.0 / slots, claimants - 1);
}

}  // namespace

double vemac_expected_successes_per_frame(const SimConfig& cfg) {
  cfg.validate();
  const auto p = make_partition(cfg.vemac_frame_slots, cfg.population.total, cfg.population.scf_count);
  return expected_class_successes(p.scf_uavs, p.scf_slots) +
         expected_class_successes(p.mh_uavs, p.mh_slots);
}

SimStats run_vemac(const SimConfig& cfg) {
  if (cfg.protocol != Protocol::VeMac) throw ConfigError("run_vemac called with a non-VeMAC config");
  cfg.validate();
  Rng rng(cfg.seed, "vemac");

  const auto& pop = cfg.population;
  int scf_uavs = pop.scf_count;
  if (cfg.mode_assignment == ModeAssignment::Bernoulli) {
    scf_uavs = 0;
    for (int i = 0; i < pop.total; ++i) scf_uavs += rng.bernoulli(pop.p_scf) ? 1 : 0;
  }
  const Partition part = make_partition(cfg.vemac_frame_slots, pop.total, scf_uavs);
  const int frame = cfg.vemac_frame_slots;
  const double slot_s = cfg.vemac_slot_duration_us() * 1e-6;

  SimStats stats;
  std::vector<int> claims(frame);
  double now = 0.0;
  while (now < cfg.duration_s) {
    std::fill(claims.begin(), claims.end(), 0);
    for (int i = 0; i < part.scf_uavs; ++i) ++claims[rng.below(part.scf_slots)];
    for (int i = 0; i < part.mh_uavs; ++i) ++claims[part.scf_slots + rng.below(part.mh_slots)];
    for (int s = 0; s < frame; ++s) {
      auto& ms = stats.mode(s < part.scf_slots ? Mode::Scf : Mode::Mh);
      ms.rts_sent += claims[s];
      ++stats.rounds;
      if (claims[s] == 0) {
        ++stats.idle_slots;
        stats.idle_time_s += slot_s;
      } else if (claims[s] == 1) {
        ++ms.successes;
        ms.delivered_bits += cfg.tin.payload_bits;
        stats.success_time_s += slot_s;
      } else {
        ++ms.collisions;
        stats.collision_time_s += slot_s;
      }
      now += slot_s;
    }
  }

  stats.sim_time_s = now;
  for (auto& ms : stats.per_mode) ms.throughput_bps = ms.delivered_bits / now;
  stats.throughput_bps = stats.delivered_bits() / now;
  return stats;
}

}  // namespace udmac::sim
