#include "udmac/mac_sim.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "udmac/errors.hpp"
#include "udmac/rng.hpp"

namespace udmac::sim {

namespace {

constexpr int kScf = static_cast<int>(Mode::Scf);
constexpr int kMh = static_cast<int>(Mode::Mh);

// Data channels of one pool; each busy channel is represented by the time it
// becomes free again.
class ChannelPool {
 public:
  explicit ChannelPool(int capacity) : capacity_(capacity) {}

  bool reserve(double now, double hold_s) {
    while (!busy_until_.empty() && busy_until_.top() <= now) busy_until_.pop();
    if (static_cast<int>(busy_until_.size()) >= capacity_) return false;
    busy_until_.push(now + hold_s);
    return true;
  }

 private:
  int capacity_;
  std::priority_queue<double, std::vector<double>, std::greater<>> busy_until_;
};

class UdMacRun {
 public:
  UdMacRun(const SimConfig& cfg, SimObserver* observer)
      : cfg_(cfg), observer_(observer), rng_(cfg.seed, "udmac") {
    const int m = cfg.tin.channels;
    if (cfg.channel_policy == ChannelPolicy::Shared) {
      pools_.emplace_back(m);
    } else {
      pools_.emplace_back(m - cfg.a2a_channels);  // A2G: SCF deliveries
      pools_.emplace_back(cfg.a2a_channels);      // A2A: MH forwards
    }
    init_population();
  }

  SimStats run() {
    const double sigma = cfg_.timing.slot_us * 1e-6;
    const double ts = cfg_.timing.success_time_us() * 1e-6;
    const double tc = cfg_.timing.collision_time_us() * 1e-6;
    const double data_start = (cfg_.timing.success_time_us() - cfg_.timing.difs_us) * 1e-6;
    const double hold = cfg_.tin.transfer_time_s();

    std::vector<int> ready_scf;
    std::vector<int> ready_mh;
    while (now_ < cfg_.duration_s) {
      ready_scf.clear();
      ready_mh.clear();
      for (const auto& u : uavs_) {
        if (u.lifecycle != Lifecycle::Active || u.backoff_counter != 0) continue;
        (u.mode == Mode::Scf ? ready_scf : ready_mh).push_back(u.id);
      }
      const bool scf_wins = !ready_scf.empty();
      const std::vector<int>& senders = scf_wins ? ready_scf : ready_mh;

      if (observer_ != nullptr) {
        RoundRecord rec;
        rec.index = stats_.rounds;
        rec.start_s = now_;
        rec.scf_senders = ready_scf;
        if (scf_wins) {
          rec.preempted = ready_mh;
        } else {
          rec.mh_senders = ready_mh;
        }
        rec.outcome = senders.empty()       ? RoundOutcome::Idle
                      : senders.size() == 1 ? RoundOutcome::Success
                                            : RoundOutcome::Collision;
        observer_->on_round(rec, uavs_);
      }

      for (auto& u : uavs_) {
        if (u.lifecycle == Lifecycle::Active && u.backoff_counter > 0) --u.backoff_counter;
      }
      ++stats_.rounds;

      if (senders.empty()) {
        now_ += sigma;
        stats_.idle_time_s += sigma;
        ++stats_.idle_slots;
        tick_freezes();
        continue;
      }

      const int mode = scf_wins ? kScf : kMh;
      stats_.per_mode[mode].rts_sent += senders.size();
      if (scf_wins) {
        for (int id : ready_mh) {
          ++stats_.preemptions;
          restart(uavs_[id]);
        }
      }

      if (senders.size() == 1) {
        auto& u = uavs_[senders.front()];
        auto& ms = stats_.per_mode[mode];
        ++ms.successes;
        if (pool_for(u.mode).reserve(now_ + data_start, hold)) {
          ms.delivered_bits += cfg_.tin.payload_bits;
        } else {
          ++ms.blocked;
        }
        now_ += ts;
        stats_.success_time_s += ts;
        if (u.mode == Mode::Scf && cfg_.freeze_slots > 0) {
          u.lifecycle = Lifecycle::SemiActive;
          u.backoff_stage = 0;
          u.freeze_remaining = cfg_.freeze_slots;
        } else {
          if (u.mode == Mode::Scf) reassign_mode(u);
          restart(u);
        }
      } else {
        ++stats_.per_mode[mode].collisions;
        now_ += tc;
        stats_.collision_time_s += tc;
        for (int id : senders) {
          auto& u = uavs_[id];
          u.backoff_stage = std::min(u.backoff_stage + 1, cfg_.backoff.max_stage);
          draw_counter(u);
        }
      }
    }

    stats_.sim_time_s = now_;
    for (auto& ms : stats_.per_mode) ms.throughput_bps = ms.delivered_bits / now_;
    stats_.throughput_bps = stats_.delivered_bits() / now_;
    return stats_;
  }

 private:
  void init_population() {
    const auto& pop = cfg_.population;
    uavs_.resize(pop.total);
    for (int i = 0; i < pop.total; ++i) {
      auto& u = uavs_[i];
      u.id = i;
      if (cfg_.mode_assignment == ModeAssignment::FixedSplit) {
        u.mode = i < pop.scf_count ? Mode::Scf : Mode::Mh;
      } else {
        u.mode = rng_.bernoulli(pop.p_scf) ? Mode::Scf : Mode::Mh;
      }
      restart(u);
    }
  }

  ChannelPool& pool_for(Mode mode) {
    if (pools_.size() == 1) return pools_.front();
    return mode == Mode::Scf ? pools_[0] : pools_[1];
  }

  void draw_counter(UavState& u) {
    const int window = cfg_.backoff.window(u.backoff_stage);
    u.backoff_counter = static_cast<int>(rng_.below(static_cast<std::uint64_t>(window)));
    if (observer_ != nullptr) observer_->on_backoff_draw(u.id, u.backoff_stage, u.backoff_counter, window);
  }

  void restart(UavState& u) {
    u.lifecycle = Lifecycle::Active;
    u.backoff_stage = 0;
    u.freeze_remaining = 0;
    draw_counter(u);
  }

  void reassign_mode(UavState& u) {
    if (cfg_.mode_assignment == ModeAssignment::Bernoulli) {
      u.mode = rng_.bernoulli(cfg_.population.p_scf) ? Mode::Scf : Mode::Mh;
    }
  }

  void tick_freezes() {
    for (auto& u : uavs_) {
      if (u.lifecycle != Lifecycle::SemiActive) continue;
      if (--u.freeze_remaining <= 0) {
        reassign_mode(u);
        restart(u);
      }
    }
  }

  const SimConfig& cfg_;
  SimObserver* observer_;
  Rng rng_;
  std::vector<UavState> uavs_;
  std::vector<ChannelPool> pools_;
  SimStats stats_;
  double now_ = 0.0;
};

}  // namespace

std::string_view to_string(Protocol p) { return p == Protocol::UdMac ? "udmac" : "vemac"; }

std::string_view to_string(Mode m) { return m == Mode::Scf ? "scf" : "mh"; }

Protocol protocol_from_string(std::string_view s) {
  if (s == "udmac" || s == "UD-MAC" || s == "ud-mac") return Protocol::UdMac;
  if (s == "vemac" || s == "VeMAC") return Protocol::VeMac;
  throw ConfigError("unknown protocol '" + std::string(s) + "' (expected udmac or vemac)");
}

void SimConfig::validate() const {
  population.validate();
  backoff.validate();
  timing.validate();
  tin.validate();
  if (backoff.p_has_packet != 1.0) {
    throw ConfigError("the simulator models saturation only (P_hp must be 1)");
  }
  if (!(duration_s > 0.0)) throw ConfigError("simulation duration must be > 0");
  if (freeze_slots < 0) throw ConfigError("freeze length F must be >= 0");
  if (vemac_frame_slots < 1) throw ConfigError("VeMAC frame length L must be >= 1");
  if (vemac_slot_us && !(*vemac_slot_us > 0.0)) throw ConfigError("VeMAC slot duration must be > 0");
  if (channel_policy == ChannelPolicy::Partitioned &&
      (a2a_channels < 1 || a2a_channels >= tin.channels)) {
    throw ConfigError("partitioned data plane needs 1 <= a2a_channels < M");
  }
}

double SimConfig::vemac_slot_duration_us() const {
  return vemac_slot_us.value_or(timing.success_time_us());
}

double SimStats::delivered_bits() const {
  return per_mode[kScf].delivered_bits + per_mode[kMh].delivered_bits;
}

double SimStats::scf_bit_share() const {
  const double total = delivered_bits();
  return total > 0.0 ? per_mode[kScf].delivered_bits / total : 0.0;
}

void SimObserver::on_round(const RoundRecord&, std::span<const UavState>) {}

void SimObserver::on_backoff_draw(int, int, int, int) {}

SimStats run_udmac(const SimConfig& cfg, SimObserver* observer) {
  if (cfg.protocol != Protocol::UdMac) throw ConfigError("run_udmac called with a non-UD-MAC config");
  cfg.validate();
  return UdMacRun(cfg, observer).run();
}

SimStats run(const SimConfig& cfg) {
  return cfg.protocol == Protocol::UdMac ? run_udmac(cfg) : run_vemac(cfg);
}

}  // namespace udmac::sim
