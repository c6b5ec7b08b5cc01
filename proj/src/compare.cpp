#include "udmac/errors.hpp"
#include "udmac/mac_sim.hpp"
#include "udmac/parallel.hpp"

namespace udmac::sim {

std::vector<ComparisonRow> compare(const SimConfig& base, std::span<const Protocol> protocols,
                                   std::span<const SweepPoint> points,
                                   std::span<const std::uint64_t> seeds, int jobs) {
  if (protocols.empty() || points.empty() || seeds.empty()) {
    throw ConfigError("comparison needs at least one protocol, sweep point and seed");
  }
  const std::size_t per_point = seeds.size() * protocols.size();
  return parallel_map(points.size() * per_point, jobs, [&](std::size_t i) {
    const SweepPoint& point = points[i / per_point];
    const std::uint64_t seed = seeds[(i % per_point) / protocols.size()];
    const Protocol protocol = protocols[i % protocols.size()];
    SimConfig cfg = base;
    cfg.population = markov::PopulationMix::from_counts(base.population.total, point.scf_count);
    cfg.freeze_slots = point.freeze_slots;
    cfg.seed = seed;
    cfg.protocol = protocol;
    return ComparisonRow{point, seed, protocol, run(cfg)};
  });
}

}  // namespace udmac::sim
