#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace udmac {

// Seed derivation: every independent stream (a Monte Carlo dimension, a
// simulation run, a protocol within a run) gets
//
//   stream_seed = splitmix64(base_seed ^ fnv1a64(tag))
//
// and its own std::mt19937_64. The engine is fully specified by the standard,
// and the conversions below avoid std::*_distribution (whose output is
// implementation-defined), so fixtures reproduce across toolchains.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view tag);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t base_seed, std::string_view tag)
      : engine_(derive_seed(base_seed, tag)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer on [0, bound), bound >= 1. Lemire's multiply-shift with
  // rejection, so the result is unbiased.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace udmac
