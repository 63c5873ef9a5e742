#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "core/model.hpp"

namespace rachload {

/// Base seed of a simulation. Every (trial, slot) pair gets its own generator
/// seeded with splitmix64(splitmix64(splitmix64(base) ^ trial) ^ slot), so
/// results never depend on how trials are scheduled across threads.
struct SimulationSeed {
  std::uint64_t base_seed = 0;

  std::uint64_t derive(std::uint64_t trial, std::uint64_t slot) const noexcept;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Generator for one (trial, slot) substream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) from the top 53 bits.
  double next_unit() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over RB indices.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> p);

  std::size_t sample(RngStream& rng) const noexcept;

 private:
  std::vector<double> cumulative_;
  std::size_t last_positive_ = 0;
};

AccessPattern sample_pattern(LoadHypothesis hyp, const SelectionProfile& profile, RngStream& rng);

/// T i.i.d. slots for one trial, slot t drawn from seed.derive(trial, t).
ObservationSet sample_observations(LoadHypothesis hyp, const SelectionProfile& profile, int t,
                                   SimulationSeed seed, std::uint64_t trial);

}  // namespace rachload
