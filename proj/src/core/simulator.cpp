#include "core/simulator.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace rachload {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t SimulationSeed::derive(std::uint64_t trial, std::uint64_t slot) const noexcept {
  return splitmix64(splitmix64(splitmix64(base_seed) ^ trial) ^ slot);
}

CategoricalSampler::CategoricalSampler(std::span<const double> p) : cumulative_(p.size()) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cumulative_[i] = acc;
    if (p[i] > 0.0) last_positive_ = i;
  }
}

std::size_t CategoricalSampler::sample(RngStream& rng) const noexcept {
  const double u = rng.next_unit();
  // First bucket whose upper edge exceeds u; zero-width buckets are skipped.
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return last_positive_;  // rounding in the last edge
  return static_cast<std::size_t>(it - cumulative_.begin());
}

AccessPattern sample_pattern(LoadHypothesis hyp, const SelectionProfile& profile, RngStream& rng) {
  if (hyp.n_high < 0 || hyp.n_low < 0) throw_invalid("device counts must be nonnegative");
  const CategoricalSampler high(profile.p_high());
  const CategoricalSampler low(profile.p_low());
  std::vector<int> high_counts(profile.size(), 0);
  std::vector<int> low_counts(profile.size(), 0);
  for (int u = 0; u < hyp.n_high; ++u) ++high_counts[high.sample(rng)];
  for (int u = 0; u < hyp.n_low; ++u) ++low_counts[low.sample(rng)];
  return classify_occupancy(high_counts, low_counts);
}

ObservationSet sample_observations(LoadHypothesis hyp, const SelectionProfile& profile, int t,
                                   SimulationSeed seed, std::uint64_t trial) {
  if (t < 1) throw_invalid("number of slots T must be at least 1");
  std::vector<AccessPattern> patterns;
  patterns.reserve(static_cast<std::size_t>(t));
  for (int slot = 0; slot < t; ++slot) {
    RngStream rng(seed.derive(trial, static_cast<std::uint64_t>(slot)));
    patterns.push_back(sample_pattern(hyp, profile, rng));
  }
  return ObservationSet(std::move(patterns));
}

}  // namespace rachload
