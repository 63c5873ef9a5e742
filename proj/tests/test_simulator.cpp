#include <cmath>
#include <map>

#include "core/error.hpp"
#include "core/oracle.hpp"
#include "core/simulator.hpp"
#include "doctest.h"

using namespace rachload;

TEST_CASE("degenerate loads") {
  RngStream rng(1);
  for (int i = 0; i < 20; ++i) {
    CHECK(format_pattern(sample_pattern({0, 0}, SelectionProfile::uniform(4), rng)) == "eeee");
    CHECK(format_pattern(sample_pattern({1, 0}, SelectionProfile::uniform(1), rng)) == "h");
  }
}

TEST_CASE("single H-UE over two RBs lands on RB 0 half the time") {
  RngStream rng(99);
  int hits = 0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    hits += format_pattern(sample_pattern({1, 0}, SelectionProfile::uniform(2), rng)) == "he";
  }
  // Four standard errors of a fair coin over 10,000 draws.
  CHECK(std::abs(hits / double(kDraws) - 0.5) <= 0.02);
}

TEST_CASE("zero-probability RBs are never selected") {
  const SelectionProfile profile({0.0, 1.0, 0.0}, {0.5, 0.0, 0.5});
  RngStream rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto p = sample_pattern({1, 0}, profile, rng);
    CHECK(format_pattern(p) == "ehe");
    const auto q = sample_pattern({0, 1}, profile, rng);
    CHECK(q[1] == RbEvent::kEmpty);
  }
}

TEST_CASE("sample_observations determinism") {
  const auto profile = SelectionProfile::uniform(6);
  const SimulationSeed seed{42};
  const auto a = sample_observations({2, 4}, profile, 3, seed, 7);
  CHECK(a.size() == 3);
  CHECK(a.rb_count() == 6);
  CHECK(a == sample_observations({2, 4}, profile, 3, seed, 7));
  // Slot t of a longer run is the same draw.
  const auto longer = sample_observations({2, 4}, profile, 10, seed, 7);
  for (std::size_t t = 0; t < 3; ++t) CHECK(longer[t] == a[t]);

  int differing = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    differing += !(sample_observations({2, 4}, profile, 10, seed, trial) ==
                   sample_observations({2, 4}, profile, 10, seed, trial + 100));
  }
  CHECK(differing >= 19);
  CHECK(seed.derive(1, 2) != seed.derive(2, 1));
  CHECK_THROWS_AS(sample_observations({1, 1}, profile, 0, seed, 0), Error);
}

TEST_CASE("empirical frequencies match the exact distribution") {
  const std::vector<std::pair<LoadHypothesis, SelectionProfile>> cases = {
      {{2, 1}, SelectionProfile::uniform(3)},
      {{1, 2}, SelectionProfile({0.2, 0.3, 0.5}, {0.6, 0.4, 0.0})},
      {{2, 2}, SelectionProfile({0.5, 0.5}, {0.1, 0.9})},
  };
  constexpr int kSamples = 50000;
  for (const auto& [hyp, profile] : cases) {
    const auto exact = exhaustive_pattern_distribution(hyp, profile);
    std::map<AccessPattern, int> counts;
    RngStream rng(12345);
    for (int i = 0; i < kSamples; ++i) ++counts[sample_pattern(hyp, profile, rng)];
    for (const auto& [pattern, count] : counts) CHECK(exact.count(pattern) == 1);
    for (const auto& [pattern, p] : exact) {
      const double freq = counts[pattern] / double(kSamples);
      const double se = std::sqrt(p * (1 - p) / kSamples);
      CHECK(std::abs(freq - p) <= 5 * se + 1e-12);
    }
  }
}
