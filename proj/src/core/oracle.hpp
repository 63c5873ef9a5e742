#pragma once

// Brute-force pattern distribution. Enumerates how many devices of each class
// land on every RB (weak compositions of n over M parts), weights each
// occupancy pair by its multinomial probability and classifies it. Shares no
// code with the engine beyond classify_occupancy.

#include <cstdint>
#include <map>

#include "core/model.hpp"

namespace rachload {

using PatternDistribution = std::map<AccessPattern, double>;

inline constexpr std::uint64_t kDefaultOracleBudget = 100'000'000;

/// Number of (high, low) occupancy pairs the oracle would visit.
std::uint64_t oracle_enumeration_size(LoadHypothesis hyp, std::size_t rb_count);

/// Throws Error(kBudgetExceeded) when the enumeration is larger than `budget`.
PatternDistribution exhaustive_pattern_distribution(LoadHypothesis hyp,
                                                    const SelectionProfile& profile,
                                                    std::uint64_t budget = kDefaultOracleBudget);

double oracle_pattern_probability(const AccessPattern& pattern, LoadHypothesis hyp,
                                  const SelectionProfile& profile,
                                  std::uint64_t budget = kDefaultOracleBudget);

}  // namespace rachload
