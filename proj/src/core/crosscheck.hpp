#pragma once

#include <cstdint>
#include <vector>

#include "core/model.hpp"

namespace rachload {

/// All 4^M patterns over M RBs in lexicographic event order.
std::vector<AccessPattern> all_patterns(std::size_t rb_count);

struct CrossCheckReport {
  std::uint64_t hypotheses = 0;
  std::uint64_t patterns = 0;
  double max_relative_error = 0.0;   // |engine - oracle| / max(oracle, 1e-300)
  double max_total_deviation = 0.0;  // |sum of engine probabilities - 1|
};

/// Engine against brute-force enumeration for every pattern and every
/// hypothesis with n_high <= max_n_high, n_low <= max_n_low.
CrossCheckReport cross_check_engine(const SelectionProfile& profile, int max_n_high, int max_n_low);

}  // namespace rachload
