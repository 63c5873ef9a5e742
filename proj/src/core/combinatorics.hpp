#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "core/log_prob.hpp"

namespace rachload {

/// Exact binomial coefficient; requires n <= 62 so the result fits.
std::uint64_t binomial_exact(int n, int k);

/// log C(n, k): exact integer path for n <= 20, log-gamma beyond. Zero state
/// when k is out of [0, n].
LogProb log_binomial(int n, int k) noexcept;

using Composition = std::vector<int>;

/// All length-`parts` vectors with every entry >= 2 summing to `total`, in
/// lexicographic order. Empty when no such vector exists.
std::vector<Composition> find_combinations(int parts, int total);

/// All i with 0 <= i_j <= k_j, sum(i) = remaining_high and
/// sum(k - i) = remaining_low, in lexicographic order.
std::vector<Composition> find_combinations_h(const Composition& k, int remaining_high,
                                             int remaining_low);

/// Memo of the two enumerations above, safe for concurrent use.
class CompositionCache {
 public:
  std::shared_ptr<const std::vector<Composition>> totals(int parts, int total);
  std::shared_ptr<const std::vector<Composition>> highs(const Composition& k, int remaining_high,
                                                        int remaining_low);

 private:
  using Entry = std::shared_ptr<const std::vector<Composition>>;
  std::shared_mutex mutex_;
  std::map<std::pair<int, int>, Entry> totals_;
  std::map<std::tuple<Composition, int, int>, Entry> highs_;
};

}  // namespace rachload
