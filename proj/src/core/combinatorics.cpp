#include "core/combinatorics.hpp"

#include <cmath>
#include <mutex>

#include "core/error.hpp"

namespace rachload {

namespace {

constexpr int kExactLogBinomialLimit = 20;

void extend_totals(int parts, int total, Composition& prefix, std::vector<Composition>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(prefix);
    return;
  }
  // Every later entry needs at least 2.
  const int max_here = total - 2 * (parts - 1);
  for (int k = 2; k <= max_here; ++k) {
    prefix.push_back(k);
    extend_totals(parts - 1, total - k, prefix, out);
    prefix.pop_back();
  }
}

void extend_highs(const Composition& k, std::size_t j, int high_left, int capacity_left,
                  Composition& prefix, std::vector<Composition>& out) {
  if (j == k.size()) {
    if (high_left == 0) out.push_back(prefix);
    return;
  }
  capacity_left -= k[j];
  // The remaining RBs can absorb at most capacity_left H-UEs.
  const int lo = std::max(0, high_left - capacity_left);
  const int hi = std::min(k[j], high_left);
  for (int i = lo; i <= hi; ++i) {
    prefix.push_back(i);
    extend_highs(k, j + 1, high_left - i, capacity_left, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::uint64_t binomial_exact(int n, int k) {
  if (n < 0 || n > 62) throw_invalid("binomial_exact supports 0 <= n <= 62");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i at every step.
    r = r / static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) +
        r % static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) /
            static_cast<std::uint64_t>(i);
  }
  return r;
}

LogProb log_binomial(int n, int k) noexcept {
  if (n < 0 || k < 0 || k > n) return LogProb::zero();
  if (n <= kExactLogBinomialLimit) {
    return LogProb::from_log(std::log(static_cast<double>(binomial_exact(n, k))));
  }
  return LogProb::from_log(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

std::vector<Composition> find_combinations(int parts, int total) {
  std::vector<Composition> out;
  if (parts < 0) return out;
  if (parts == 0) {
    if (total == 0) out.emplace_back();
    return out;
  }
  Composition prefix;
  prefix.reserve(static_cast<std::size_t>(parts));
  extend_totals(parts, total, prefix, out);
  return out;
}

std::vector<Composition> find_combinations_h(const Composition& k, int remaining_high,
                                             int remaining_low) {
  std::vector<Composition> out;
  if (remaining_high < 0 || remaining_low < 0) return out;
  int capacity = 0;
  for (int kj : k) capacity += kj;
  if (capacity != remaining_high + remaining_low) return out;
  Composition prefix;
  prefix.reserve(k.size());
  extend_highs(k, 0, remaining_high, capacity, prefix, out);
  return out;
}

std::shared_ptr<const std::vector<Composition>> CompositionCache::totals(int parts, int total) {
  const auto key = std::make_pair(parts, total);
  {
    std::shared_lock lock(mutex_);
    if (auto it = totals_.find(key); it != totals_.end()) return it->second;
  }
  auto entry = std::make_shared<const std::vector<Composition>>(find_combinations(parts, total));
  std::unique_lock lock(mutex_);
  return totals_.try_emplace(key, std::move(entry)).first->second;
}

std::shared_ptr<const std::vector<Composition>> CompositionCache::highs(const Composition& k,
                                                                        int remaining_high,
                                                                        int remaining_low) {
  auto key = std::make_tuple(k, remaining_high, remaining_low);
  {
    std::shared_lock lock(mutex_);
    if (auto it = highs_.find(key); it != highs_.end()) return it->second;
  }
  auto entry = std::make_shared<const std::vector<Composition>>(
      find_combinations_h(k, remaining_high, remaining_low));
  std::unique_lock lock(mutex_);
  return highs_.try_emplace(std::move(key), std::move(entry)).first->second;
}

}  // namespace rachload
