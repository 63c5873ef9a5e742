#include "core/oracle.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "core/error.hpp"

namespace rachload {

namespace {

struct Occupancy {
  std::vector<int> counts;
  double probability;
};

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// n! / prod(c_i!) * prod(p_i^c_i), computed in linear domain.
double multinomial_probability(const std::vector<int>& counts, std::span<const double> p) {
  double prob = 1.0;
  int placed = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    // Multiply in C(placed + c, c) one factor at a time.
    for (int j = 1; j <= counts[i]; ++j) {
      prob *= static_cast<double>(placed + j) / static_cast<double>(j);
      prob *= p[i];
    }
    placed += counts[i];
  }
  return prob;
}

void enumerate_counts(int remaining, std::size_t rb, std::vector<int>& counts,
                      std::span<const double> p, std::vector<Occupancy>& out) {
  if (rb + 1 == counts.size()) {
    counts[rb] = remaining;
    const double prob = multinomial_probability(counts, p);
    if (prob > 0.0) out.push_back({counts, prob});
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    counts[rb] = c;
    enumerate_counts(remaining - c, rb + 1, counts, p, out);
  }
  counts[rb] = 0;
}

std::vector<Occupancy> occupancies(int n, std::span<const double> p) {
  std::vector<Occupancy> out;
  std::vector<int> counts(p.size(), 0);
  enumerate_counts(n, 0, counts, p, out);
  return out;
}

// C(n + m - 1, m - 1), saturating.
std::uint64_t weak_compositions(int n, std::size_t m) {
  double count = 1.0;
  for (std::size_t j = 1; j < m; ++j) {
    count = count * static_cast<double>(n + static_cast<int>(j)) / static_cast<double>(j);
  }
  if (count >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::llround(count));
}

}  // namespace

std::uint64_t oracle_enumeration_size(LoadHypothesis hyp, std::size_t rb_count) {
  const std::uint64_t a = weak_compositions(hyp.n_high, rb_count);
  const std::uint64_t b = weak_compositions(hyp.n_low, rb_count);
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

PatternDistribution exhaustive_pattern_distribution(LoadHypothesis hyp,
                                                    const SelectionProfile& profile,
                                                    std::uint64_t budget) {
  if (hyp.n_high < 0 || hyp.n_low < 0) throw_invalid("device counts must be nonnegative");
  const std::uint64_t size = oracle_enumeration_size(hyp, profile.size());
  if (size > budget) {
    std::ostringstream os;
    os << "oracle enumeration of " << size << " occupancy pairs exceeds the budget of " << budget;
    throw Error(ErrorCode::kBudgetExceeded, os.str());
  }

  const auto highs = occupancies(hyp.n_high, profile.p_high());
  const auto lows = occupancies(hyp.n_low, profile.p_low());

  std::map<AccessPattern, CompensatedSum> sums;
  for (const auto& h : highs) {
    for (const auto& l : lows) {
      sums[classify_occupancy(h.counts, l.counts)].add(h.probability * l.probability);
    }
  }
  PatternDistribution dist;
  for (const auto& [pattern, sum] : sums) dist.emplace(pattern, sum.value());
  return dist;
}

double oracle_pattern_probability(const AccessPattern& pattern, LoadHypothesis hyp,
                                  const SelectionProfile& profile, std::uint64_t budget) {
  if (pattern.size() != profile.size()) {
    throw_invalid("pattern and selection profile differ in RB count");
  }
  const auto dist = exhaustive_pattern_distribution(hyp, profile, budget);
  const auto it = dist.find(pattern);
  return it == dist.end() ? 0.0 : it->second;
}

}  // namespace rachload
