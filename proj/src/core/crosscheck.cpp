#include "core/crosscheck.hpp"

#include <algorithm>
#include <cmath>

#include "core/engine.hpp"
#include "core/error.hpp"
#include "core/oracle.hpp"

namespace rachload {

std::vector<AccessPattern> all_patterns(std::size_t rb_count) {
  if (rb_count == 0 || rb_count > 12) throw_invalid("all_patterns supports 1 <= M <= 12");
  constexpr RbEvent kEvents[] = {RbEvent::kSingleHigh, RbEvent::kSingleLow, RbEvent::kEmpty,
                                 RbEvent::kCollision};
  std::size_t count = 1;
  for (std::size_t i = 0; i < rb_count; ++i) count *= 4;
  std::vector<AccessPattern> out;
  out.reserve(count);
  std::vector<RbEvent> events(rb_count);
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t c = code;
    for (std::size_t i = rb_count; i-- > 0;) {
      events[i] = kEvents[c % 4];
      c /= 4;
    }
    out.emplace_back(events);
  }
  return out;
}

CrossCheckReport cross_check_engine(const SelectionProfile& profile, int max_n_high, int max_n_low) {
  if (max_n_high < 0 || max_n_low < 0) throw_invalid("maximum counts must be nonnegative");
  const auto patterns = all_patterns(profile.size());
  CrossCheckReport report;
  CompositionCache cache;
  for (int nh = 0; nh <= max_n_high; ++nh) {
    for (int nl = 0; nl <= max_n_low; ++nl) {
      const LoadHypothesis hyp{nh, nl};
      const PatternDistribution dist = exhaustive_pattern_distribution(hyp, profile);
      double total = 0.0;
      for (const AccessPattern& p : patterns) {
        const double engine = pattern_probability(p, hyp, profile, &cache).linear();
        const auto it = dist.find(p);
        const double oracle = it == dist.end() ? 0.0 : it->second;
        report.max_relative_error = std::max(report.max_relative_error,
                                             std::abs(engine - oracle) / std::max(oracle, 1e-300));
        total += engine;
        ++report.patterns;
      }
      report.max_total_deviation = std::max(report.max_total_deviation, std::abs(total - 1.0));
      ++report.hypotheses;
    }
  }
  return report;
}

}  // namespace rachload
