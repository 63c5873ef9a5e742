#include "core/model.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace rachload {

namespace {

constexpr double kProfileSumTolerance = 1e-9;

void validate_vector(const std::vector<double>& p, const char* name) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      std::ostringstream os;
      os << name << "[" << i << "] = " << p[i] << " is outside [0,1]";
      throw_invalid(os.str());
    }
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kProfileSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << name << " sums to " << sum << ", expected 1";
    throw_invalid(os.str());
  }
}

}  // namespace

char event_to_char(RbEvent e) noexcept {
  switch (e) {
    case RbEvent::kSingleHigh: return 'h';
    case RbEvent::kSingleLow: return 'l';
    case RbEvent::kEmpty: return 'e';
    case RbEvent::kCollision: return 'x';
  }
  return '?';
}

AccessPattern::AccessPattern(std::vector<RbEvent> events) : events_(std::move(events)) {
  if (events_.empty()) throw_invalid("access pattern must cover at least one RB");
}

SelectionProfile::SelectionProfile(std::vector<double> p_high, std::vector<double> p_low)
    : p_high_(std::move(p_high)), p_low_(std::move(p_low)) {
  if (p_high_.empty()) throw_invalid("selection profile must cover at least one RB");
  if (p_high_.size() != p_low_.size()) {
    std::ostringstream os;
    os << "p_high has " << p_high_.size() << " entries but p_low has " << p_low_.size();
    throw_invalid(os.str());
  }
  validate_vector(p_high_, "p_high");
  validate_vector(p_low_, "p_low");
}

SelectionProfile SelectionProfile::uniform(std::size_t m) {
  if (m == 0) throw_invalid("selection profile must cover at least one RB");
  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  return SelectionProfile(p, p);
}

ObservationSet::ObservationSet(std::vector<AccessPattern> patterns)
    : patterns_(std::move(patterns)) {
  if (patterns_.empty()) throw_invalid("observation set must contain at least one pattern");
  const std::size_t m = patterns_.front().size();
  for (std::size_t t = 1; t < patterns_.size(); ++t) {
    if (patterns_[t].size() != m) {
      std::ostringstream os;
      os << "pattern " << t << " covers " << patterns_[t].size() << " RBs, expected " << m;
      throw_invalid(os.str());
    }
  }
}

PatternIndexSets derive_index_sets(const AccessPattern& pattern) {
  PatternIndexSets sets;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    switch (pattern[i]) {
      case RbEvent::kSingleHigh: sets.high.push_back(i); break;
      case RbEvent::kSingleLow: sets.low.push_back(i); break;
      case RbEvent::kEmpty: sets.empty.push_back(i); break;
      case RbEvent::kCollision: sets.collision.push_back(i); break;
    }
  }
  return sets;
}

AccessPattern classify_occupancy(std::span<const int> high_counts,
                                 std::span<const int> low_counts) {
  if (high_counts.size() != low_counts.size()) {
    std::ostringstream os;
    os << "occupancy vectors differ in length (" << high_counts.size() << " vs "
       << low_counts.size() << ")";
    throw_invalid(os.str());
  }
  std::vector<RbEvent> events(high_counts.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const int h = high_counts[i];
    const int l = low_counts[i];
    if (h < 0 || l < 0) throw_invalid("occupancy counts must be nonnegative");
    if (h + l == 0) {
      events[i] = RbEvent::kEmpty;
    } else if (h + l >= 2) {
      events[i] = RbEvent::kCollision;
    } else {
      events[i] = h == 1 ? RbEvent::kSingleHigh : RbEvent::kSingleLow;
    }
  }
  return AccessPattern(std::move(events));
}

bool feasibility_check(const PatternIndexSets& sets, LoadHypothesis hyp) noexcept {
  const long rest_high = static_cast<long>(hyp.n_high) - static_cast<long>(sets.high.size());
  const long rest_low = static_cast<long>(hyp.n_low) - static_cast<long>(sets.low.size());
  if (rest_high < 0 || rest_low < 0) return false;
  const long rest = rest_high + rest_low;
  if (sets.collision.empty()) return rest == 0;
  return rest >= 2 * static_cast<long>(sets.collision.size());
}

AccessPattern parse_pattern(std::string_view text) {
  if (text.empty()) throw_invalid("empty access pattern");
  std::vector<RbEvent> events;
  events.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case 'h': events.push_back(RbEvent::kSingleHigh); break;
      case 'l': events.push_back(RbEvent::kSingleLow); break;
      case 'e': events.push_back(RbEvent::kEmpty); break;
      case 'x': events.push_back(RbEvent::kCollision); break;
      default: {
        std::ostringstream os;
        os << "invalid event character '" << text[i] << "' at position " << i
           << " (expected one of h, l, e, x)";
        throw_invalid(os.str());
      }
    }
  }
  return AccessPattern(std::move(events));
}

std::string format_pattern(const AccessPattern& pattern) {
  std::string out;
  out.reserve(pattern.size());
  for (RbEvent e : pattern.events()) out.push_back(event_to_char(e));
  return out;
}

ObservationSet parse_observations(std::string_view text) {
  std::vector<AccessPattern> patterns;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    try {
      patterns.push_back(parse_pattern(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return ObservationSet(std::move(patterns));
}

std::string format_observations(const ObservationSet& obs) {
  std::string out;
  for (const auto& p : obs) {
    out += format_pattern(p);
    out.push_back('\n');
  }
  return out;
}

}  // namespace rachload
