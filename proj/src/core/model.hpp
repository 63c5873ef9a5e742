#pragma once

// Observation model of a two-priority random access channel: per-RB events,
// access patterns, selection profiles and load hypotheses.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rachload {

/// What the base station observes on one resource block.
enum class RbEvent : std::uint8_t {
  kSingleHigh,  // exactly one H-UE
  kSingleLow,   // exactly one L-UE
  kEmpty,       // nobody
  kCollision,   // two or more UEs of any class
};

char event_to_char(RbEvent e) noexcept;

/// One RACH slot as seen by the base station. Immutable.
class AccessPattern {
 public:
  explicit AccessPattern(std::vector<RbEvent> events);

  std::size_t size() const noexcept { return events_.size(); }
  RbEvent operator[](std::size_t i) const { return events_[i]; }
  std::span<const RbEvent> events() const noexcept { return events_; }

  friend bool operator==(const AccessPattern&, const AccessPattern&) = default;
  friend auto operator<=>(const AccessPattern&, const AccessPattern&) = default;

 private:
  std::vector<RbEvent> events_;
};

/// Zero-based RB indices grouped by observed event, each ascending.
struct PatternIndexSets {
  std::vector<std::size_t> high;
  std::vector<std::size_t> low;
  std::vector<std::size_t> empty;
  std::vector<std::size_t> collision;

  std::size_t rb_count() const noexcept {
    return high.size() + low.size() + empty.size() + collision.size();
  }
};

/// Per-RB selection probabilities of each device class.
class SelectionProfile {
 public:
  /// Throws Error(kInvalidArgument) unless both vectors have the same
  /// nonzero length, entries lie in [0,1] and each sums to 1 within 1e-9.
  SelectionProfile(std::vector<double> p_high, std::vector<double> p_low);

  static SelectionProfile uniform(std::size_t m);

  std::size_t size() const noexcept { return p_high_.size(); }
  std::span<const double> p_high() const noexcept { return p_high_; }
  std::span<const double> p_low() const noexcept { return p_low_; }

  /// Profile with the two classes exchanged.
  SelectionProfile swapped() const { return SelectionProfile(p_low_, p_high_); }

 private:
  std::vector<double> p_high_;
  std::vector<double> p_low_;
};

struct LoadHypothesis {
  int n_high = 0;
  int n_low = 0;

  int total() const noexcept { return n_high + n_low; }

  friend bool operator==(const LoadHypothesis&, const LoadHypothesis&) = default;
  friend auto operator<=>(const LoadHypothesis&, const LoadHypothesis&) = default;
};

/// T >= 1 patterns sharing one RB count.
class ObservationSet {
 public:
  explicit ObservationSet(std::vector<AccessPattern> patterns);

  std::size_t size() const noexcept { return patterns_.size(); }
  std::size_t rb_count() const noexcept { return patterns_.front().size(); }
  const AccessPattern& operator[](std::size_t t) const { return patterns_[t]; }
  std::span<const AccessPattern> patterns() const noexcept { return patterns_; }

  auto begin() const noexcept { return patterns_.begin(); }
  auto end() const noexcept { return patterns_.end(); }

  friend bool operator==(const ObservationSet&, const ObservationSet&) = default;

 private:
  std::vector<AccessPattern> patterns_;
};

PatternIndexSets derive_index_sets(const AccessPattern& pattern);

/// Maps per-RB occupancy counts to the observed pattern. One H-UE sharing an
/// RB with one L-UE is a collision.
AccessPattern classify_occupancy(std::span<const int> high_counts,
                                 std::span<const int> low_counts);

/// Whether the hypothesis can produce the pattern at all. An infeasible pair
/// has probability zero; this is not an error.
bool feasibility_check(const PatternIndexSets& sets, LoadHypothesis hyp) noexcept;

/// Text form uses 'h', 'l', 'e' (empty) and 'x', one character per RB with
/// RB 0 first.
AccessPattern parse_pattern(std::string_view text);
std::string format_pattern(const AccessPattern& pattern);

/// Parses one pattern per line; blank lines and lines starting with '#' are
/// skipped.
ObservationSet parse_observations(std::string_view text);
std::string format_observations(const ObservationSet& obs);

}  // namespace rachload
