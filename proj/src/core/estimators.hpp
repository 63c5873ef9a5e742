#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/engine.hpp"
#include "core/log_prob.hpp"
#include "core/model.hpp"

namespace rachload {

/// Hypotheses [0..n_high_max] x [0..n_low_max].
struct HypothesisGrid {
  int n_high_max = 0;
  int n_low_max = 0;

  /// 3M in both directions.
  static HypothesisGrid defaults(std::size_t rb_count) noexcept {
    const int m = static_cast<int>(rb_count);
    return {3 * m, 3 * m};
  }

  friend bool operator==(const HypothesisGrid&, const HypothesisGrid&) = default;
};

/// Log-likelihood of the observations for every hypothesis of a grid.
class LikelihoodSurface {
 public:
  LikelihoodSurface(HypothesisGrid grid, LikelihoodMode mode);

  const HypothesisGrid& grid() const noexcept { return grid_; }
  LikelihoodMode mode() const noexcept { return mode_; }

  LogProb at(int n_high, int n_low) const;
  void set(int n_high, int n_low, LogProb value);

  /// Non-empty when the requested grid could not contain any feasible
  /// hypothesis and was widened.
  const std::string& warning() const noexcept { return warning_; }
  void set_warning(std::string w) { warning_ = std::move(w); }

  bool all_zero() const noexcept;

 private:
  HypothesisGrid grid_;
  LikelihoodMode mode_;
  std::vector<LogProb> values_;  // row-major, rows are n_high
  std::string warning_;
};

/// Cells within this log-likelihood distance of the maximum are ties.
inline constexpr double kTieTolerance = 1e-9;

/// Grid enlarged so it meets the lower bounds every observation implies.
/// `note` receives a description of the widening, if any.
HypothesisGrid widen_to_observations(const ObservationSet& obs, HypothesisGrid grid,
                                     std::string* note = nullptr);

LikelihoodSurface likelihood_surface(const ObservationSet& obs, const SelectionProfile& profile,
                                     HypothesisGrid grid, LikelihoodMode mode);

/// Maximizer of the surface. Ties go to the smallest n_high + n_low, then the
/// smallest n_high. Throws Error(kNoFeasibleHypothesis) when every cell is zero.
LoadHypothesis select_estimate(const LikelihoodSurface& surface, const ObservationSet& obs);

LoadHypothesis ml_estimate(const ObservationSet& obs, const SelectionProfile& profile,
                           HypothesisGrid grid);
LoadHypothesis rcml_estimate(const ObservationSet& obs, const SelectionProfile& profile,
                             HypothesisGrid grid);
LoadHypothesis estimate(const ObservationSet& obs, const SelectionProfile& profile,
                        HypothesisGrid grid, LikelihoodMode mode);

/// Rows are n_high = 0..max, columns n_low = 0..max; zero cells print "-inf".
void write_surface_csv(const LikelihoodSurface& surface, std::ostream& out);

}  // namespace rachload
