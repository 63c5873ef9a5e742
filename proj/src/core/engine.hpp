#pragma once

// Exact access-pattern probabilities. A pattern is the intersection of its
// single-high, single-low, empty and collision events, so
//
//   P(pattern) = P(H) * P(L | H) * P(Phi | H, L) * P(X | H, L, Phi)
//
// Each factor walks its RBs in ascending order. After an RB is processed it is
// removed from contention and the selection probabilities of the remaining RBs
// are rescaled to sum to one, for both classes.

#include <cstddef>
#include <vector>

#include "core/combinatorics.hpp"
#include "core/log_prob.hpp"
#include "core/model.hpp"

namespace rachload {

enum class LikelihoodMode {
  kFull,     // all four factors (ML)
  kReduced,  // collision factor dropped (RCML)
};

const char* to_string(LikelihoodMode mode) noexcept;

/// Devices still unplaced and the renormalized selection probabilities over
/// the RBs not yet processed.
struct RenormalizationState {
  int remaining_high = 0;
  int remaining_low = 0;
  std::vector<double> p_high_hat;
  std::vector<double> p_low_hat;
  bool high_exhausted = false;  // no selection mass left for H-UEs
  bool low_exhausted = false;

  static RenormalizationState initial(LoadHypothesis hyp, const SelectionProfile& profile);

  /// Devices remain but their class has nowhere left to go.
  bool stranded() const noexcept {
    return (high_exhausted && remaining_high > 0) || (low_exhausted && remaining_low > 0);
  }
};

/// Removes `rb` from contention in both classes: its entry becomes 0 and every
/// other entry is divided by the remaining mass. Removing the last of the mass
/// leaves an all-zero, exhausted vector. Device counts are not touched.
RenormalizationState renormalize_after_removal(RenormalizationState state, std::size_t rb);

struct FactorResult {
  LogProb value;
  RenormalizationState state;  // after all RBs of this factor were removed
};

/// P(H): every RB in the high set holds exactly one H-UE and nothing else.
FactorResult prob_h_factor(const PatternIndexSets& sets, LoadHypothesis hyp,
                           const SelectionProfile& profile);

/// P(L | H), starting from the state returned by prob_h_factor.
FactorResult prob_l_factor(const PatternIndexSets& sets, const RenormalizationState& after_h);

/// P(Phi | H, L): no remaining device selects any RB of the empty set.
FactorResult prob_phi_factor(const PatternIndexSets& sets, const RenormalizationState& after_hl);

/// P(X | H, L, Phi) by enumerating every collision composition (k, i): k_j >= 2
/// devices on collision RB j, i_j of them H-UEs. Per RB the count of each
/// class is binomial over the devices still unplaced, which then shrink
/// cumulatively.
LogProb prob_x_factor(const PatternIndexSets& sets, const RenormalizationState& after_hlphi,
                      CompositionCache* cache = nullptr);

/// Full pattern probability; zero for infeasible pairs. Throws on RB count
/// mismatch.
LogProb pattern_probability(const AccessPattern& pattern, LoadHypothesis hyp,
                            const SelectionProfile& profile, CompositionCache* cache = nullptr);

/// Product of the first three factors only.
LogProb rcml_pattern_probability(const AccessPattern& pattern, LoadHypothesis hyp,
                                 const SelectionProfile& profile);

/// Sum of per-pattern log-probabilities; zero as soon as one pattern is.
LogProb sequence_log_likelihood(const ObservationSet& obs, LoadHypothesis hyp,
                                const SelectionProfile& profile, LikelihoodMode mode);

/// Evaluates one pattern against many hypotheses. The renormalized
/// probabilities at every step do not depend on the hypothesis, so they are
/// computed once. The collision factor is tabulated for every (remaining H,
/// remaining L) pair by recursing over the collision RBs, which sums the same
/// composition terms as prob_x_factor without listing them.
///
/// Not thread-safe: the collision table grows on demand.
class PatternEvaluator {
 public:
  PatternEvaluator(const AccessPattern& pattern, const SelectionProfile& profile);

  const PatternIndexSets& index_sets() const noexcept { return sets_; }

  LogProb evaluate(LoadHypothesis hyp, LikelihoodMode mode);

  /// Pre-sizes the collision table for remaining counts up to the bounds.
  void reserve(int max_remaining_high, int max_remaining_low);

 private:
  struct Step {
    enum class Kind { kHigh, kLow, kEmpty } kind;
    double p_high;
    double p_low;
    bool high_exhausted_after;
    bool low_exhausted_after;
  };

  LogProb first_three(LoadHypothesis hyp) const;
  void build_collision_table(int max_high, int max_low);
  double collision_probability(int remaining_high, int remaining_low);

  PatternIndexSets sets_;
  std::vector<Step> steps_;
  std::vector<double> x_p_high_;  // renormalized probabilities at each collision RB
  std::vector<double> x_p_low_;
  bool x_high_exhausted_at_entry_ = false;
  bool x_low_exhausted_at_entry_ = false;
  int table_high_ = -1;
  int table_low_ = -1;
  std::vector<double> table_;  // (table_high_+1) x (table_low_+1), row-major
};

}  // namespace rachload
