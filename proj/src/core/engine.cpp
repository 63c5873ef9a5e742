#include "core/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace rachload {

namespace {

// Zeroes entry `rb` and rescales the rest by their sum. Dividing by the sum of
// the surviving entries (rather than 1 - p[rb]) keeps a lone survivor at
// exactly 1 and zero entries at exactly 0.
bool remove_and_rescale(std::vector<double>& p, std::size_t rb) {
  p[rb] = 0.0;
  double mass = 0.0;
  for (double v : p) mass += v;
  if (mass <= 0.0) {
    std::fill(p.begin(), p.end(), 0.0);
    return true;
  }
  for (double& v : p) v /= mass;
  return false;
}

LogProb log_count(int n) noexcept {
  return n > 0 ? LogProb::from_log(std::log(static_cast<double>(n))) : LogProb::zero();
}

// Probability that the RB holds exactly one device of the `single` class and
// none of the `other` class:
//   N p (1 - p)^(N-1) (1 - q)^(N_other)
LogProb single_occupancy(int n_single, double p_single, int n_other, double p_other) noexcept {
  return log_count(n_single) * LogProb::from_linear(p_single) *
         log_power(1.0 - p_single, n_single - 1) * log_power(1.0 - p_other, n_other);
}

void check_dimensions(const AccessPattern& pattern, const SelectionProfile& profile) {
  if (pattern.size() != profile.size()) {
    std::ostringstream os;
    os << "pattern covers " << pattern.size() << " RBs but the selection profile covers "
       << profile.size();
    throw_invalid(os.str());
  }
}

void check_hypothesis(LoadHypothesis hyp) {
  if (hyp.n_high < 0 || hyp.n_low < 0) throw_invalid("device counts must be nonnegative");
}

// Binomial pmf C(n, i) p^i (1-p)^(n-i), 0^0 = 1.
LogProb binomial_term(int n, int i, double p) noexcept {
  return log_binomial(n, i) * log_power(p, i) * log_power(1.0 - p, n - i);
}

}  // namespace

const char* to_string(LikelihoodMode mode) noexcept {
  return mode == LikelihoodMode::kFull ? "ml" : "rcml";
}

RenormalizationState RenormalizationState::initial(LoadHypothesis hyp,
                                                   const SelectionProfile& profile) {
  RenormalizationState s;
  s.remaining_high = hyp.n_high;
  s.remaining_low = hyp.n_low;
  s.p_high_hat.assign(profile.p_high().begin(), profile.p_high().end());
  s.p_low_hat.assign(profile.p_low().begin(), profile.p_low().end());
  return s;
}

RenormalizationState renormalize_after_removal(RenormalizationState state, std::size_t rb) {
  if (rb >= state.p_high_hat.size()) throw_invalid("RB index out of range");
  state.high_exhausted = remove_and_rescale(state.p_high_hat, rb);
  state.low_exhausted = remove_and_rescale(state.p_low_hat, rb);
  return state;
}

FactorResult prob_h_factor(const PatternIndexSets& sets, LoadHypothesis hyp,
                           const SelectionProfile& profile) {
  FactorResult r{LogProb::one(), RenormalizationState::initial(hyp, profile)};
  auto& s = r.state;
  for (std::size_t rb : sets.high) {
    r.value *= single_occupancy(s.remaining_high, s.p_high_hat[rb], s.remaining_low,
                                s.p_low_hat[rb]);
    if (r.value.is_zero()) return r;
    s.remaining_high -= 1;
    s = renormalize_after_removal(std::move(s), rb);
    if (s.stranded()) {
      r.value = LogProb::zero();
      return r;
    }
  }
  return r;
}

FactorResult prob_l_factor(const PatternIndexSets& sets, const RenormalizationState& after_h) {
  FactorResult r{LogProb::one(), after_h};
  auto& s = r.state;
  if (s.stranded()) return {LogProb::zero(), s};
  for (std::size_t rb : sets.low) {
    r.value *= single_occupancy(s.remaining_low, s.p_low_hat[rb], s.remaining_high,
                                s.p_high_hat[rb]);
    if (r.value.is_zero()) return r;
    s.remaining_low -= 1;
    s = renormalize_after_removal(std::move(s), rb);
    if (s.stranded()) {
      r.value = LogProb::zero();
      return r;
    }
  }
  return r;
}

FactorResult prob_phi_factor(const PatternIndexSets& sets, const RenormalizationState& after_hl) {
  FactorResult r{LogProb::one(), after_hl};
  auto& s = r.state;
  if (s.stranded()) return {LogProb::zero(), s};
  for (std::size_t rb : sets.empty) {
    r.value *= log_power(1.0 - s.p_high_hat[rb], s.remaining_high) *
               log_power(1.0 - s.p_low_hat[rb], s.remaining_low);
    if (r.value.is_zero()) return r;
    s = renormalize_after_removal(std::move(s), rb);
    if (s.stranded()) {
      r.value = LogProb::zero();
      return r;
    }
  }
  return r;
}

LogProb prob_x_factor(const PatternIndexSets& sets, const RenormalizationState& after_hlphi,
                      CompositionCache* cache) {
  const auto& xs = sets.collision;
  if (xs.empty()) return LogProb::one();
  if (after_hlphi.stranded()) return LogProb::zero();

  // The renormalized probabilities seen at each collision RB are the same for
  // every composition.
  std::vector<double> p_high(xs.size());
  std::vector<double> p_low(xs.size());
  {
    RenormalizationState s = after_hlphi;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      p_high[j] = s.p_high_hat[xs[j]];
      p_low[j] = s.p_low_hat[xs[j]];
      s = renormalize_after_removal(std::move(s), xs[j]);
    }
  }

  const int n_high = after_hlphi.remaining_high;
  const int n_low = after_hlphi.remaining_low;
  const int parts = static_cast<int>(xs.size());

  std::shared_ptr<const std::vector<Composition>> totals;
  if (cache != nullptr) {
    totals = cache->totals(parts, n_high + n_low);
  } else {
    totals = std::make_shared<const std::vector<Composition>>(
        find_combinations(parts, n_high + n_low));
  }

  LogProb z = LogProb::zero();
  for (const Composition& k : *totals) {
    const auto highs = cache != nullptr
                           ? cache->highs(k, n_high, n_low)
                           : std::make_shared<const std::vector<Composition>>(
                                 find_combinations_h(k, n_high, n_low));
    for (const Composition& i : *highs) {
      LogProb term = LogProb::one();
      int nh = n_high;
      int nl = n_low;
      for (std::size_t j = 0; j < xs.size() && !term.is_zero(); ++j) {
        const int lows = k[j] - i[j];
        term *= binomial_term(nh, i[j], p_high[j]) * binomial_term(nl, lows, p_low[j]);
        nh -= i[j];
        nl -= lows;
      }
      z += term;
    }
  }
  return z;
}

LogProb pattern_probability(const AccessPattern& pattern, LoadHypothesis hyp,
                            const SelectionProfile& profile, CompositionCache* cache) {
  check_dimensions(pattern, profile);
  check_hypothesis(hyp);
  const PatternIndexSets sets = derive_index_sets(pattern);
  if (!feasibility_check(sets, hyp)) return LogProb::zero();

  const FactorResult h = prob_h_factor(sets, hyp, profile);
  if (h.value.is_zero()) return h.value;
  const FactorResult l = prob_l_factor(sets, h.state);
  if (l.value.is_zero()) return l.value;
  const FactorResult phi = prob_phi_factor(sets, l.state);
  if (phi.value.is_zero()) return phi.value;
  return h.value * l.value * phi.value * prob_x_factor(sets, phi.state, cache);
}

LogProb rcml_pattern_probability(const AccessPattern& pattern, LoadHypothesis hyp,
                                 const SelectionProfile& profile) {
  check_dimensions(pattern, profile);
  check_hypothesis(hyp);
  const PatternIndexSets sets = derive_index_sets(pattern);
  if (!feasibility_check(sets, hyp)) return LogProb::zero();

  const FactorResult h = prob_h_factor(sets, hyp, profile);
  if (h.value.is_zero()) return h.value;
  const FactorResult l = prob_l_factor(sets, h.state);
  if (l.value.is_zero()) return l.value;
  return h.value * l.value * prob_phi_factor(sets, l.state).value;
}

LogProb sequence_log_likelihood(const ObservationSet& obs, LoadHypothesis hyp,
                                const SelectionProfile& profile, LikelihoodMode mode) {
  CompositionCache cache;
  LogProb total = LogProb::one();
  for (const AccessPattern& pattern : obs) {
    total *= mode == LikelihoodMode::kFull ? pattern_probability(pattern, hyp, profile, &cache)
                                           : rcml_pattern_probability(pattern, hyp, profile);
    if (total.is_zero()) break;
  }
  return total;
}

// ---------------------------------------------------------------------------
// PatternEvaluator

PatternEvaluator::PatternEvaluator(const AccessPattern& pattern, const SelectionProfile& profile)
    : sets_(derive_index_sets(pattern)) {
  check_dimensions(pattern, profile);
  RenormalizationState s = RenormalizationState::initial({}, profile);
  auto walk = [&](const std::vector<std::size_t>& rbs, Step::Kind kind) {
    for (std::size_t rb : rbs) {
      Step step{kind, s.p_high_hat[rb], s.p_low_hat[rb], false, false};
      s = renormalize_after_removal(std::move(s), rb);
      step.high_exhausted_after = s.high_exhausted;
      step.low_exhausted_after = s.low_exhausted;
      steps_.push_back(step);
    }
  };
  walk(sets_.high, Step::Kind::kHigh);
  walk(sets_.low, Step::Kind::kLow);
  walk(sets_.empty, Step::Kind::kEmpty);
  x_high_exhausted_at_entry_ = s.high_exhausted;
  x_low_exhausted_at_entry_ = s.low_exhausted;
  for (std::size_t rb : sets_.collision) {
    x_p_high_.push_back(s.p_high_hat[rb]);
    x_p_low_.push_back(s.p_low_hat[rb]);
    s = renormalize_after_removal(std::move(s), rb);
  }
}

LogProb PatternEvaluator::first_three(LoadHypothesis hyp) const {
  int nh = hyp.n_high;
  int nl = hyp.n_low;
  LogProb value = LogProb::one();
  for (const Step& step : steps_) {
    switch (step.kind) {
      case Step::Kind::kHigh:
        value *= single_occupancy(nh, step.p_high, nl, step.p_low);
        --nh;
        break;
      case Step::Kind::kLow:
        value *= single_occupancy(nl, step.p_low, nh, step.p_high);
        --nl;
        break;
      case Step::Kind::kEmpty:
        value *= log_power(1.0 - step.p_high, nh) * log_power(1.0 - step.p_low, nl);
        break;
    }
    if (value.is_zero()) return value;
    if ((step.high_exhausted_after && nh > 0) || (step.low_exhausted_after && nl > 0)) {
      return LogProb::zero();
    }
  }
  return value;
}

void PatternEvaluator::reserve(int max_remaining_high, int max_remaining_low) {
  if (max_remaining_high > table_high_ || max_remaining_low > table_low_) {
    build_collision_table(std::max(max_remaining_high, table_high_),
                          std::max(max_remaining_low, table_low_));
  }
}

void PatternEvaluator::build_collision_table(int max_high, int max_low) {
  const auto rows = static_cast<std::size_t>(max_high + 1);
  const auto cols = static_cast<std::size_t>(max_low + 1);

  // pmf[n][i] = C(n, i) p^i (1-p)^(n-i) for n <= max
  auto binomial_pmf = [](int max_n, double p) {
    std::vector<std::vector<double>> pmf(static_cast<std::size_t>(max_n + 1));
    for (int n = 0; n <= max_n; ++n) {
      auto& row = pmf[static_cast<std::size_t>(n)];
      row.resize(static_cast<std::size_t>(n + 1));
      for (int i = 0; i <= n; ++i) row[static_cast<std::size_t>(i)] = binomial_term(n, i, p).linear();
    }
    return pmf;
  };

  // Past the last collision RB every device must have been placed.
  std::vector<double> next(rows * cols, 0.0);
  next[0] = 1.0;
  std::vector<double> cur(rows * cols);
  for (std::size_t j = x_p_high_.size(); j-- > 0;) {
    const auto pmf_high = binomial_pmf(max_high, x_p_high_[j]);
    const auto pmf_low = binomial_pmf(max_low, x_p_low_[j]);
    for (int a = 0; a <= max_high; ++a) {
      for (int b = 0; b <= max_low; ++b) {
        double sum = 0.0;
        for (int i = 0; i <= a; ++i) {
          const double ph = pmf_high[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
          if (ph == 0.0) continue;
          const double* tail = &next[static_cast<std::size_t>(a - i) * cols];
          // At least two devices on a collision RB.
          for (int c = std::max(0, 2 - i); c <= b; ++c) {
            sum += ph * pmf_low[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] *
                   tail[b - c];
          }
        }
        cur[static_cast<std::size_t>(a) * cols + static_cast<std::size_t>(b)] = sum;
      }
    }
    next.swap(cur);
  }
  table_ = std::move(next);
  table_high_ = max_high;
  table_low_ = max_low;
}

double PatternEvaluator::collision_probability(int remaining_high, int remaining_low) {
  if (remaining_high > table_high_ || remaining_low > table_low_) {
    reserve(remaining_high, remaining_low);
  }
  return table_[static_cast<std::size_t>(remaining_high) * static_cast<std::size_t>(table_low_ + 1) +
                static_cast<std::size_t>(remaining_low)];
}

LogProb PatternEvaluator::evaluate(LoadHypothesis hyp, LikelihoodMode mode) {
  check_hypothesis(hyp);
  if (!feasibility_check(sets_, hyp)) return LogProb::zero();
  const LogProb head = first_three(hyp);
  if (head.is_zero() || mode == LikelihoodMode::kReduced || sets_.collision.empty()) return head;
  const int rest_high = hyp.n_high - static_cast<int>(sets_.high.size());
  const int rest_low = hyp.n_low - static_cast<int>(sets_.low.size());
  if ((x_high_exhausted_at_entry_ && rest_high > 0) || (x_low_exhausted_at_entry_ && rest_low > 0)) {
    return LogProb::zero();
  }
  return head * LogProb::from_linear(collision_probability(rest_high, rest_low));
}

}  // namespace rachload
