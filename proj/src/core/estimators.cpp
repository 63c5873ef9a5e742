#include "core/estimators.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "core/error.hpp"

namespace rachload {

namespace {

struct Requirements {
  int high = 0;   // n_high >= high
  int low = 0;    // n_low >= low
  int total = 0;  // n_high + n_low >= total
};

Requirements requirements_of(const ObservationSet& obs) {
  Requirements r;
  for (const AccessPattern& p : obs) {
    const PatternIndexSets s = derive_index_sets(p);
    const int h = static_cast<int>(s.high.size());
    const int l = static_cast<int>(s.low.size());
    const int x = static_cast<int>(s.collision.size());
    r.high = std::max(r.high, h);
    r.low = std::max(r.low, l);
    r.total = std::max(r.total, h + l + 2 * x);
  }
  return r;
}

std::string explain_infeasibility(const ObservationSet& obs, HypothesisGrid grid) {
  std::ostringstream os;
  // Collision-free slots pin the load exactly.
  std::optional<std::pair<std::size_t, LoadHypothesis>> pinned;
  for (std::size_t t = 0; t < obs.size(); ++t) {
    const PatternIndexSets s = derive_index_sets(obs[t]);
    if (!s.collision.empty()) continue;
    const LoadHypothesis exact{static_cast<int>(s.high.size()), static_cast<int>(s.low.size())};
    if (pinned && pinned->second != exact) {
      os << "no feasible hypothesis: collision-free pattern " << pinned->first
         << " requires exactly (" << pinned->second.n_high << "," << pinned->second.n_low
         << ") but pattern " << t << " requires exactly (" << exact.n_high << "," << exact.n_low
         << ")";
      return os.str();
    }
    if (!pinned) pinned.emplace(t, exact);
  }
  if (pinned) {
    for (std::size_t t = 0; t < obs.size(); ++t) {
      if (!feasibility_check(derive_index_sets(obs[t]), pinned->second)) {
        os << "no feasible hypothesis: collision-free pattern " << pinned->first
           << " requires exactly (" << pinned->second.n_high << "," << pinned->second.n_low
           << "), which cannot produce pattern " << t << " (" << format_pattern(obs[t]) << ")";
        return os.str();
      }
    }
  }
  const Requirements r = requirements_of(obs);
  os << "no feasible hypothesis with nonzero probability in grid [0.." << grid.n_high_max
     << "]x[0.." << grid.n_low_max << "]; observations need n_high >= " << r.high
     << ", n_low >= " << r.low << ", n_high + n_low >= " << r.total
     << " and the selection profile must give every observed single and collision RB nonzero "
        "probability";
  return os.str();
}

}  // namespace

LikelihoodSurface::LikelihoodSurface(HypothesisGrid grid, LikelihoodMode mode)
    : grid_(grid), mode_(mode) {
  if (grid.n_high_max < 0 || grid.n_low_max < 0) throw_invalid("grid bounds must be nonnegative");
  values_.resize(static_cast<std::size_t>(grid.n_high_max + 1) *
                 static_cast<std::size_t>(grid.n_low_max + 1));
}

LogProb LikelihoodSurface::at(int n_high, int n_low) const {
  if (n_high < 0 || n_high > grid_.n_high_max || n_low < 0 || n_low > grid_.n_low_max) {
    throw_invalid("hypothesis outside the likelihood surface");
  }
  return values_[static_cast<std::size_t>(n_high) * static_cast<std::size_t>(grid_.n_low_max + 1) +
                 static_cast<std::size_t>(n_low)];
}

void LikelihoodSurface::set(int n_high, int n_low, LogProb value) {
  if (n_high < 0 || n_high > grid_.n_high_max || n_low < 0 || n_low > grid_.n_low_max) {
    throw_invalid("hypothesis outside the likelihood surface");
  }
  values_[static_cast<std::size_t>(n_high) * static_cast<std::size_t>(grid_.n_low_max + 1) +
          static_cast<std::size_t>(n_low)] = value;
}

bool LikelihoodSurface::all_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](LogProb v) { return v.is_zero(); });
}

HypothesisGrid widen_to_observations(const ObservationSet& obs, HypothesisGrid grid,
                                     std::string* note) {
  const Requirements r = requirements_of(obs);
  HypothesisGrid out = grid;
  out.n_high_max = std::max(out.n_high_max, r.high);
  out.n_low_max = std::max(out.n_low_max, r.low);
  if (out.n_high_max + out.n_low_max < r.total) out.n_low_max = r.total - out.n_high_max;
  if (note != nullptr && !(out == grid)) {
    std::ostringstream os;
    os << "grid [0.." << grid.n_high_max << "]x[0.." << grid.n_low_max
       << "] cannot explain the observations; widened to [0.." << out.n_high_max << "]x[0.."
       << out.n_low_max << "]";
    *note = os.str();
  }
  return out;
}

LikelihoodSurface likelihood_surface(const ObservationSet& obs, const SelectionProfile& profile,
                                     HypothesisGrid grid, LikelihoodMode mode) {
  if (obs.rb_count() != profile.size()) {
    std::ostringstream os;
    os << "observations cover " << obs.rb_count() << " RBs but the selection profile covers "
       << profile.size();
    throw_invalid(os.str());
  }
  if (grid.n_high_max < 0 || grid.n_low_max < 0) throw_invalid("grid bounds must be nonnegative");
  std::string note;
  const HypothesisGrid widened = widen_to_observations(obs, grid, &note);
  LikelihoodSurface surface(widened, mode);
  surface.set_warning(std::move(note));

  // Repeated slots contribute the same factor.
  std::map<AccessPattern, int> multiplicity;
  for (const AccessPattern& p : obs) ++multiplicity[p];

  std::vector<std::pair<PatternEvaluator, int>> evaluators;
  evaluators.reserve(multiplicity.size());
  for (const auto& [pattern, count] : multiplicity) {
    PatternEvaluator ev(pattern, profile);
    if (mode == LikelihoodMode::kFull) {
      const auto& s = ev.index_sets();
      ev.reserve(std::max(0, widened.n_high_max - static_cast<int>(s.high.size())),
                 std::max(0, widened.n_low_max - static_cast<int>(s.low.size())));
    }
    evaluators.emplace_back(std::move(ev), count);
  }

  for (int nh = 0; nh <= widened.n_high_max; ++nh) {
    for (int nl = 0; nl <= widened.n_low_max; ++nl) {
      double log_sum = 0.0;
      bool zero = false;
      for (auto& [ev, count] : evaluators) {
        const LogProb p = ev.evaluate({nh, nl}, mode);
        if (p.is_zero()) {
          zero = true;
          break;
        }
        log_sum += count * p.log();
      }
      surface.set(nh, nl, zero ? LogProb::zero() : LogProb::from_log(log_sum));
    }
  }
  return surface;
}

LoadHypothesis select_estimate(const LikelihoodSurface& surface, const ObservationSet& obs) {
  const HypothesisGrid& g = surface.grid();
  LogProb best = LogProb::zero();
  for (int nh = 0; nh <= g.n_high_max; ++nh) {
    for (int nl = 0; nl <= g.n_low_max; ++nl) best = std::max(best, surface.at(nh, nl));
  }
  if (best.is_zero()) throw Error(ErrorCode::kNoFeasibleHypothesis, explain_infeasibility(obs, g));

  // Walk cells by increasing total, then increasing n_high.
  for (int total = 0; total <= g.n_high_max + g.n_low_max; ++total) {
    for (int nh = std::max(0, total - g.n_low_max); nh <= std::min(total, g.n_high_max); ++nh) {
      const LogProb v = surface.at(nh, total - nh);
      if (!v.is_zero() && v.log() >= best.log() - kTieTolerance) return {nh, total - nh};
    }
  }
  return {};  // unreachable: best is attained somewhere
}

LoadHypothesis estimate(const ObservationSet& obs, const SelectionProfile& profile,
                        HypothesisGrid grid, LikelihoodMode mode) {
  return select_estimate(likelihood_surface(obs, profile, grid, mode), obs);
}

LoadHypothesis ml_estimate(const ObservationSet& obs, const SelectionProfile& profile,
                           HypothesisGrid grid) {
  return estimate(obs, profile, grid, LikelihoodMode::kFull);
}

LoadHypothesis rcml_estimate(const ObservationSet& obs, const SelectionProfile& profile,
                             HypothesisGrid grid) {
  return estimate(obs, profile, grid, LikelihoodMode::kReduced);
}

void write_surface_csv(const LikelihoodSurface& surface, std::ostream& out) {
  const HypothesisGrid& g = surface.grid();
  out << "n_high/n_low";
  for (int nl = 0; nl <= g.n_low_max; ++nl) out << ',' << nl;
  out << '\n';
  char buf[64];
  for (int nh = 0; nh <= g.n_high_max; ++nh) {
    out << nh;
    for (int nl = 0; nl <= g.n_low_max; ++nl) {
      const LogProb v = surface.at(nh, nl);
      out << ',';
      if (v.is_zero()) {
        out << "-inf";
      } else {
        const auto res = std::to_chars(buf, buf + sizeof buf, v.log());
        out.write(buf, res.ptr - buf);
      }
    }
    out << '\n';
  }
}

}  // namespace rachload
