#pragma once

// Test-only ground truth: enumerates every labelled assignment of devices to
// RBs (M^n of them) and classifies each one directly. Independent of both the
// engine and the library's occupancy-based oracle.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace rachload::testing {

/// Pattern string (h/l/e/x) -> probability.
inline std::map<std::string, double> labelled_distribution(int n_high, int n_low,
                                                           const std::vector<double>& p_high,
                                                           const std::vector<double>& p_low) {
  const std::size_t m = p_high.size();
  const int n = n_high + n_low;
  std::map<std::string, double> dist;
  std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
  while (true) {
    double prob = 1.0;
    std::vector<int> highs(m, 0);
    std::vector<int> lows(m, 0);
    for (int u = 0; u < n; ++u) {
      const std::size_t rb = choice[static_cast<std::size_t>(u)];
      if (u < n_high) {
        prob *= p_high[rb];
        ++highs[rb];
      } else {
        prob *= p_low[rb];
        ++lows[rb];
      }
    }
    std::string pattern(m, 'e');
    for (std::size_t i = 0; i < m; ++i) {
      const int total = highs[i] + lows[i];
      if (total >= 2) {
        pattern[i] = 'x';
      } else if (highs[i] == 1) {
        pattern[i] = 'h';
      } else if (lows[i] == 1) {
        pattern[i] = 'l';
      }
    }
    dist[pattern] += prob;

    int u = 0;
    while (u < n && ++choice[static_cast<std::size_t>(u)] == m) choice[static_cast<std::size_t>(u++)] = 0;
    if (u == n) break;
  }
  return dist;
}

inline double labelled_probability(const std::string& pattern, int n_high, int n_low,
                                   const std::vector<double>& p_high,
                                   const std::vector<double>& p_low) {
  const auto dist = labelled_distribution(n_high, n_low, p_high, p_low);
  const auto it = dist.find(pattern);
  return it == dist.end() ? 0.0 : it->second;
}

}  // namespace rachload::testing
