#pragma once

// Monte Carlo experiments: sample observations for a sweep of true loads, run
// the estimators, and summarize the mean absolute error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/engine.hpp"
#include "core/estimators.hpp"
#include "core/model.hpp"

namespace rachload {

struct ExperimentConfig {
  std::string setup_id = "custom";  // "1", "2", "3" or "custom"
  int m = 6;
  std::vector<int> t_values{1, 3, 10};
  std::vector<int> n_high_values{2};
  int n_low_min = 0;
  int n_low_max = 7;
  std::vector<double> p_high = std::vector<double>(6, 1.0 / 6.0);
  std::vector<double> p_low = std::vector<double>(6, 1.0 / 6.0);
  int trials = 50;
  std::uint64_t seed = 1;
  std::vector<LikelihoodMode> estimators{LikelihoodMode::kFull, LikelihoodMode::kReduced};
  std::optional<HypothesisGrid> grid;  // defaults to 3M x 3M
  std::string out;
  unsigned threads = 0;  // 0 = hardware concurrency

  /// Built-in setups 1-3, all with M = 6 and T in {1,3,10}.
  static ExperimentConfig preset(int setup);

  SelectionProfile profile() const;
  HypothesisGrid effective_grid() const noexcept { return grid.value_or(HypothesisGrid::defaults(static_cast<std::size_t>(m))); }

  /// Throws Error(kInvalidArgument) describing the first inconsistency.
  void validate() const;
};

/// Applies one setting. Keys accept '-' or '_': setup, m, t, n_high,
/// n_low_range, p_high, p_low, trials, seed, estimator, grid_max_high,
/// grid_max_low, out, threads. "setup" replaces the whole config with the
/// preset; "m" resets both profiles to uniform when their length differs.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// "key = value" lines, '#' starts a comment. A setup line is applied before
/// the others regardless of position.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// "0.25,1/3,..." -> probabilities; fractions are accepted.
std::vector<double> parse_probability_list(std::string_view text);

struct ExperimentRecord {
  std::string setup_id;
  std::string estimator;
  int m = 0;
  int t = 0;
  int trial = 0;
  int n_high_true = 0;
  int n_low_true = 0;
  int n_high_est = 0;
  int n_low_est = 0;
  int abs_err_high = 0;
  int abs_err_low = 0;
  int abs_err_total = 0;
  double overloading_factor = 0.0;
  double runtime_us = 0.0;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

struct MaeGrouping {
  bool estimator = true;
  bool n_high = true;
  bool n_low = true;
  bool t = true;
};

/// One MAE group; keys not grouped on are "*" / -1.
struct MaeRow {
  std::string estimator;
  int n_high = -1;
  int n_low = -1;
  int t = -1;
  int count = 0;
  double mae_total = 0.0;
  double mae_high = 0.0;
  double mae_low = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRecord> records;  // sorted by group keys, then trial
  std::vector<MaeRow> mae;
};

/// Deterministic in everything but runtime_us for a given config, whatever
/// the thread count. Each (n_high, n_low, T, trial) point samples its own
/// observations; all estimators see the same draws.
ExperimentResult run_setup(const ExperimentConfig& config);

/// Throws Error(kInvalidArgument) on empty input.
std::vector<MaeRow> compute_mae(const std::vector<ExperimentRecord>& records,
                                MaeGrouping grouping = {});

inline constexpr std::string_view kRecordCsvHeader =
    "setup_id,estimator,m,t,trial,n_high_true,n_low_true,n_high_est,n_low_est,"
    "abs_err_high,abs_err_low,abs_err_total,overloading_factor,runtime_us";

void write_records_csv(const std::vector<ExperimentRecord>& records, std::ostream& out);
void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
std::vector<ExperimentRecord> parse_records_csv(std::string_view text);

void write_mae_csv(const std::vector<MaeRow>& rows, std::ostream& out);
void write_mae_csv(const std::vector<MaeRow>& rows, const std::string& path);

/// x = n_low, y = MAE, one series per (estimator, T, n_high).
void write_plot_csv(const std::vector<MaeRow>& rows, std::ostream& out);
void write_plot_csv(const std::vector<MaeRow>& rows, const std::string& path);

}  // namespace rachload
