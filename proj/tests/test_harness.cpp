#include <cmath>
#include <numeric>
#include <sstream>

#include "core/error.hpp"
#include "core/harness.hpp"
#include "doctest.h"

using namespace rachload;

namespace {

ExperimentRecord record(std::string estimator, int nh, int nl, int t, int eh, int el) {
  ExperimentRecord r;
  r.setup_id = "custom";
  r.estimator = std::move(estimator);
  r.m = 6;
  r.t = t;
  r.n_high_true = nh;
  r.n_low_true = nl;
  r.n_high_est = nh + eh;
  r.n_low_est = nl + el;
  r.abs_err_high = std::abs(eh);
  r.abs_err_low = std::abs(el);
  r.abs_err_total = r.abs_err_high + r.abs_err_low;
  r.overloading_factor = (nh + nl) / 6.0;
  return r;
}

ExperimentConfig small_config() {
  ExperimentConfig c = ExperimentConfig::preset(3);
  c.t_values = {1, 3};
  c.n_low_min = 2;
  c.n_low_max = 4;
  c.trials = 6;
  c.seed = 77;
  return c;
}

std::string strip_runtime(const std::vector<ExperimentRecord>& records) {
  auto copy = records;
  for (auto& r : copy) r.runtime_us = 0.0;
  std::ostringstream os;
  write_records_csv(copy, os);
  return os.str();
}

}  // namespace

TEST_CASE("presets") {
  for (int s = 1; s <= 3; ++s) {
    const auto c = ExperimentConfig::preset(s);
    CHECK(c.setup_id == std::to_string(s));
    CHECK(c.m == 6);
    CHECK(c.t_values == std::vector<int>{1, 3, 10});
    CHECK(c.n_low_min == 0);
    CHECK(c.n_low_max == 7);
    CHECK(std::accumulate(c.p_high.begin(), c.p_high.end(), 0.0) == doctest::Approx(1.0));
    CHECK(std::accumulate(c.p_low.begin(), c.p_low.end(), 0.0) == doctest::Approx(1.0));
    CHECK_NOTHROW(c.validate());
  }
  CHECK(ExperimentConfig::preset(1).n_high_values == std::vector<int>{2});
  CHECK(ExperimentConfig::preset(2).p_low[3] == 0.0);
  CHECK(ExperimentConfig::preset(3).p_high[5] == doctest::Approx(0.25));
  CHECK(ExperimentConfig::preset(3).p_low[0] == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(ExperimentConfig::preset(4), Error);
}

TEST_CASE("MAE arithmetic") {
  const std::vector<ExperimentRecord> exact = {record("ml", 2, 3, 1, 0, 0), record("ml", 2, 3, 1, 0, 0)};
  const auto zero = compute_mae(exact);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].mae_total == 0.0);
  CHECK(zero[0].count == 2);

  const std::vector<ExperimentRecord> off = {record("ml", 2, 3, 1, 1, 0), record("ml", 2, 3, 1, 0, -1)};
  const auto one = compute_mae(off);
  REQUIRE(one.size() == 1);
  CHECK(one[0].mae_total == 1.0);
  CHECK(one[0].mae_high == 0.5);
  CHECK(one[0].mae_low == 0.5);

  std::vector<ExperimentRecord> mixed = off;
  mixed.push_back(record("rcml", 2, 3, 1, 2, 2));
  mixed.push_back(record("ml", 2, 4, 1, 0, 3));
  CHECK(compute_mae(mixed).size() == 3);
  MaeGrouping by_estimator{true, false, false, false};
  const auto rows = compute_mae(mixed, by_estimator);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].estimator == "ml");
  CHECK(rows[0].n_low == -1);
  CHECK(rows[0].mae_total == doctest::Approx(5.0 / 3));
  CHECK(rows[1].mae_total == 4.0);

  CHECK_THROWS_AS(compute_mae({}), Error);
}

TEST_CASE("record CSV") {
  std::ostringstream empty;
  write_records_csv({}, empty);
  CHECK(empty.str() == std::string(kRecordCsvHeader) + "\n");
  CHECK(parse_records_csv(empty.str()).empty());

  std::vector<ExperimentRecord> rs = {record("ml", 1, 5, 10, -1, 2), record("rcml", 0, 0, 1, 0, 0)};
  rs[0].runtime_us = 123.456;
  rs[1].trial = 3;
  std::ostringstream os;
  write_records_csv(rs, os);
  CHECK(parse_records_csv(os.str()) == rs);
  CHECK_THROWS_AS(parse_records_csv("bad header\n"), Error);
  CHECK_THROWS_AS(parse_records_csv(std::string(kRecordCsvHeader) + "\n1,2,3\n"), Error);
}

TEST_CASE("MAE and plot CSV") {
  const std::vector<ExperimentRecord> rs = {record("ml", 2, 3, 1, 1, 0), record("ml", 2, 4, 1, 0, 0)};
  const auto rows = compute_mae(rs);
  std::ostringstream mae;
  write_mae_csv(rows, mae);
  CHECK(mae.str().rfind("estimator,n_high,n_low,t,count,mae_total,mae_high,mae_low\n", 0) == 0);
  CHECK(mae.str().find("ml,2,3,1,1,1,1,0") != std::string::npos);
  std::ostringstream plot;
  write_plot_csv(rows, plot);
  const std::string text = plot.str();
  CHECK(text.rfind("series,estimator,t,n_high,x,y\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("config text") {
  const auto c = parse_config(
      "# sweep\n"
      "trials = 7\n"
      "setup = 2\n"
      "n-low-range = 1..3   # inclusive\n"
      "estimator = rcml\n"
      "grid_max_high = 5\n"
      "\n"
      "t = 1, 10\n");
  CHECK(c.setup_id == "2");
  CHECK(c.trials == 7);
  CHECK(c.n_low_min == 1);
  CHECK(c.n_low_max == 3);
  CHECK(c.estimators == std::vector<LikelihoodMode>{LikelihoodMode::kReduced});
  CHECK(c.effective_grid() == HypothesisGrid{5, 18});
  CHECK(c.t_values == std::vector<int>{1, 10});

  ExperimentConfig d;
  apply_setting(d, "p_high", "1/4, 1/4, 1/2");
  apply_setting(d, "p-low", "0.5,0.5,0");
  CHECK(d.m == 3);
  CHECK_NOTHROW(d.validate());
  apply_setting(d, "m", "4");
  CHECK(d.p_high == std::vector<double>(4, 0.25));
  apply_setting(d, "n_low_range", "2:5");
  CHECK(d.n_low_max == 5);

  CHECK_THROWS_AS(apply_setting(d, "colour", "blue"), Error);
  CHECK_THROWS_AS(apply_setting(d, "estimator", "map"), Error);
  CHECK_THROWS_AS(apply_setting(d, "trials", "many"), Error);
  try {
    parse_config("trials = 3\nnot a setting\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(parse_probability_list("1/3,2/3")[1] == doctest::Approx(2.0 / 3));
}

TEST_CASE("validation") {
  auto c = small_config();
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_config();
  c.n_low_min = 5;
  CHECK_THROWS_AS(run_setup(c), Error);
  c = small_config();
  c.p_low.pop_back();
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("run_setup shape and determinism") {
  auto c = small_config();
  c.threads = 1;
  const auto a = run_setup(c);
  CHECK(a.records.size() == 2u * 3u * 2u * 6u * 2u);
  CHECK(a.mae.size() == 2u * 3u * 2u * 2u);
  for (const auto& r : a.records) {
    CHECK(r.abs_err_total == std::abs(r.n_high_est - r.n_high_true) + std::abs(r.n_low_est - r.n_low_true));
    CHECK(r.overloading_factor == doctest::Approx((r.n_high_true + r.n_low_true) / 6.0));
    CHECK(r.runtime_us >= 0.0);
  }
  c.threads = 3;
  const auto b = run_setup(c);
  CHECK(strip_runtime(a.records) == strip_runtime(b.records));
  c.seed = 78;
  CHECK(strip_runtime(run_setup(c).records) != strip_runtime(a.records));
}

TEST_CASE("I/O failures") {
  const std::vector<ExperimentRecord> rs = {record("ml", 1, 1, 1, 0, 0)};
  try {
    write_records_csv(rs, std::string("/nonexistent-dir/records.csv"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
    CHECK(std::string(e.what()).find("/nonexistent-dir/records.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent-dir/cfg.txt"), Error);
}
