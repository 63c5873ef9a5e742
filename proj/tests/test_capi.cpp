#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "rachload/rachload.h"

TEST_CASE("profiles") {
  rl_profile* p = nullptr;
  REQUIRE(rl_profile_uniform(3, &p) == RL_OK);
  CHECK(rl_profile_size(p) == 3);
  rl_profile_destroy(p);

  const double bad[] = {0.5, 0.6};
  CHECK(rl_profile_create(bad, bad, 2, &p) == RL_ERR_INVALID_ARGUMENT);
  CHECK(std::string(rl_last_error()).size() > 0);
  CHECK(rl_profile_uniform(0, &p) == RL_ERR_INVALID_ARGUMENT);
  CHECK(rl_profile_uniform(2, nullptr) == RL_ERR_INVALID_ARGUMENT);
  CHECK(rl_profile_preset(9, &p) == RL_ERR_INVALID_ARGUMENT);

  REQUIRE(rl_profile_parse("1/2,1/2", "0.25,0.75", &p) == RL_OK);
  CHECK(rl_profile_size(p) == 2);
  rl_profile_destroy(p);
  CHECK(std::string(rl_version()).size() > 0);
}

TEST_CASE("pattern probabilities") {
  rl_profile* p = nullptr;
  REQUIRE(rl_profile_uniform(3, &p) == RL_OK);
  double lp = 0.0;
  REQUIRE(rl_pattern_log_probability("hle", 1, 1, p, RL_MODE_ML, &lp) == RL_OK);
  CHECK(std::exp(lp) == doctest::Approx(1.0 / 9).epsilon(1e-12));
  REQUIRE(rl_pattern_log_probability("hhh", 1, 0, p, RL_MODE_ML, &lp) == RL_OK);
  CHECK(std::isinf(lp));
  CHECK(rl_pattern_log_probability("hq", 1, 0, p, RL_MODE_ML, &lp) == RL_ERR_INVALID_ARGUMENT);
  CHECK(std::string(rl_last_error()).find("position") != std::string::npos);
  CHECK(rl_pattern_log_probability("hl", 1, 1, p, RL_MODE_ML, &lp) == RL_ERR_INVALID_ARGUMENT);
  rl_profile_destroy(p);
}

TEST_CASE("observations, surfaces and estimates") {
  rl_observations* obs = nullptr;
  REQUIRE(rl_observations_parse("# two slots\nxle\n\nxeh\n", &obs) == RL_OK);
  CHECK(rl_observations_count(obs) == 2);
  CHECK(rl_observations_rb_count(obs) == 3);
  size_t needed = 0;
  char tiny[4];
  REQUIRE(rl_observations_format(obs, tiny, sizeof tiny, &needed) == RL_OK);
  CHECK(needed == 8);
  std::vector<char> buf(needed + 1);
  REQUIRE(rl_observations_format(obs, buf.data(), buf.size(), &needed) == RL_OK);
  CHECK(std::string(buf.data()) == "xle\nxeh\n");

  rl_profile* p = nullptr;
  REQUIRE(rl_profile_uniform(3, &p) == RL_OK);
  rl_surface* s = nullptr;
  REQUIRE(rl_likelihood_surface(obs, p, -1, -1, RL_MODE_ML, &s) == RL_OK);
  int gh = 0, gl = 0;
  rl_surface_bounds(s, &gh, &gl);
  CHECK(gh == 9);
  CHECK(gl == 9);
  CHECK(std::string(rl_surface_warning(s)).empty());
  int nh = -1, nl = -1;
  REQUIRE(rl_surface_estimate(s, &nh, &nl) == RL_OK);
  CHECK(std::isinf(rl_surface_value(s, 0, 0)));
  int eh = -1, el = -1;
  REQUIRE(rl_estimate(obs, p, -1, -1, RL_MODE_ML, &eh, &el) == RL_OK);
  CHECK(eh == nh);
  CHECK(el == nl);
  CHECK(rl_surface_write_csv(s, "/nonexistent-dir/s.csv") == RL_ERR_IO);
  rl_surface_destroy(s);

  double ll = 0.0;
  REQUIRE(rl_sequence_log_likelihood(obs, nh, nl, p, RL_MODE_RCML, &ll) == RL_OK);
  CHECK(std::isfinite(ll));
  rl_observations_destroy(obs);
  rl_profile_destroy(p);

  CHECK(rl_observations_parse("hl\nhle\n", &obs) == RL_ERR_INVALID_ARGUMENT);
  CHECK(rl_observations_read_file("/nonexistent-dir/obs.txt", &obs) == RL_ERR_IO);
}

TEST_CASE("no feasible hypothesis maps to its status") {
  const double ph[] = {0.0, 1.0};
  const double pl[] = {0.5, 0.5};
  rl_profile* p = nullptr;
  REQUIRE(rl_profile_create(ph, pl, 2, &p) == RL_OK);
  rl_observations* obs = nullptr;
  REQUIRE(rl_observations_parse("he\n", &obs) == RL_OK);
  int nh = 0, nl = 0;
  CHECK(rl_estimate(obs, p, 3, 3, RL_MODE_ML, &nh, &nl) == RL_ERR_NO_FEASIBLE_HYPOTHESIS);
  rl_observations_destroy(obs);
  rl_profile_destroy(p);
}

TEST_CASE("simulation and oracle check") {
  rl_profile* p = nullptr;
  REQUIRE(rl_profile_preset(3, &p) == RL_OK);
  rl_observations* a = nullptr;
  rl_observations* b = nullptr;
  REQUIRE(rl_observations_simulate(p, 2, 5, 4, 9, 1, &a) == RL_OK);
  REQUIRE(rl_observations_simulate(p, 2, 5, 4, 9, 1, &b) == RL_OK);
  char x[64], y[64];
  size_t n = 0;
  rl_observations_format(a, x, sizeof x, &n);
  rl_observations_format(b, y, sizeof y, &n);
  CHECK(std::string(x) == std::string(y));
  rl_observations_destroy(a);
  rl_observations_destroy(b);
  CHECK(rl_observations_simulate(p, 2, 5, 0, 9, 1, &a) == RL_ERR_INVALID_ARGUMENT);
  rl_profile_destroy(p);

  REQUIRE(rl_profile_uniform(3, &p) == RL_OK);
  rl_oracle_report report{};
  REQUIRE(rl_oracle_check(p, 2, 2, &report) == RL_OK);
  CHECK(report.hypotheses == 9);
  CHECK(report.patterns == 9 * 64);
  CHECK(report.max_relative_error < 1e-9);
  CHECK(report.max_total_deviation < 1e-9);
  rl_profile_destroy(p);
}

TEST_CASE("experiments") {
  rl_experiment_config* c = nullptr;
  REQUIRE(rl_experiment_config_create(1, &c) == RL_OK);
  REQUIRE(rl_experiment_config_set(c, "trials", "2") == RL_OK);
  REQUIRE(rl_experiment_config_set(c, "n_low_range", "0..1") == RL_OK);
  REQUIRE(rl_experiment_config_set(c, "t", "1") == RL_OK);
  CHECK(rl_experiment_config_set(c, "bogus", "1") == RL_ERR_INVALID_ARGUMENT);
  rl_experiment_result* r = nullptr;
  REQUIRE(rl_experiment_run(c, &r) == RL_OK);
  CHECK(rl_experiment_result_record_count(r) == 2 * 2 * 2);
  CHECK(rl_experiment_result_write_records(r, "/nonexistent-dir/r.csv") == RL_ERR_IO);
  rl_experiment_result_destroy(r);
  rl_experiment_config_destroy(c);
  CHECK(rl_experiment_config_create(7, &c) == RL_ERR_INVALID_ARGUMENT);
  CHECK(rl_experiment_config_load("/nonexistent-dir/c.txt", &c) == RL_ERR_IO);
}
