#include "rachload/rachload.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "core/crosscheck.hpp"
#include "core/engine.hpp"
#include "core/error.hpp"
#include "core/estimators.hpp"
#include "core/harness.hpp"
#include "core/model.hpp"
#include "core/simulator.hpp"

struct rl_profile {
  rachload::SelectionProfile value;
};

struct rl_observations {
  rachload::ObservationSet value;
};

struct rl_surface {
  rachload::LikelihoodSurface value;
  rachload::ObservationSet obs;
};

struct rl_experiment_config {
  rachload::ExperimentConfig value;
};

struct rl_experiment_result {
  rachload::ExperimentResult value;
};

namespace {

thread_local std::string last_error;

rl_status fail(rl_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

rl_status to_status(rachload::ErrorCode code) {
  switch (code) {
    case rachload::ErrorCode::kInvalidArgument: return RL_ERR_INVALID_ARGUMENT;
    case rachload::ErrorCode::kNoFeasibleHypothesis: return RL_ERR_NO_FEASIBLE_HYPOTHESIS;
    case rachload::ErrorCode::kIo: return RL_ERR_IO;
    case rachload::ErrorCode::kBudgetExceeded: return RL_ERR_BUDGET_EXCEEDED;
  }
  return RL_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
rl_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return RL_OK;
  } catch (const rachload::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RL_ERR_INTERNAL, e.what());
  }
}

#define RL_REQUIRE(cond, what)                                   \
  do {                                                           \
    if (!(cond)) return fail(RL_ERR_INVALID_ARGUMENT, (what));   \
  } while (0)

rachload::LikelihoodMode to_mode(rl_mode mode) {
  if (mode == RL_MODE_ML) return rachload::LikelihoodMode::kFull;
  if (mode == RL_MODE_RCML) return rachload::LikelihoodMode::kReduced;
  rachload::throw_invalid("unknown estimator mode");
}

rachload::HypothesisGrid to_grid(int max_high, int max_low, std::size_t rb_count) {
  rachload::HypothesisGrid g = rachload::HypothesisGrid::defaults(rb_count);
  if (max_high >= 0) g.n_high_max = max_high;
  if (max_low >= 0) g.n_low_max = max_low;
  return g;
}

double to_double(rachload::LogProb p) {
  return p.is_zero() ? -std::numeric_limits<double>::infinity() : p.log();
}

}  // namespace

extern "C" {

const char* rl_last_error(void) { return last_error.c_str(); }

const char* rl_version(void) { return "1.0.0"; }

rl_status rl_profile_create(const double* p_high, const double* p_low, size_t m, rl_profile** out) {
  RL_REQUIRE(p_high != nullptr && p_low != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new rl_profile{rachload::SelectionProfile(std::vector<double>(p_high, p_high + m),
                                                     std::vector<double>(p_low, p_low + m))};
  });
}

rl_status rl_profile_uniform(size_t m, rl_profile** out) {
  RL_REQUIRE(out != nullptr, "null argument");
  return guarded([&] { *out = new rl_profile{rachload::SelectionProfile::uniform(m)}; });
}

rl_status rl_profile_parse(const char* p_high, const char* p_low, rl_profile** out) {
  RL_REQUIRE(p_high != nullptr && p_low != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new rl_profile{rachload::SelectionProfile(rachload::parse_probability_list(p_high),
                                                     rachload::parse_probability_list(p_low))};
  });
}

rl_status rl_profile_preset(int setup, rl_profile** out) {
  RL_REQUIRE(out != nullptr, "null argument");
  return guarded([&] { *out = new rl_profile{rachload::ExperimentConfig::preset(setup).profile()}; });
}

size_t rl_profile_size(const rl_profile* profile) { return profile ? profile->value.size() : 0; }

void rl_profile_destroy(rl_profile* profile) { delete profile; }

rl_status rl_observations_parse(const char* text, rl_observations** out) {
  RL_REQUIRE(text != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new rl_observations{rachload::parse_observations(text)}; });
}

rl_status rl_observations_read_file(const char* path, rl_observations** out) {
  RL_REQUIRE(path != nullptr && out != nullptr, "null argument");
  std::ifstream f(path, std::ios::binary);
  if (!f) return fail(RL_ERR_IO, std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  return guarded([&] {
    try {
      *out = new rl_observations{rachload::parse_observations(text)};
    } catch (const rachload::Error& e) {
      throw rachload::Error(e.code(), std::string(path) + ": " + e.what());
    }
  });
}

rl_status rl_observations_simulate(const rl_profile* profile, int n_high, int n_low, int t,
                                   uint64_t seed, uint64_t trial, rl_observations** out) {
  RL_REQUIRE(profile != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new rl_observations{rachload::sample_observations({n_high, n_low}, profile->value, t,
                                                             rachload::SimulationSeed{seed}, trial)};
  });
}

size_t rl_observations_count(const rl_observations* obs) { return obs ? obs->value.size() : 0; }

size_t rl_observations_rb_count(const rl_observations* obs) {
  return obs ? obs->value.rb_count() : 0;
}

rl_status rl_observations_format(const rl_observations* obs, char* buf, size_t capacity,
                                 size_t* needed) {
  RL_REQUIRE(obs != nullptr, "null argument");
  return guarded([&] {
    const std::string text = rachload::format_observations(obs->value);
    if (needed != nullptr) *needed = text.size();
    if (buf != nullptr && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

void rl_observations_destroy(rl_observations* obs) { delete obs; }

rl_status rl_pattern_log_probability(const char* pattern, int n_high, int n_low,
                                     const rl_profile* profile, rl_mode mode,
                                     double* out_log_prob) {
  RL_REQUIRE(pattern != nullptr && profile != nullptr && out_log_prob != nullptr, "null argument");
  return guarded([&] {
    const auto p = rachload::parse_pattern(pattern);
    const auto m = to_mode(mode);
    const rachload::LoadHypothesis hyp{n_high, n_low};
    *out_log_prob = to_double(m == rachload::LikelihoodMode::kFull
                                  ? rachload::pattern_probability(p, hyp, profile->value)
                                  : rachload::rcml_pattern_probability(p, hyp, profile->value));
  });
}

rl_status rl_sequence_log_likelihood(const rl_observations* obs, int n_high, int n_low,
                                     const rl_profile* profile, rl_mode mode,
                                     double* out_log_likelihood) {
  RL_REQUIRE(obs != nullptr && profile != nullptr && out_log_likelihood != nullptr,
             "null argument");
  return guarded([&] {
    if (obs->value.rb_count() != profile->value.size()) {
      rachload::throw_invalid("observations and selection profile differ in RB count");
    }
    *out_log_likelihood = to_double(rachload::sequence_log_likelihood(
        obs->value, {n_high, n_low}, profile->value, to_mode(mode)));
  });
}

rl_status rl_likelihood_surface(const rl_observations* obs, const rl_profile* profile,
                                int grid_max_high, int grid_max_low, rl_mode mode,
                                rl_surface** out) {
  RL_REQUIRE(obs != nullptr && profile != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const auto grid = to_grid(grid_max_high, grid_max_low, profile->value.size());
    *out = new rl_surface{
        rachload::likelihood_surface(obs->value, profile->value, grid, to_mode(mode)), obs->value};
  });
}

rl_status rl_surface_estimate(const rl_surface* surface, int* n_high, int* n_low) {
  RL_REQUIRE(surface != nullptr && n_high != nullptr && n_low != nullptr, "null argument");
  return guarded([&] {
    const auto est = rachload::select_estimate(surface->value, surface->obs);
    *n_high = est.n_high;
    *n_low = est.n_low;
  });
}

void rl_surface_bounds(const rl_surface* surface, int* grid_max_high, int* grid_max_low) {
  if (surface == nullptr) return;
  if (grid_max_high != nullptr) *grid_max_high = surface->value.grid().n_high_max;
  if (grid_max_low != nullptr) *grid_max_low = surface->value.grid().n_low_max;
}

double rl_surface_value(const rl_surface* surface, int n_high, int n_low) {
  if (surface == nullptr) return std::numeric_limits<double>::quiet_NaN();
  const auto& g = surface->value.grid();
  if (n_high < 0 || n_low < 0 || n_high > g.n_high_max || n_low > g.n_low_max) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return to_double(surface->value.at(n_high, n_low));
}

const char* rl_surface_warning(const rl_surface* surface) {
  return surface ? surface->value.warning().c_str() : "";
}

rl_status rl_surface_write_csv(const rl_surface* surface, const char* path) {
  RL_REQUIRE(surface != nullptr && path != nullptr, "null argument");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return fail(RL_ERR_IO, std::string("cannot open '") + path + "' for writing");
  return guarded([&] {
    rachload::write_surface_csv(surface->value, f);
    f.flush();
    if (!f) throw rachload::Error(rachload::ErrorCode::kIo, std::string("write to '") + path + "' failed");
  });
}

void rl_surface_destroy(rl_surface* surface) { delete surface; }

rl_status rl_estimate(const rl_observations* obs, const rl_profile* profile, int grid_max_high,
                      int grid_max_low, rl_mode mode, int* n_high, int* n_low) {
  RL_REQUIRE(obs != nullptr && profile != nullptr && n_high != nullptr && n_low != nullptr,
             "null argument");
  return guarded([&] {
    const auto grid = to_grid(grid_max_high, grid_max_low, profile->value.size());
    const auto est = rachload::estimate(obs->value, profile->value, grid, to_mode(mode));
    *n_high = est.n_high;
    *n_low = est.n_low;
  });
}

rl_status rl_oracle_check(const rl_profile* profile, int max_n_high, int max_n_low,
                          rl_oracle_report* report) {
  RL_REQUIRE(profile != nullptr && report != nullptr, "null argument");
  return guarded([&] {
    const auto r = rachload::cross_check_engine(profile->value, max_n_high, max_n_low);
    report->hypotheses = r.hypotheses;
    report->patterns = r.patterns;
    report->max_relative_error = r.max_relative_error;
    report->max_total_deviation = r.max_total_deviation;
  });
}

rl_status rl_experiment_config_create(int setup, rl_experiment_config** out) {
  RL_REQUIRE(out != nullptr, "null argument");
  return guarded([&] {
    *out = new rl_experiment_config{setup == 0 ? rachload::ExperimentConfig{}
                                               : rachload::ExperimentConfig::preset(setup)};
  });
}

rl_status rl_experiment_config_load(const char* path, rl_experiment_config** out) {
  RL_REQUIRE(path != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new rl_experiment_config{rachload::load_config(path)}; });
}

rl_status rl_experiment_config_set(rl_experiment_config* config, const char* key,
                                   const char* value) {
  RL_REQUIRE(config != nullptr && key != nullptr && value != nullptr, "null argument");
  return guarded([&] { rachload::apply_setting(config->value, key, value); });
}

const char* rl_experiment_config_out(const rl_experiment_config* config) {
  return config ? config->value.out.c_str() : "";
}

void rl_experiment_config_destroy(rl_experiment_config* config) { delete config; }

rl_status rl_experiment_run(const rl_experiment_config* config, rl_experiment_result** out) {
  RL_REQUIRE(config != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new rl_experiment_result{rachload::run_setup(config->value)}; });
}

size_t rl_experiment_result_record_count(const rl_experiment_result* result) {
  return result ? result->value.records.size() : 0;
}

rl_status rl_experiment_result_write_records(const rl_experiment_result* result, const char* path) {
  RL_REQUIRE(result != nullptr && path != nullptr, "null argument");
  return guarded([&] { rachload::write_records_csv(result->value.records, std::string(path)); });
}

rl_status rl_experiment_result_write_mae(const rl_experiment_result* result, const char* path) {
  RL_REQUIRE(result != nullptr && path != nullptr, "null argument");
  return guarded([&] { rachload::write_mae_csv(result->value.mae, std::string(path)); });
}

rl_status rl_experiment_result_write_plot(const rl_experiment_result* result, const char* path) {
  RL_REQUIRE(result != nullptr && path != nullptr, "null argument");
  return guarded([&] { rachload::write_plot_csv(result->value.mae, std::string(path)); });
}

void rl_experiment_result_destroy(rl_experiment_result* result) { delete result; }

}  // extern "C"
