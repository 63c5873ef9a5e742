// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 usage error, 2 no feasible hypothesis (or a failed
// oracle check), 3 I/O error.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rachload/rachload.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

int exit_code_for(rl_status s) {
  switch (s) {
    case RL_OK: return kExitOk;
    case RL_ERR_NO_FEASIBLE_HYPOTHESIS: return kExitInfeasible;
    case RL_ERR_IO: return kExitIo;
    default: return kExitUsage;
  }
}

struct CliFailure {
  int code;
};

void check(rl_status s) {
  if (s != RL_OK) {
    std::cerr << "error: " << rl_last_error() << '\n';
    throw CliFailure{exit_code_for(s)};
  }
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ProfilePtr = std::unique_ptr<rl_profile, Deleter<rl_profile, rl_profile_destroy>>;
using ObsPtr = std::unique_ptr<rl_observations, Deleter<rl_observations, rl_observations_destroy>>;
using SurfacePtr = std::unique_ptr<rl_surface, Deleter<rl_surface, rl_surface_destroy>>;
using ConfigPtr =
    std::unique_ptr<rl_experiment_config, Deleter<rl_experiment_config, rl_experiment_config_destroy>>;
using ResultPtr =
    std::unique_ptr<rl_experiment_result, Deleter<rl_experiment_result, rl_experiment_result_destroy>>;

struct ProfileOptions {
  std::optional<int> setup;
  std::optional<int> m;
  std::string p_high;
  std::string p_low;

  void add_to(CLI::App* app) {
    app->add_option("--setup", setup, "Preset profile of setup 1, 2 or 3 (M = 6)")
        ->check(CLI::Range(1, 3));
    app->add_option("--m", m, "RB count for uniform profiles")->check(CLI::PositiveNumber);
    app->add_option("--p-high", p_high, "H-UE selection probabilities, comma-separated");
    app->add_option("--p-low", p_low, "L-UE selection probabilities, comma-separated");
  }

  ProfilePtr build() const {
    rl_profile* raw = nullptr;
    if (p_high.empty() && p_low.empty()) {
      if (setup) {
        check(rl_profile_preset(*setup, &raw));
      } else {
        check(rl_profile_uniform(static_cast<size_t>(m.value_or(6)), &raw));
      }
      return ProfilePtr(raw);
    }
    std::string high = p_high;
    std::string low = p_low;
    if (high.empty() || low.empty()) {
      // The missing class defaults to uniform over the same RBs.
      const std::string& given = high.empty() ? low : high;
      const auto count = static_cast<size_t>(std::count(given.begin(), given.end(), ',') + 1);
      std::string uniform;
      for (size_t i = 0; i < count; ++i) uniform += (i ? ",1/" : "1/") + std::to_string(count);
      (high.empty() ? high : low) = uniform;
    }
    check(rl_profile_parse(high.c_str(), low.c_str(), &raw));
    ProfilePtr profile(raw);
    if (m && static_cast<size_t>(*m) != rl_profile_size(profile.get())) {
      std::cerr << "error: --m " << *m << " does not match the " << rl_profile_size(profile.get())
                << " probabilities given\n";
      throw CliFailure{kExitUsage};
    }
    return profile;
  }
};

rl_mode parse_mode(const std::string& name) { return name == "rcml" ? RL_MODE_RCML : RL_MODE_ML; }

std::string observations_text(const rl_observations* obs) {
  size_t needed = 0;
  check(rl_observations_format(obs, nullptr, 0, &needed));
  std::string text(needed + 1, '\0');
  check(rl_observations_format(obs, text.data(), text.size(), &needed));
  text.resize(needed);
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Load estimation for a two-priority random access channel.\n"
               "Patterns use one character per RB: h (single H-UE), l (single L-UE), "
               "e (empty), x (collision); RB 0 first."};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Sample T access patterns, one per line");
  ProfileOptions sim_profile;
  sim_profile.add_to(simulate);
  int sim_n_high = 0;
  int sim_n_low = 0;
  int sim_t = 1;
  uint64_t sim_seed = 1;
  uint64_t sim_trial = 0;
  std::string sim_out;
  simulate->add_option("--n-high", sim_n_high, "True number of H-UEs")->required()->check(CLI::NonNegativeNumber);
  simulate->add_option("--n-low", sim_n_low, "True number of L-UEs")->required()->check(CLI::NonNegativeNumber);
  simulate->add_option("--t", sim_t, "Number of slots")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Base seed");
  simulate->add_option("--trial", sim_trial, "Trial index (selects the substream)");
  simulate->add_option("--out", sim_out, "Output file (default stdout)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate (n_high, n_low) from observed patterns");
  ProfileOptions est_profile;
  est_profile.add_to(estimate);
  std::string est_input = "-";
  std::string est_estimator = "ml";
  int est_grid_high = -1;
  int est_grid_low = -1;
  std::string est_surface_out;
  estimate->add_option("--input,-i", est_input, "Pattern file, '-' for stdin");
  estimate->add_option("--estimator", est_estimator, "ml or rcml")->check(CLI::IsMember({"ml", "rcml"}));
  estimate->add_option("--grid-max-high", est_grid_high, "Largest n_high considered (default 3M)");
  estimate->add_option("--grid-max-low", est_grid_low, "Largest n_low considered (default 3M)");
  estimate->add_option("--surface-out", est_surface_out, "Write the log-likelihood surface as CSV");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  std::string exp_config;
  std::optional<std::string> exp_setup;
  struct Override {
    std::string name;
    std::string help;
    std::optional<std::string> value;
  };
  std::vector<Override> exp_overrides = {
      {"m", "RB count (resets profiles to uniform if their length differs)", {}},
      {"t", "Comma-separated list of T values", {}},
      {"n-high", "Comma-separated list of true n_high values", {}},
      {"n-low-range", "Inclusive n_low range, e.g. 0..7", {}},
      {"p-high", "H-UE selection probabilities, comma-separated", {}},
      {"p-low", "L-UE selection probabilities, comma-separated", {}},
      {"trials", "Monte Carlo trials per point", {}},
      {"seed", "Base seed", {}},
      {"estimator", "ml, rcml or both", {}},
      {"grid-max-high", "Largest n_high considered (default 3M)", {}},
      {"grid-max-low", "Largest n_low considered (default 3M)", {}},
      {"out", "Per-trial record CSV", {}},
      {"threads", "Worker threads (0 = all cores)", {}}};
  std::string exp_mae_out;
  std::string exp_plot_out;
  experiment->add_option("--config", exp_config, "Configuration file (key = value lines)");
  experiment->add_option("--setup", exp_setup, "Preset 1, 2, 3 or custom");
  for (auto& o : exp_overrides) experiment->add_option("--" + o.name, o.value, o.help);
  experiment->add_option("--mae-out", exp_mae_out, "Write the MAE summary CSV");
  experiment->add_option("--plot-out", exp_plot_out, "Write plot data (x = n_low, y = MAE)");

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "Compare the engine with brute-force enumeration");
  ProfileOptions oracle_profile;
  oracle_profile.add_to(oracle);
  int oracle_max_high = 3;
  int oracle_max_low = 3;
  double oracle_tolerance = 1e-9;
  oracle->add_option("--max-n-high", oracle_max_high, "Largest n_high checked")->check(CLI::NonNegativeNumber);
  oracle->add_option("--max-n-low", oracle_max_low, "Largest n_low checked")->check(CLI::NonNegativeNumber);
  oracle->add_option("--tolerance", oracle_tolerance, "Relative tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      const ProfilePtr profile = sim_profile.build();
      rl_observations* raw = nullptr;
      check(rl_observations_simulate(profile.get(), sim_n_high, sim_n_low, sim_t, sim_seed,
                                     sim_trial, &raw));
      const ObsPtr obs(raw);
      const std::string text = observations_text(obs.get());
      if (sim_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(sim_out, std::ios::binary | std::ios::trunc);
        if (!(f << text)) {
          std::cerr << "error: cannot write '" << sim_out << "'\n";
          return kExitIo;
        }
      }
    } else if (estimate->parsed()) {
      const ProfilePtr profile = est_profile.build();
      rl_observations* raw = nullptr;
      if (est_input == "-") {
        const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
        check(rl_observations_parse(text.c_str(), &raw));
      } else {
        check(rl_observations_read_file(est_input.c_str(), &raw));
      }
      const ObsPtr obs(raw);
      rl_surface* surface_raw = nullptr;
      check(rl_likelihood_surface(obs.get(), profile.get(), est_grid_high, est_grid_low,
                                  parse_mode(est_estimator), &surface_raw));
      const SurfacePtr surface(surface_raw);
      if (const std::string warning = rl_surface_warning(surface.get()); !warning.empty()) {
        std::cerr << "warning: " << warning << '\n';
      }
      if (!est_surface_out.empty()) check(rl_surface_write_csv(surface.get(), est_surface_out.c_str()));
      int n_high = 0;
      int n_low = 0;
      check(rl_surface_estimate(surface.get(), &n_high, &n_low));
      std::cout << "n_high=" << n_high << " n_low=" << n_low << '\n';
    } else if (experiment->parsed()) {
      rl_experiment_config* raw = nullptr;
      if (!exp_config.empty()) {
        check(rl_experiment_config_load(exp_config.c_str(), &raw));
      } else {
        check(rl_experiment_config_create(0, &raw));
      }
      const ConfigPtr config(raw);
      // Flags override the file; --setup goes first since it resets the config.
      if (exp_setup) check(rl_experiment_config_set(config.get(), "setup", exp_setup->c_str()));
      for (const auto& o : exp_overrides) {
        if (o.value) check(rl_experiment_config_set(config.get(), o.name.c_str(), o.value->c_str()));
      }
      rl_experiment_result* result_raw = nullptr;
      check(rl_experiment_run(config.get(), &result_raw));
      const ResultPtr result(result_raw);
      const std::string out = rl_experiment_config_out(config.get());
      if (out.empty()) {
        std::cerr << "note: no --out given; records not written\n";
      } else {
        check(rl_experiment_result_write_records(result.get(), out.c_str()));
      }
      if (!exp_mae_out.empty()) check(rl_experiment_result_write_mae(result.get(), exp_mae_out.c_str()));
      if (!exp_plot_out.empty()) check(rl_experiment_result_write_plot(result.get(), exp_plot_out.c_str()));
      std::cout << rl_experiment_result_record_count(result.get()) << " records\n";
    } else if (oracle->parsed()) {
      const ProfilePtr profile = oracle_profile.build();
      rl_oracle_report report{};
      check(rl_oracle_check(profile.get(), oracle_max_high, oracle_max_low, &report));
      const bool ok = report.max_relative_error <= oracle_tolerance &&
                      report.max_total_deviation <= oracle_tolerance;
      std::printf("hypotheses=%llu patterns=%llu max_relative_error=%.3e max_total_deviation=%.3e %s\n",
                  static_cast<unsigned long long>(report.hypotheses),
                  static_cast<unsigned long long>(report.patterns), report.max_relative_error,
                  report.max_total_deviation, ok ? "PASS" : "FAIL");
      return ok ? kExitOk : kExitInfeasible;
    }
  } catch (const CliFailure& f) {
    return f.code;
  }
  return kExitOk;
}
