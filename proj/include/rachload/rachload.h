/*
 * rachload: load estimation for a two-priority random access channel.
 *
 * C interface over opaque handles. Every fallible call returns an rl_status;
 * on failure rl_last_error() returns a message describing the most recent
 * error on the calling thread. Handles are immutable once created and may be
 * shared across threads, except rl_experiment_config which is not
 * synchronized.
 *
 * Access patterns are ASCII strings over {h, l, e, x}: single H-UE, single
 * L-UE, empty, collision. RB 0 is the first character.
 */
#ifndef RACHLOAD_RACHLOAD_H_
#define RACHLOAD_RACHLOAD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RACHLOAD_BUILDING)
#    define RL_API __declspec(dllexport)
#  else
#    define RL_API __declspec(dllimport)
#  endif
#else
#  define RL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rl_status {
  RL_OK = 0,
  RL_ERR_INVALID_ARGUMENT = 1,
  RL_ERR_NO_FEASIBLE_HYPOTHESIS = 2,
  RL_ERR_IO = 3,
  RL_ERR_BUDGET_EXCEEDED = 4,
  RL_ERR_INTERNAL = 5
} rl_status;

typedef enum rl_mode {
  RL_MODE_ML = 0,   /* full pattern probability */
  RL_MODE_RCML = 1  /* collision factor dropped */
} rl_mode;

typedef struct rl_profile rl_profile;
typedef struct rl_observations rl_observations;
typedef struct rl_surface rl_surface;
typedef struct rl_experiment_config rl_experiment_config;
typedef struct rl_experiment_result rl_experiment_result;

RL_API const char* rl_last_error(void);
RL_API const char* rl_version(void);

/* ---- selection profiles ---------------------------------------------- */

RL_API rl_status rl_profile_create(const double* p_high, const double* p_low, size_t m,
                                   rl_profile** out);
RL_API rl_status rl_profile_uniform(size_t m, rl_profile** out);
/* Comma-separated probabilities; "a/b" fractions are accepted. */
RL_API rl_status rl_profile_parse(const char* p_high, const char* p_low, rl_profile** out);
/* Setups 1, 2, 3 (M = 6). */
RL_API rl_status rl_profile_preset(int setup, rl_profile** out);
RL_API size_t rl_profile_size(const rl_profile* profile);
RL_API void rl_profile_destroy(rl_profile* profile);

/* ---- observations ---------------------------------------------------- */

/* One pattern per line; blank lines and '#' comments are skipped. */
RL_API rl_status rl_observations_parse(const char* text, rl_observations** out);
RL_API rl_status rl_observations_read_file(const char* path, rl_observations** out);
/* T slots for one trial; deterministic in (seed, trial). */
RL_API rl_status rl_observations_simulate(const rl_profile* profile, int n_high, int n_low,
                                          int t, uint64_t seed, uint64_t trial,
                                          rl_observations** out);
RL_API size_t rl_observations_count(const rl_observations* obs);
RL_API size_t rl_observations_rb_count(const rl_observations* obs);
/* Writes the newline-terminated text form into buf (NUL-terminated when
 * capacity allows) and the required size excluding the NUL into *needed. */
RL_API rl_status rl_observations_format(const rl_observations* obs, char* buf, size_t capacity,
                                        size_t* needed);
RL_API void rl_observations_destroy(rl_observations* obs);

/* ---- probabilities --------------------------------------------------- */

/* Natural log of the pattern probability; -INFINITY for probability zero. */
RL_API rl_status rl_pattern_log_probability(const char* pattern, int n_high, int n_low,
                                            const rl_profile* profile, rl_mode mode,
                                            double* out_log_prob);
RL_API rl_status rl_sequence_log_likelihood(const rl_observations* obs, int n_high, int n_low,
                                            const rl_profile* profile, rl_mode mode,
                                            double* out_log_likelihood);

/* ---- estimation ------------------------------------------------------ */

/* Negative grid bounds select the default of 3M. The grid is widened when it
 * cannot hold any hypothesis consistent with the observations. */
RL_API rl_status rl_likelihood_surface(const rl_observations* obs, const rl_profile* profile,
                                       int grid_max_high, int grid_max_low, rl_mode mode,
                                       rl_surface** out);
/* Maximizer; ties go to the smallest n_high + n_low, then smallest n_high. */
RL_API rl_status rl_surface_estimate(const rl_surface* surface, int* n_high, int* n_low);
RL_API void rl_surface_bounds(const rl_surface* surface, int* grid_max_high, int* grid_max_low);
RL_API double rl_surface_value(const rl_surface* surface, int n_high, int n_low);
/* Empty string unless the grid was widened. */
RL_API const char* rl_surface_warning(const rl_surface* surface);
/* Rows n_high, columns n_low, "-inf" for probability zero. */
RL_API rl_status rl_surface_write_csv(const rl_surface* surface, const char* path);
RL_API void rl_surface_destroy(rl_surface* surface);

RL_API rl_status rl_estimate(const rl_observations* obs, const rl_profile* profile,
                             int grid_max_high, int grid_max_low, rl_mode mode, int* n_high,
                             int* n_low);

/* ---- oracle cross-check ---------------------------------------------- */

typedef struct rl_oracle_report {
  uint64_t hypotheses;          /* (n_high, n_low) pairs checked */
  uint64_t patterns;            /* pattern evaluations compared */
  double max_relative_error;    /* |engine - oracle| / max(oracle, 1e-300) */
  double max_total_deviation;   /* |sum over patterns of engine probability - 1| */
} rl_oracle_report;

/* Compares the engine with brute-force enumeration for every pattern over
 * the profile's RBs and every hypothesis up to the given counts. */
RL_API rl_status rl_oracle_check(const rl_profile* profile, int max_n_high, int max_n_low,
                                 rl_oracle_report* report);

/* ---- experiments ----------------------------------------------------- */

/* Presets 1-3 or 0 for a custom config (M = 6, uniform). */
RL_API rl_status rl_experiment_config_create(int setup, rl_experiment_config** out);
RL_API rl_status rl_experiment_config_load(const char* path, rl_experiment_config** out);
/* Keys: setup, m, t, n_high, n_low_range, p_high, p_low, trials, seed,
 * estimator, grid_max_high, grid_max_low, out, threads ('-' or '_'). */
RL_API rl_status rl_experiment_config_set(rl_experiment_config* config, const char* key,
                                          const char* value);
/* Output path from the config ("out" key); empty when unset. */
RL_API const char* rl_experiment_config_out(const rl_experiment_config* config);
RL_API void rl_experiment_config_destroy(rl_experiment_config* config);

RL_API rl_status rl_experiment_run(const rl_experiment_config* config, rl_experiment_result** out);
RL_API size_t rl_experiment_result_record_count(const rl_experiment_result* result);
RL_API rl_status rl_experiment_result_write_records(const rl_experiment_result* result,
                                                    const char* path);
RL_API rl_status rl_experiment_result_write_mae(const rl_experiment_result* result,
                                                const char* path);
RL_API rl_status rl_experiment_result_write_plot(const rl_experiment_result* result,
                                                 const char* path);
RL_API void rl_experiment_result_destroy(rl_experiment_result* result);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RACHLOAD_RACHLOAD_H_ */
