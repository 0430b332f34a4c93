/* ewlab - exponential-weights game dynamics laboratory.
 *
 * C interface to the simulation core. Objects are opaque handles; every
 * fallible call returns an ewlab_status and writes results through out
 * parameters. Mixed profiles travel as doubles concatenated player by
 * player (length = sum of the action counts); pure profiles as one action
 * index per player.
 */
#ifndef EWLAB_H
#define EWLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef EWLAB_API
#define EWLAB_API
#endif

typedef enum ewlab_status {
  EWLAB_OK = 0,
  EWLAB_ERR_IO = 1,
  EWLAB_ERR_PARSE = 2,
  EWLAB_ERR_INVALID_ARGUMENT = 3,
  EWLAB_ERR_UNSUPPORTED = 4,
  EWLAB_ERR_NUMERIC = 5
} ewlab_status;

/* Message for the most recent failure on this thread. */
EWLAB_API const char* ewlab_last_error(void);

typedef struct ewlab_game ewlab_game;
typedef struct ewlab_trajectory ewlab_trajectory;
typedef struct ewlab_experiment ewlab_experiment;
typedef struct ewlab_basin ewlab_basin;
typedef struct ewlab_neep_set ewlab_neep_set;

/* ---- games ------------------------------------------------------------ */

EWLAB_API ewlab_status ewlab_game_load(const char* path, ewlab_game** out);
EWLAB_API ewlab_status ewlab_game_parse(const char* json_text, ewlab_game** out);
EWLAB_API void ewlab_game_free(ewlab_game* game);
EWLAB_API int32_t ewlab_game_players(const ewlab_game* game);
EWLAB_API int32_t ewlab_game_action_count(const ewlab_game* game, int32_t player);
EWLAB_API const char* ewlab_game_action_label(const ewlab_game* game, int32_t player,
                                              int32_t action);
/* length of a flattened mixed profile */
EWLAB_API int32_t ewlab_game_profile_size(const ewlab_game* game);
EWLAB_API ewlab_status ewlab_game_payoff(const ewlab_game* game, int32_t player,
                                         const int32_t* profile, double* out);
EWLAB_API int32_t ewlab_game_is_exa7(const ewlab_game* game);

/* ---- equilibria --------------------------------------------------------- */

EWLAB_API ewlab_status ewlab_expected_payoff(const ewlab_game* game,
                                             const double* profile, int32_t player,
                                             double* out);
EWLAB_API ewlab_status ewlab_strict_nash_count(const ewlab_game* game, int32_t* count);
EWLAB_API ewlab_status ewlab_strict_nash_get(const ewlab_game* game, int32_t index,
                                             int32_t* actions);
EWLAB_API ewlab_status ewlab_is_nash(const ewlab_game* game, const double* profile,
                                     double tol, int32_t* out);
EWLAB_API ewlab_status ewlab_is_neep(const ewlab_game* game, const double* profile,
                                     double tol, int32_t* out);
EWLAB_API ewlab_status ewlab_is_strong_coordination(const ewlab_game* game,
                                                    int32_t* out);

EWLAB_API ewlab_status ewlab_neep_enumerate_2p(const ewlab_game* game, double tol,
                                               ewlab_neep_set** out);
EWLAB_API void ewlab_neep_set_free(ewlab_neep_set* set);
EWLAB_API int32_t ewlab_neep_component_count(const ewlab_neep_set* set);
/* kind: 0 point, 1 segment, 2 polytope */
EWLAB_API ewlab_status ewlab_neep_component_info(const ewlab_neep_set* set,
                                                 int32_t index, int32_t* kind,
                                                 int32_t* dimension,
                                                 int32_t* vertex_count);
EWLAB_API ewlab_status ewlab_neep_component_vertex(const ewlab_neep_set* set,
                                                   int32_t index, int32_t vertex,
                                                   double* profile);
EWLAB_API const char* ewlab_neep_component_describe(const ewlab_neep_set* set,
                                                    int32_t index);

/* ---- simulation --------------------------------------------------------- */

typedef struct ewlab_stop_rule {
  int32_t kind; /* 0 = fixed horizon, 1 = absorption with horizon fallback */
  int64_t t_max; /* 0 = no horizon (absorption only) */
  double eps;    /* sup-norm absorption tolerance */
} ewlab_stop_rule;

EWLAB_API ewlab_status ewlab_simulate(const ewlab_game* game, const double* p0,
                                      const double* etas, uint64_t seed,
                                      const ewlab_stop_rule* stop,
                                      ewlab_trajectory** out);
EWLAB_API void ewlab_trajectory_free(ewlab_trajectory* traj);
EWLAB_API int64_t ewlab_trajectory_steps(const ewlab_trajectory* traj);
/* 0 = absorbed, 1 = horizon reached */
EWLAB_API int32_t ewlab_trajectory_stop_reason(const ewlab_trajectory* traj);
EWLAB_API ewlab_status ewlab_trajectory_absorbed_at(const ewlab_trajectory* traj,
                                                    int32_t* actions);
EWLAB_API ewlab_status ewlab_trajectory_terminal(const ewlab_trajectory* traj,
                                                 double* profile);
EWLAB_API ewlab_status ewlab_trajectory_action(const ewlab_trajectory* traj,
                                               int64_t stage, int32_t* actions);
EWLAB_API ewlab_status ewlab_trajectory_write_csv(const ewlab_trajectory* traj,
                                                  const char* path);

EWLAB_API ewlab_status ewlab_closed_form_profile(const ewlab_game* game,
                                                 const double* p0, const double* etas,
                                                 const int32_t* history, int64_t steps,
                                                 double* profile_out);

typedef struct ewlab_verdict {
  int32_t kind; /* 0 absorbed, 1 approaching_z, 2 converged_to, 3 undecided */
  double terminal_l;
  double distance_z;
  int32_t candidate_is_neep;
} ewlab_verdict;

EWLAB_API ewlab_status ewlab_classify_trajectory(const ewlab_game* game,
                                                 const ewlab_trajectory* traj,
                                                 double tol, ewlab_verdict* out,
                                                 double* candidate_profile,
                                                 int32_t* absorbed_actions);

/* ---- trajectory analysis ------------------------------------------------ */

EWLAB_API ewlab_status ewlab_prob_always_play(const ewlab_game* game,
                                              const int32_t* equilibrium,
                                              const double* p0, const double* etas,
                                              double tol, double* lo, double* hi);
EWLAB_API ewlab_status ewlab_l_statistic(const ewlab_game* game, const double* profile,
                                         double* out);
EWLAB_API ewlab_status ewlab_distance_to_z(const ewlab_game* game,
                                           const double* profile, double* out);
/* out must hold steps doubles; profiles holds num_profiles pure profiles */
EWLAB_API ewlab_status ewlab_levy_average(const ewlab_game* game,
                                          const ewlab_trajectory* traj,
                                          const int32_t* profiles,
                                          int32_t num_profiles, double* out);

/* ---- coordination potentials -------------------------------------------- */

EWLAB_API ewlab_status ewlab_potential_z(const ewlab_game* game, const double* profile,
                                         double* out);
EWLAB_API ewlab_status ewlab_one_step_expected_potential(
    const ewlab_game* game, const double* profile, const double* etas, int32_t k,
    double* current, double* expected, double* x_enumerated, double* x_closed_form,
    double* x_upper_bound);
EWLAB_API ewlab_status ewlab_supermartingale_constants(const ewlab_game* game,
                                                       const double* etas, double* c,
                                                       double* d, double* m0);
EWLAB_API ewlab_status ewlab_potential_zprime(const double* profile, double* out);
EWLAB_API ewlab_status ewlab_one_step_expected_zprime(const double* profile,
                                                      const double* etas, double* out);
EWLAB_API ewlab_status ewlab_zprime_m0(const double* etas, int32_t samples,
                                       uint64_t seed, double* out);

/* ---- 2x2 coordination drift ---------------------------------------------- */

EWLAB_API ewlab_status ewlab_drift_2x2(double a, double b, double x, double y,
                                       double* out);
EWLAB_API ewlab_status ewlab_drift_2x2_direct(double a, double b, double x, double y,
                                              double* out);

/* ---- example-18 counting chain ------------------------------------------- */

/* b_out and r_out must hold steps+1 entries */
EWLAB_API ewlab_status ewlab_ex18_chain(double x, double y, double eta1, double eta2,
                                        uint64_t seed, int64_t steps, int64_t* b_out,
                                        int64_t* r_out);
EWLAB_API ewlab_status ewlab_ex18_always_l(double x, double y, double eta2, double tol,
                                           double* lo, double* hi, int64_t* terms);
EWLAB_API ewlab_status ewlab_ex18_always_t(double x, double y, double eta1, double tol,
                                           double* lo, double* hi, int64_t* terms);
EWLAB_API ewlab_status ewlab_ex18_always_l_frequency(double x, double y, double eta1,
                                                     double eta2, int64_t horizon,
                                                     int32_t runs, uint64_t seed,
                                                     double* out);

/* ---- grid experiments ----------------------------------------------------- */

typedef struct ewlab_grid_spec {
  int32_t grid_points;
  int32_t runs;
  double eta;
  double eps;
  int64_t t_max;
  uint64_t master_seed;
  int32_t threads; /* 0 = all hardware threads */
} ewlab_grid_spec;

EWLAB_API ewlab_status ewlab_run_grid(const ewlab_game* game,
                                      const ewlab_grid_spec* spec,
                                      ewlab_experiment** out);
EWLAB_API void ewlab_experiment_free(ewlab_experiment* experiment);
EWLAB_API int32_t ewlab_experiment_equilibria(const ewlab_experiment* experiment);
EWLAB_API ewlab_status ewlab_experiment_frequency(const ewlab_experiment* experiment,
                                                  int32_t ix, int32_t iy,
                                                  int32_t equilibrium_index,
                                                  double* out);
EWLAB_API ewlab_status ewlab_experiment_write_matrix_csv(
    const ewlab_experiment* experiment, int32_t equilibrium_index, const char* path);
EWLAB_API ewlab_status ewlab_experiment_write_log_csv(
    const ewlab_experiment* experiment, const char* path);
EWLAB_API ewlab_status ewlab_experiment_stats(const ewlab_experiment* experiment,
                                              int64_t* total, int64_t* absorbed,
                                              int64_t* capped, double* capped_fraction,
                                              double* mean, int64_t* max_steps,
                                              int64_t* q50, int64_t* q90, int64_t* q99);

/* single-cell absorption-time probe for arbitrary games */
EWLAB_API ewlab_status ewlab_absorption_stats(
    const ewlab_game* game, const double* p0, const double* etas, int32_t runs,
    double eps, int64_t t_max, uint64_t master_seed, int32_t threads, int64_t* total,
    int64_t* absorbed, int64_t* capped, double* capped_fraction, double* mean,
    int64_t* max_steps, int64_t* q50, int64_t* q90, int64_t* q99);

/* ---- basin fixed point ----------------------------------------------------- */

EWLAB_API ewlab_status ewlab_solve_basin(double a, double b, int32_t resolution,
                                         int32_t max_iterations, double tolerance,
                                         ewlab_basin** out);
EWLAB_API void ewlab_basin_free(ewlab_basin* basin);
EWLAB_API ewlab_status ewlab_basin_info(const ewlab_basin* basin, int32_t* resolution,
                                        double* residual, int32_t* iterations,
                                        int32_t* converged);
EWLAB_API ewlab_status ewlab_basin_value(const ewlab_basin* basin, int32_t ix,
                                         int32_t iy, double* out);
EWLAB_API ewlab_status ewlab_basin_write_csv(const ewlab_basin* basin,
                                             const char* path);

#ifdef __cplusplus
}
#endif

#endif /* EWLAB_H */
