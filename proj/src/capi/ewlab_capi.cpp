#include "ewlab/ewlab.h"

#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>

#include "analysis.hpp"
#include "coordination.hpp"
#include "engine.hpp"
#include "equilibria.hpp"
#include "experiment.hpp"
#include "game.hpp"

using namespace ewlab;

namespace {

thread_local std::string g_last_error;

ewlab_status fail(ewlab_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
ewlab_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(EWLAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(EWLAB_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(EWLAB_ERR_NUMERIC, e.what());
  }
}

const Game& unwrap(const ewlab_game* g) {
  return *reinterpret_cast<const Game*>(g);
}

MixedProfile to_profile(const Game& g, const double* flat) {
  MixedProfile mp;
  mp.p.resize(g.num_players());
  size_t k = 0;
  for (int i = 0; i < g.num_players(); ++i) {
    mp.p[i].assign(flat + k, flat + k + g.action_count(i));
    k += g.action_count(i);
  }
  return mp;
}

void from_profile(const Game& g, const MixedProfile& mp, double* flat) {
  size_t k = 0;
  for (int i = 0; i < g.num_players(); ++i)
    for (int a = 0; a < g.action_count(i); ++a) flat[k++] = mp.p[i][a];
}

std::vector<double> to_etas(const Game& g, const double* etas) {
  return std::vector<double>(etas, etas + g.num_players());
}

PureProfile to_pure(const Game& g, const int32_t* actions) {
  PureProfile a(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) a[i] = actions[i];
  return a;
}

void fill_stats(const AbsorptionTimeStats& st, int64_t* total, int64_t* absorbed,
                int64_t* capped, double* capped_fraction, double* mean,
                int64_t* max_steps, int64_t* q50, int64_t* q90, int64_t* q99) {
  if (total) *total = st.total_runs;
  if (absorbed) *absorbed = st.absorbed;
  if (capped) *capped = st.capped;
  if (capped_fraction) *capped_fraction = st.capped_fraction;
  if (mean) *mean = st.mean;
  if (max_steps) *max_steps = st.max;
  if (q50) *q50 = st.q50;
  if (q90) *q90 = st.q90;
  if (q99) *q99 = st.q99;
}

struct NeepSetWrapper {
  const Game* game;
  std::vector<NeepComponent> components;
  mutable std::string describe_buffer;
};

struct ExperimentWrapper {
  ExperimentResult result;
};

}  // namespace

extern "C" {

const char* ewlab_last_error(void) { return g_last_error.c_str(); }

ewlab_status ewlab_game_load(const char* path, ewlab_game** out) {
  return guarded([&]() {
    if (!path || !out) return fail(EWLAB_ERR_INVALID_ARGUMENT, "null argument");
    try {
      auto* g = new Game(Game::from_json_file(path));
      *out = reinterpret_cast<ewlab_game*>(g);
      return EWLAB_OK;
    } catch (const std::invalid_argument& e) {
      return fail(EWLAB_ERR_PARSE, e.what());
    }
  });
}

ewlab_status ewlab_game_parse(const char* json_text, ewlab_game** out) {
  return guarded([&]() {
    if (!json_text || !out) return fail(EWLAB_ERR_INVALID_ARGUMENT, "null argument");
    try {
      auto* g = new Game(Game::from_json_text(json_text));
      *out = reinterpret_cast<ewlab_game*>(g);
      return EWLAB_OK;
    } catch (const std::invalid_argument& e) {
      return fail(EWLAB_ERR_PARSE, e.what());
    }
  });
}

void ewlab_game_free(ewlab_game* game) {
  delete reinterpret_cast<Game*>(game);
}

int32_t ewlab_game_players(const ewlab_game* game) {
  return game ? unwrap(game).num_players() : 0;
}

int32_t ewlab_game_action_count(const ewlab_game* game, int32_t player) {
  return game ? unwrap(game).action_count(player) : 0;
}

const char* ewlab_game_action_label(const ewlab_game* game, int32_t player,
                                    int32_t action) {
  return unwrap(game).action_label(player, action).c_str();
}

int32_t ewlab_game_profile_size(const ewlab_game* game) {
  const Game& g = unwrap(game);
  int32_t total = 0;
  for (int i = 0; i < g.num_players(); ++i) total += g.action_count(i);
  return total;
}

ewlab_status ewlab_game_payoff(const ewlab_game* game, int32_t player,
                               const int32_t* profile, double* out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    *out = g.payoff(player, to_pure(g, profile));
    return EWLAB_OK;
  });
}

int32_t ewlab_game_is_exa7(const ewlab_game* game) {
  return game && is_exa7_game(unwrap(game)) ? 1 : 0;
}

ewlab_status ewlab_expected_payoff(const ewlab_game* game, const double* profile,
                                   int32_t player, double* out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    *out = expected_payoff(g, to_profile(g, profile), player);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_strict_nash_count(const ewlab_game* game, int32_t* count) {
  return guarded([&]() {
    *count = static_cast<int32_t>(strict_nash_equilibria(unwrap(game)).size());
    return EWLAB_OK;
  });
}

ewlab_status ewlab_strict_nash_get(const ewlab_game* game, int32_t index,
                                   int32_t* actions) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    const auto sne = strict_nash_equilibria(g);
    if (index < 0 || index >= static_cast<int32_t>(sne.size()))
      return fail(EWLAB_ERR_INVALID_ARGUMENT, "equilibrium index out of range");
    for (int i = 0; i < g.num_players(); ++i) actions[i] = sne[index][i];
    return EWLAB_OK;
  });
}

ewlab_status ewlab_is_nash(const ewlab_game* game, const double* profile, double tol,
                           int32_t* out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    *out = is_nash(g, to_profile(g, profile), tol) ? 1 : 0;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_is_neep(const ewlab_game* game, const double* profile, double tol,
                           int32_t* out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    *out = is_neep(g, to_profile(g, profile), tol) ? 1 : 0;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_is_strong_coordination(const ewlab_game* game, int32_t* out) {
  return guarded([&]() {
    *out = is_strong_coordination(unwrap(game)) ? 1 : 0;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_neep_enumerate_2p(const ewlab_game* game, double tol,
                                     ewlab_neep_set** out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    if (g.num_players() != 2)
      return fail(EWLAB_ERR_UNSUPPORTED, "NEEP enumeration handles 2-player games");
    auto* w = new NeepSetWrapper{&g, enumerate_neep_2p(g, tol), {}};
    *out = reinterpret_cast<ewlab_neep_set*>(w);
    return EWLAB_OK;
  });
}

void ewlab_neep_set_free(ewlab_neep_set* set) {
  delete reinterpret_cast<NeepSetWrapper*>(set);
}

int32_t ewlab_neep_component_count(const ewlab_neep_set* set) {
  return set ? static_cast<int32_t>(
                   reinterpret_cast<const NeepSetWrapper*>(set)->components.size())
             : 0;
}

ewlab_status ewlab_neep_component_info(const ewlab_neep_set* set, int32_t index,
                                       int32_t* kind, int32_t* dimension,
                                       int32_t* vertex_count) {
  return guarded([&]() {
    const auto* w = reinterpret_cast<const NeepSetWrapper*>(set);
    if (index < 0 || index >= static_cast<int32_t>(w->components.size()))
      return fail(EWLAB_ERR_INVALID_ARGUMENT, "component index out of range");
    const auto& c = w->components[index];
    if (kind) *kind = static_cast<int32_t>(c.kind);
    if (dimension) *dimension = c.dimension;
    if (vertex_count) *vertex_count = static_cast<int32_t>(c.vertices.size());
    return EWLAB_OK;
  });
}

ewlab_status ewlab_neep_component_vertex(const ewlab_neep_set* set, int32_t index,
                                         int32_t vertex, double* profile) {
  return guarded([&]() {
    const auto* w = reinterpret_cast<const NeepSetWrapper*>(set);
    if (index < 0 || index >= static_cast<int32_t>(w->components.size()))
      return fail(EWLAB_ERR_INVALID_ARGUMENT, "component index out of range");
    const auto& c = w->components[index];
    if (vertex < 0 || vertex >= static_cast<int32_t>(c.vertices.size()))
      return fail(EWLAB_ERR_INVALID_ARGUMENT, "vertex index out of range");
    from_profile(*w->game, c.vertices[vertex], profile);
    return EWLAB_OK;
  });
}

const char* ewlab_neep_component_describe(const ewlab_neep_set* set, int32_t index) {
  const auto* w = reinterpret_cast<const NeepSetWrapper*>(set);
  if (!w || index < 0 || index >= static_cast<int32_t>(w->components.size()))
    return "";
  w->describe_buffer = w->components[index].describe(*w->game);
  return w->describe_buffer.c_str();
}

ewlab_status ewlab_simulate(const ewlab_game* game, const double* p0,
                            const double* etas, uint64_t seed,
                            const ewlab_stop_rule* stop, ewlab_trajectory** out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    EwConfig cfg;
    cfg.game = &g;
    cfg.learning_rates = to_etas(g, etas);
    cfg.initial_profile = to_profile(g, p0);
    cfg.seed = seed;
    StoppingRule rule;
    rule.kind = stop->kind == 1 ? StopKind::Absorption : StopKind::Horizon;
    rule.t_max = stop->t_max;
    rule.eps = stop->eps;
    auto* traj = new Trajectory(simulate(cfg, rule));
    *out = reinterpret_cast<ewlab_trajectory*>(traj);
    return EWLAB_OK;
  });
}

void ewlab_trajectory_free(ewlab_trajectory* traj) {
  delete reinterpret_cast<Trajectory*>(traj);
}

int64_t ewlab_trajectory_steps(const ewlab_trajectory* traj) {
  return reinterpret_cast<const Trajectory*>(traj)->steps;
}

int32_t ewlab_trajectory_stop_reason(const ewlab_trajectory* traj) {
  return reinterpret_cast<const Trajectory*>(traj)->reason == StopReason::Absorbed ? 0
                                                                                   : 1;
}

ewlab_status ewlab_trajectory_absorbed_at(const ewlab_trajectory* traj,
                                          int32_t* actions) {
  return guarded([&]() {
    const auto* t = reinterpret_cast<const Trajectory*>(traj);
    if (!t->absorbed_at)
      return fail(EWLAB_ERR_INVALID_ARGUMENT, "trajectory was not absorbed");
    for (size_t i = 0; i < t->absorbed_at->size(); ++i)
      actions[i] = (*t->absorbed_at)[i];
    return EWLAB_OK;
  });
}

ewlab_status ewlab_trajectory_terminal(const ewlab_trajectory* traj, double* profile) {
  return guarded([&]() {
    const auto* t = reinterpret_cast<const Trajectory*>(traj);
    from_profile(*t->config.game, t->terminal, profile);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_trajectory_action(const ewlab_trajectory* traj, int64_t stage,
                                     int32_t* actions) {
  return guarded([&]() {
    const auto* t = reinterpret_cast<const Trajectory*>(traj);
    if (stage < 0 || stage >= t->steps)
      return fail(EWLAB_ERR_INVALID_ARGUMENT, "stage out of range");
    const PureProfile a = t->action_at(stage);
    for (size_t i = 0; i < a.size(); ++i) actions[i] = a[i];
    return EWLAB_OK;
  });
}

ewlab_status ewlab_trajectory_write_csv(const ewlab_trajectory* traj,
                                        const char* path) {
  return guarded([&]() {
    write_trajectory_csv(*reinterpret_cast<const Trajectory*>(traj), path);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_closed_form_profile(const ewlab_game* game, const double* p0,
                                       const double* etas, const int32_t* history,
                                       int64_t steps, double* profile_out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    EwConfig cfg;
    cfg.game = &g;
    cfg.learning_rates = to_etas(g, etas);
    cfg.initial_profile = to_profile(g, p0);
    std::vector<PureProfile> hist(steps);
    for (int64_t t = 0; t < steps; ++t)
      hist[t] = to_pure(g, history + t * g.num_players());
    from_profile(g, closed_form_profile(cfg, hist), profile_out);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_classify_trajectory(const ewlab_game* game,
                                       const ewlab_trajectory* traj, double tol,
                                       ewlab_verdict* out, double* candidate_profile,
                                       int32_t* absorbed_actions) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    const auto* t = reinterpret_cast<const Trajectory*>(traj);
    const ConvergenceVerdict v = classify_trajectory(g, *t, tol);
    out->kind = static_cast<int32_t>(v.kind);
    out->terminal_l = v.terminal_l;
    out->distance_z = v.distance_z;
    out->candidate_is_neep = v.candidate_is_neep ? 1 : 0;
    if (candidate_profile) {
      const MixedProfile& src = v.candidate ? *v.candidate : t->terminal;
      from_profile(g, src, candidate_profile);
    }
    if (absorbed_actions && v.equilibrium)
      for (size_t i = 0; i < v.equilibrium->size(); ++i)
        absorbed_actions[i] = (*v.equilibrium)[i];
    return EWLAB_OK;
  });
}

ewlab_status ewlab_prob_always_play(const ewlab_game* game, const int32_t* equilibrium,
                                    const double* p0, const double* etas, double tol,
                                    double* lo, double* hi) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    AbsorptionQuery q;
    q.game = &g;
    q.equilibrium = to_pure(g, equilibrium);
    q.initial_profile = to_profile(g, p0);
    q.learning_rates = to_etas(g, etas);
    q.tolerance = tol;
    const Enclosure e = prob_always_play(q);
    *lo = e.lo;
    *hi = e.hi;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_l_statistic(const ewlab_game* game, const double* profile,
                               double* out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    *out = l_statistic(g, to_profile(g, profile));
    return EWLAB_OK;
  });
}

ewlab_status ewlab_distance_to_z(const ewlab_game* game, const double* profile,
                                 double* out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    *out = distance_to_z(g, to_profile(g, profile));
    return EWLAB_OK;
  });
}

ewlab_status ewlab_levy_average(const ewlab_game* game, const ewlab_trajectory* traj,
                                const int32_t* profiles, int32_t num_profiles,
                                double* out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    const auto* t = reinterpret_cast<const Trajectory*>(traj);
    std::vector<PureProfile> set(num_profiles);
    for (int32_t k = 0; k < num_profiles; ++k)
      set[k] = to_pure(g, profiles + static_cast<size_t>(k) * g.num_players());
    const auto series = levy_average(*t, set);
    std::memcpy(out, series.data(), series.size() * sizeof(double));
    return EWLAB_OK;
  });
}

ewlab_status ewlab_potential_z(const ewlab_game* game, const double* profile,
                               double* out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    *out = potential_z(g, to_profile(g, profile));
    return EWLAB_OK;
  });
}

ewlab_status ewlab_one_step_expected_potential(const ewlab_game* game,
                                               const double* profile,
                                               const double* etas, int32_t k,
                                               double* current, double* expected,
                                               double* x_enumerated,
                                               double* x_closed_form,
                                               double* x_upper_bound) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    const OneStepPotential r =
        one_step_expected_potential(g, to_profile(g, profile), to_etas(g, etas), k);
    if (current) *current = r.current;
    if (expected) *expected = r.expected;
    if (x_enumerated) *x_enumerated = r.x_enumerated;
    if (x_closed_form) *x_closed_form = r.x_closed_form;
    if (x_upper_bound) *x_upper_bound = r.x_upper_bound;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_supermartingale_constants(const ewlab_game* game,
                                             const double* etas, double* c, double* d,
                                             double* m0) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    const SupermartingaleConstants k = supermartingale_constants(g, to_etas(g, etas));
    if (c) *c = k.c;
    if (d) *d = k.d;
    if (m0) *m0 = k.m0;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_potential_zprime(const double* profile, double* out) {
  return guarded([&]() {
    MixedProfile mp;
    mp.p = {{profile[0], profile[1], profile[2]},
            {profile[3], profile[4], profile[5]}};
    *out = potential_zprime(mp);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_one_step_expected_zprime(const double* profile, const double* etas,
                                            double* out) {
  return guarded([&]() {
    MixedProfile mp;
    mp.p = {{profile[0], profile[1], profile[2]},
            {profile[3], profile[4], profile[5]}};
    *out = one_step_expected_zprime(mp, {etas[0], etas[1]});
    return EWLAB_OK;
  });
}

ewlab_status ewlab_zprime_m0(const double* etas, int32_t samples, uint64_t seed,
                             double* out) {
  return guarded([&]() {
    *out = calibrate_zprime_m0({etas[0], etas[1]}, samples, seed);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_drift_2x2(double a, double b, double x, double y, double* out) {
  return guarded([&]() {
    *out = drift_2x2(a, b, x, y);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_drift_2x2_direct(double a, double b, double x, double y,
                                    double* out) {
  return guarded([&]() {
    *out = drift_2x2_direct(a, b, x, y);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_ex18_chain(double x, double y, double eta1, double eta2,
                              uint64_t seed, int64_t steps, int64_t* b_out,
                              int64_t* r_out) {
  return guarded([&]() {
    const Ex18Chain chain = ex18_chain(x, y, eta1, eta2, seed, steps);
    std::memcpy(b_out, chain.b.data(), chain.b.size() * sizeof(int64_t));
    std::memcpy(r_out, chain.r.data(), chain.r.size() * sizeof(int64_t));
    return EWLAB_OK;
  });
}

ewlab_status ewlab_ex18_always_l(double x, double y, double eta2, double tol,
                                 double* lo, double* hi, int64_t* terms) {
  return guarded([&]() {
    const Enclosure e = ex18_always_l_probability(x, y, eta2, tol);
    *lo = e.lo;
    *hi = e.hi;
    if (terms) *terms = e.terms;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_ex18_always_t(double x, double y, double eta1, double tol,
                                 double* lo, double* hi, int64_t* terms) {
  return guarded([&]() {
    const Enclosure e = ex18_always_t_probability(x, y, eta1, tol);
    *lo = e.lo;
    *hi = e.hi;
    if (terms) *terms = e.terms;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_ex18_always_l_frequency(double x, double y, double eta1,
                                           double eta2, int64_t horizon, int32_t runs,
                                           uint64_t seed, double* out) {
  return guarded([&]() {
    *out = ex18_always_l_frequency(x, y, eta1, eta2, horizon, runs, seed);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_run_grid(const ewlab_game* game, const ewlab_grid_spec* spec,
                            ewlab_experiment** out) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    const ExperimentSpec s =
        make_grid_spec(g, spec->grid_points, spec->runs, spec->eta, spec->eps,
                       spec->t_max, spec->master_seed);
    ExperimentSpec with_threads = s;
    with_threads.threads = spec->threads;
    auto* w = new ExperimentWrapper{run_grid(with_threads)};
    *out = reinterpret_cast<ewlab_experiment*>(w);
    return EWLAB_OK;
  });
}

void ewlab_experiment_free(ewlab_experiment* experiment) {
  delete reinterpret_cast<ExperimentWrapper*>(experiment);
}

int32_t ewlab_experiment_equilibria(const ewlab_experiment* experiment) {
  return static_cast<int32_t>(
      reinterpret_cast<const ExperimentWrapper*>(experiment)->result.equilibria.size());
}

ewlab_status ewlab_experiment_frequency(const ewlab_experiment* experiment, int32_t ix,
                                        int32_t iy, int32_t equilibrium_index,
                                        double* out) {
  return guarded([&]() {
    const auto& r = reinterpret_cast<const ExperimentWrapper*>(experiment)->result;
    const int ny = static_cast<int>(r.ys.size());
    if (ix < 0 || iy < 0 || ix >= static_cast<int32_t>(r.xs.size()) || iy >= ny)
      return fail(EWLAB_ERR_INVALID_ARGUMENT, "grid index out of range");
    *out = r.frequency(static_cast<std::int64_t>(ix) * ny + iy, equilibrium_index);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_experiment_write_matrix_csv(const ewlab_experiment* experiment,
                                               int32_t equilibrium_index,
                                               const char* path) {
  return guarded([&]() {
    write_matrix_csv(reinterpret_cast<const ExperimentWrapper*>(experiment)->result,
                     equilibrium_index, path);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_experiment_write_log_csv(const ewlab_experiment* experiment,
                                            const char* path) {
  return guarded([&]() {
    write_run_log_csv(reinterpret_cast<const ExperimentWrapper*>(experiment)->result,
                      path);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_experiment_stats(const ewlab_experiment* experiment, int64_t* total,
                                    int64_t* absorbed, int64_t* capped,
                                    double* capped_fraction, double* mean,
                                    int64_t* max_steps, int64_t* q50, int64_t* q90,
                                    int64_t* q99) {
  return guarded([&]() {
    const auto st = absorption_time_stats(
        reinterpret_cast<const ExperimentWrapper*>(experiment)->result);
    fill_stats(st, total, absorbed, capped, capped_fraction, mean, max_steps, q50, q90,
               q99);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_absorption_stats(const ewlab_game* game, const double* p0,
                                    const double* etas, int32_t runs, double eps,
                                    int64_t t_max, uint64_t master_seed,
                                    int32_t threads, int64_t* total, int64_t* absorbed,
                                    int64_t* capped, double* capped_fraction,
                                    double* mean, int64_t* max_steps, int64_t* q50,
                                    int64_t* q90, int64_t* q99) {
  return guarded([&]() {
    const Game& g = unwrap(game);
    ExperimentSpec spec;
    spec.game = &g;
    spec.cells = {to_profile(g, p0)};
    spec.runs = runs;
    spec.learning_rates = to_etas(g, etas);
    spec.eps = eps;
    spec.t_max = t_max;
    spec.master_seed = master_seed;
    spec.threads = threads;
    const auto st = absorption_time_stats(spec);
    fill_stats(st, total, absorbed, capped, capped_fraction, mean, max_steps, q50, q90,
               q99);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_solve_basin(double a, double b, int32_t resolution,
                               int32_t max_iterations, double tolerance,
                               ewlab_basin** out) {
  return guarded([&]() {
    auto* grid =
        new BasinGrid(solve_basin_fixed_point(a, b, resolution, max_iterations, tolerance));
    *out = reinterpret_cast<ewlab_basin*>(grid);
    return EWLAB_OK;
  });
}

void ewlab_basin_free(ewlab_basin* basin) {
  delete reinterpret_cast<BasinGrid*>(basin);
}

ewlab_status ewlab_basin_info(const ewlab_basin* basin, int32_t* resolution,
                              double* residual, int32_t* iterations,
                              int32_t* converged) {
  return guarded([&]() {
    const auto* g = reinterpret_cast<const BasinGrid*>(basin);
    if (resolution) *resolution = g->resolution;
    if (residual) *residual = g->residual;
    if (iterations) *iterations = g->iterations;
    if (converged) *converged = g->converged ? 1 : 0;
    return EWLAB_OK;
  });
}

ewlab_status ewlab_basin_value(const ewlab_basin* basin, int32_t ix, int32_t iy,
                               double* out) {
  return guarded([&]() {
    const auto* g = reinterpret_cast<const BasinGrid*>(basin);
    if (ix < 0 || iy < 0 || ix >= g->resolution || iy >= g->resolution)
      return fail(EWLAB_ERR_INVALID_ARGUMENT, "grid index out of range");
    *out = g->at(ix, iy);
    return EWLAB_OK;
  });
}

ewlab_status ewlab_basin_write_csv(const ewlab_basin* basin, const char* path) {
  return guarded([&]() {
    write_basin_csv(*reinterpret_cast<const BasinGrid*>(basin), path);
    return EWLAB_OK;
  });
}

}  // extern "C"
