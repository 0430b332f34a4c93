// Exercises the shared library through the public C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "ewlab/ewlab.h"

namespace {
std::string fixture(const char* name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}
}  // namespace

TEST_CASE("load, inspect, and free a game") {
  ewlab_game* g = nullptr;
  REQUIRE(ewlab_game_load(fixture("exa1").c_str(), &g) == EWLAB_OK);
  CHECK(ewlab_game_players(g) == 2);
  CHECK(ewlab_game_action_count(g, 0) == 2);
  CHECK(std::strcmp(ewlab_game_action_label(g, 1, 1), "R") == 0);
  CHECK(ewlab_game_profile_size(g) == 4);
  const int32_t tl[2] = {0, 0};
  double u = 0;
  CHECK(ewlab_game_payoff(g, 0, tl, &u) == EWLAB_OK);
  CHECK(u == 1.0);
  CHECK(ewlab_game_is_exa7(g) == 0);
  ewlab_game_free(g);

  ewlab_game* exa7 = nullptr;
  REQUIRE(ewlab_game_load(fixture("exa7").c_str(), &exa7) == EWLAB_OK);
  CHECK(ewlab_game_is_exa7(exa7) == 1);
  ewlab_game_free(exa7);
}

TEST_CASE("error paths set a status and a message") {
  ewlab_game* g = nullptr;
  CHECK(ewlab_game_load("/no/such/game.json", &g) == EWLAB_ERR_IO);
  CHECK(std::strlen(ewlab_last_error()) > 0);
  CHECK(ewlab_game_parse("{\"players\": 1}", &g) == EWLAB_ERR_PARSE);
  CHECK(std::string(ewlab_last_error()).find("actions") != std::string::npos);

  REQUIRE(ewlab_game_load(fixture("matching_pennies").c_str(), &g) == EWLAB_OK);
  // absorption without fallback on a game without strict equilibria
  const double p0[4] = {0.5, 0.5, 0.5, 0.5};
  const double etas[2] = {0.1, 0.1};
  ewlab_stop_rule stop{1, 0, 1e-4};
  ewlab_trajectory* traj = nullptr;
  CHECK(ewlab_simulate(g, p0, etas, 1, &stop, &traj) == EWLAB_ERR_INVALID_ARGUMENT);
  ewlab_game_free(g);
}

TEST_CASE("strict equilibria and NEEP through the C surface") {
  ewlab_game* g = nullptr;
  REQUIRE(ewlab_game_load(fixture("exa1").c_str(), &g) == EWLAB_OK);
  int32_t count = 0;
  REQUIRE(ewlab_strict_nash_count(g, &count) == EWLAB_OK);
  REQUIRE(count == 2);
  int32_t actions[2];
  REQUIRE(ewlab_strict_nash_get(g, 0, actions) == EWLAB_OK);
  CHECK(actions[0] == 0);
  CHECK(actions[1] == 0);
  CHECK(ewlab_strict_nash_get(g, 7, actions) == EWLAB_ERR_INVALID_ARGUMENT);

  int32_t flag = 0;
  const double mixed[4] = {0.5, 0.5, 0.5, 0.5};
  CHECK(ewlab_is_nash(g, mixed, 1e-9, &flag) == EWLAB_OK);
  CHECK(flag == 1);
  CHECK(ewlab_is_neep(g, mixed, 1e-9, &flag) == EWLAB_OK);
  CHECK(flag == 0);
  CHECK(ewlab_is_strong_coordination(g, &flag) == EWLAB_OK);
  CHECK(flag == 1);
  double v = 0;
  CHECK(ewlab_expected_payoff(g, mixed, 0, &v) == EWLAB_OK);
  CHECK(v == doctest::Approx(0.5));
  ewlab_game_free(g);

  ewlab_game* ex1111 = nullptr;
  REQUIRE(ewlab_game_load(fixture("ex1111").c_str(), &ex1111) == EWLAB_OK);
  ewlab_neep_set* set = nullptr;
  REQUIRE(ewlab_neep_enumerate_2p(ex1111, 1e-9, &set) == EWLAB_OK);
  REQUIRE(ewlab_neep_component_count(set) == 2);
  int32_t kind = -1, dim = -1, verts = 0;
  REQUIRE(ewlab_neep_component_info(set, 0, &kind, &dim, &verts) == EWLAB_OK);
  CHECK(kind == 1);  // segment
  CHECK(dim == 1);
  CHECK(verts == 2);
  double vertex[4];
  REQUIRE(ewlab_neep_component_vertex(set, 0, 0, vertex) == EWLAB_OK);
  CHECK(vertex[2] == doctest::Approx(1.0));  // p2 = L on this component
  CHECK(std::string(ewlab_neep_component_describe(set, 0)).find("segment") !=
        std::string::npos);
  ewlab_neep_set_free(set);
  ewlab_game_free(ex1111);
}

TEST_CASE("simulate, classify, replay, and export") {
  ewlab_game* g = nullptr;
  REQUIRE(ewlab_game_load(fixture("exa1").c_str(), &g) == EWLAB_OK);
  const double p0[4] = {0.5, 0.5, 0.5, 0.5};
  const double etas[2] = {0.1, 0.1};
  ewlab_stop_rule stop{1, 1000000, 1e-4};
  ewlab_trajectory* traj = nullptr;
  REQUIRE(ewlab_simulate(g, p0, etas, 2024, &stop, &traj) == EWLAB_OK);
  CHECK(ewlab_trajectory_stop_reason(traj) == 0);
  const int64_t steps = ewlab_trajectory_steps(traj);
  CHECK(steps > 0);
  int32_t target[2];
  REQUIRE(ewlab_trajectory_absorbed_at(traj, target) == EWLAB_OK);

  double terminal[4];
  REQUIRE(ewlab_trajectory_terminal(traj, terminal) == EWLAB_OK);
  const double top = target[0] == 0 ? terminal[0] : terminal[1];
  CHECK(top > 1 - 1e-4);

  // closed-form replay of the recorded actions reproduces the terminal point
  std::vector<int32_t> history(2 * steps);
  for (int64_t t = 0; t < steps; ++t)
    REQUIRE(ewlab_trajectory_action(traj, t, &history[2 * t]) == EWLAB_OK);
  double replayed[4];
  REQUIRE(ewlab_closed_form_profile(g, p0, etas, history.data(), steps, replayed) ==
          EWLAB_OK);
  for (int k = 0; k < 4; ++k)
    CHECK(replayed[k] == doctest::Approx(terminal[k]).epsilon(1e-9));

  ewlab_verdict verdict;
  double candidate[4];
  int32_t absorbed[2];
  REQUIRE(ewlab_classify_trajectory(g, traj, 1e-2, &verdict, candidate, absorbed) ==
          EWLAB_OK);
  CHECK(verdict.kind == 0);
  CHECK(verdict.terminal_l > 0.99);
  CHECK(absorbed[0] == target[0]);

  double l = 0, dz = 0;
  CHECK(ewlab_l_statistic(g, terminal, &l) == EWLAB_OK);
  CHECK(l > 0.99);
  CHECK(ewlab_distance_to_z(g, terminal, &dz) == EWLAB_OK);
  CHECK(dz > 0.99);

  double series_first = 0;
  std::vector<double> series(steps);
  const int32_t tl[2] = {0, 0};
  CHECK(ewlab_levy_average(g, traj, tl, 1, series.data()) == EWLAB_OK);
  series_first = series[0];
  CHECK(std::abs(series_first) <= 1.0);

  CHECK(ewlab_trajectory_write_csv(traj, "capi_traj.csv") == EWLAB_OK);
  std::remove("capi_traj.csv");
  ewlab_trajectory_free(traj);

  double lo = 0, hi = 0;
  REQUIRE(ewlab_prob_always_play(g, tl, p0, etas, 1e-8, &lo, &hi) == EWLAB_OK);
  CHECK(hi - lo <= 1e-8);
  CHECK(lo > 0);
  ewlab_game_free(g);
}

TEST_CASE("coordination potentials and drift through the C surface") {
  ewlab_game* coord3 = nullptr;
  REQUIRE(ewlab_game_load(fixture("coord3").c_str(), &coord3) == EWLAB_OK);
  const double uniform[6] = {1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  double z = 0;
  REQUIRE(ewlab_potential_z(coord3, uniform, &z) == EWLAB_OK);
  CHECK(z == doctest::Approx(9.0));

  const double etas[2] = {0.1, 0.1};
  double current, expected, xe, xc, xb;
  REQUIRE(ewlab_one_step_expected_potential(coord3, uniform, etas, 0, &current,
                                            &expected, &xe, &xc, &xb) == EWLAB_OK);
  CHECK(current == doctest::Approx(9.0));
  CHECK(xe == doctest::Approx(xc).epsilon(1e-12));

  double c, d, m0;
  REQUIRE(ewlab_supermartingale_constants(coord3, etas, &c, &d, &m0) == EWLAB_OK);
  CHECK(c > 0);
  CHECK(d > 0);
  CHECK(m0 > 1);
  ewlab_game_free(coord3);

  double zp = 0;
  REQUIRE(ewlab_potential_zprime(uniform, &zp) == EWLAB_OK);
  CHECK(zp == doctest::Approx(4.5));
  double ez = 0;
  REQUIRE(ewlab_one_step_expected_zprime(uniform, etas, &ez) == EWLAB_OK);
  CHECK(ez > 0);
  double m0p = 0;
  REQUIRE(ewlab_zprime_m0(etas, 5000, 7, &m0p) == EWLAB_OK);
  CHECK(m0p >= 8.0);

  double f1 = 0, f2 = 0;
  REQUIRE(ewlab_drift_2x2(0.5, 0.25, 0.3, 0.7, &f1) == EWLAB_OK);
  REQUIRE(ewlab_drift_2x2_direct(0.5, 0.25, 0.3, 0.7, &f2) == EWLAB_OK);
  CHECK(f1 == doctest::Approx(f2).epsilon(1e-12));
}

TEST_CASE("example-18 helpers through the C surface") {
  std::vector<int64_t> b(101), r(101);
  REQUIRE(ewlab_ex18_chain(0.5, 0.5, 1.0, 1.0, 3, 100, b.data(), r.data()) ==
          EWLAB_OK);
  CHECK(b[0] == 0);
  CHECK(b[100] >= b[99]);

  double lo, hi;
  int64_t terms = 0;
  REQUIRE(ewlab_ex18_always_l(0.5, 0.5, 1.0, 1e-6, &lo, &hi, &terms) == EWLAB_OK);
  CHECK(terms > 0);
  CHECK(lo == doctest::Approx(0.129805).epsilon(1e-4));
  double freq = 0;
  REQUIRE(ewlab_ex18_always_l_frequency(0.5, 0.5, 1.0, 1.0, terms, 4000, 5, &freq) ==
          EWLAB_OK);
  CHECK(std::abs(freq - lo) < 0.02);
}

TEST_CASE("grid experiment and basin solver through the C surface") {
  ewlab_game* g = nullptr;
  REQUIRE(ewlab_game_load(fixture("exa1").c_str(), &g) == EWLAB_OK);
  ewlab_grid_spec spec{5, 30, 0.1, 1e-4, 100000, 99, 0};
  ewlab_experiment* e = nullptr;
  REQUIRE(ewlab_run_grid(g, &spec, &e) == EWLAB_OK);
  CHECK(ewlab_experiment_equilibria(e) == 2);
  double f = -1;
  REQUIRE(ewlab_experiment_frequency(e, 4, 4, 0, &f) == EWLAB_OK);
  CHECK(f == 1.0);
  CHECK(ewlab_experiment_frequency(e, 9, 0, 0, &f) == EWLAB_ERR_INVALID_ARGUMENT);
  int64_t total = 0;
  REQUIRE(ewlab_experiment_stats(e, &total, nullptr, nullptr, nullptr, nullptr,
                                 nullptr, nullptr, nullptr, nullptr) == EWLAB_OK);
  CHECK(total == 25 * 30);
  REQUIRE(ewlab_experiment_write_matrix_csv(e, 0, "capi_matrix.csv") == EWLAB_OK);
  REQUIRE(ewlab_experiment_write_log_csv(e, "capi_log.csv") == EWLAB_OK);
  std::remove("capi_matrix.csv");
  std::remove("capi_log.csv");
  ewlab_experiment_free(e);

  int64_t total2;
  double capped_fraction, mean;
  int64_t absorbed, capped, max_steps, q50, q90, q99;
  const double p0[4] = {1.0, 0.0, 0.5, 0.5};
  const double etas[2] = {0.1, 0.1};
  REQUIRE(ewlab_absorption_stats(g, p0, etas, 40, 1e-4, 100000, 4, 0, &total2,
                                 &absorbed, &capped, &capped_fraction, &mean,
                                 &max_steps, &q50, &q90, &q99) == EWLAB_OK);
  CHECK(total2 == 40);
  CHECK(absorbed == 40);
  ewlab_game_free(g);

  ewlab_basin* basin = nullptr;
  REQUIRE(ewlab_solve_basin(0.105, 0.105, 11, 5000, 1e-9, &basin) == EWLAB_OK);
  int32_t resolution, iterations, converged;
  double residual;
  REQUIRE(ewlab_basin_info(basin, &resolution, &residual, &iterations, &converged) ==
          EWLAB_OK);
  CHECK(resolution == 11);
  CHECK(converged == 1);
  double center = -1;
  REQUIRE(ewlab_basin_value(basin, 5, 5, &center) == EWLAB_OK);
  CHECK(center == doctest::Approx(0.5).epsilon(1e-3));
  REQUIRE(ewlab_basin_write_csv(basin, "capi_basin.csv") == EWLAB_OK);
  std::remove("capi_basin.csv");
  ewlab_basin_free(basin);
}
