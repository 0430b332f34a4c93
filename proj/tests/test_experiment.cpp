#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "equilibria.hpp"
#include "experiment.hpp"
#include "game.hpp"

using namespace ewlab;

namespace {
Game load(const std::string& name) {
  return Game::from_json_file(std::string(FIXTURES_DIR) + "/" + name);
}
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("grid experiments are reproducible across thread counts") {
  const Game g = load("exa1");
  ExperimentSpec spec = make_grid_spec(g, 5, 40, 0.1, 1e-4, 200000, 505);
  spec.threads = 1;
  const ExperimentResult serial = run_grid(spec);
  spec.threads = 8;
  const ExperimentResult parallel = run_grid(spec);
  CHECK(serial.counts == parallel.counts);
  REQUIRE(serial.log.size() == parallel.log.size());
  for (size_t k = 0; k < serial.log.size(); ++k) {
    CHECK(serial.log[k].seed == parallel.log[k].seed);
    CHECK(serial.log[k].outcome == parallel.log[k].outcome);
    CHECK(serial.log[k].steps == parallel.log[k].steps);
  }
}

TEST_CASE("grid boundary cells are deterministic") {
  const Game g = load("exa1");
  ExperimentSpec spec = make_grid_spec(g, 5, 30, 0.1, 1e-4, 100000, 1);
  const ExperimentResult r = run_grid(spec);
  const int ny = 5;
  // (T,L) is equilibrium index 0
  for (int iy = 0; iy < ny; ++iy) {
    CHECK(r.frequency(0 * ny + iy, 0) == 0.0);  // x = 0 row never reaches (T,L)
    if (iy > 0) CHECK(r.frequency(4 * ny + iy, 0) == 1.0);  // x = 1, y > 0
  }
  for (int ix = 0; ix < 5; ++ix) CHECK(r.frequency(ix * ny + 0, 0) == 0.0);
  // frozen off-diagonal corners cap at the horizon
  CHECK(r.capped_fraction(0 * ny + 4) == 1.0);  // (0,1) start (B,L)
  CHECK(r.capped_fraction(4 * ny + 0) == 1.0);  // (1,0) start (T,R)
  // interior cells absorb
  CHECK(r.capped_fraction(2 * ny + 2) == 0.0);
  // per-cell counts always add up to the run count
  for (std::int64_t cell = 0; cell < r.num_cells(); ++cell) {
    std::int64_t total = 0;
    for (auto c : r.counts[cell]) total += c;
    CHECK(total == 30);
  }
}

TEST_CASE("grid frequencies are monotone along rows and split at the antidiagonal") {
  const Game g = load("exa1");
  ExperimentSpec spec = make_grid_spec(g, 11, 120, 0.1, 1e-4, 300000, 77);
  const ExperimentResult r = run_grid(spec);
  const int ny = 11;
  const double slack = 2.0 * std::sqrt(0.25 / 120);  // two sigma at p = 1/2
  for (int ix = 0; ix < 11; ++ix)
    for (int iy = 0; iy + 1 < ny; ++iy)
      CHECK(r.frequency(ix * ny + iy + 1, 0) >=
            r.frequency(ix * ny + iy, 0) - slack);
  // cells below the antidiagonal exceed one half, cells above fall short
  // (the basin boundary is steep at this rate, so 120 runs is plenty)
  for (int ix = 1; ix < 10; ++ix) {
    for (int iy = 1; iy < 10; ++iy) {
      if (ix + iy == 10) continue;
      const double f = r.frequency(ix * ny + iy, 0);
      if (ix + iy > 10) CHECK(f > 0.5);
      else CHECK(f < 0.5);
    }
  }
}

TEST_CASE("absorption times: degenerate and capped cases") {
  const Game g = load("exa1");
  SUBCASE("Dirac start at a strict equilibrium absorbs at stage zero") {
    ExperimentSpec spec;
    spec.game = &g;
    spec.cells = {MixedProfile::dirac(g, {0, 0})};
    spec.runs = 50;
    spec.learning_rates = {0.1, 0.1};
    spec.master_seed = 3;
    const AbsorptionTimeStats st = absorption_time_stats(spec);
    CHECK(st.absorbed == 50);
    CHECK(st.capped == 0);
    CHECK(st.mean == 0.0);
    CHECK(st.max == 0);
  }
  SUBCASE("games without strict equilibria cap every run") {
    const Game mp = load("matching_pennies");
    ExperimentSpec spec;
    spec.game = &mp;
    spec.cells = {MixedProfile::uniform(mp)};
    spec.runs = 20;
    spec.learning_rates = {0.1, 0.1};
    spec.t_max = 5000;
    CHECK_THROWS_AS(run_grid(spec), std::invalid_argument);
    const AbsorptionTimeStats st = absorption_time_stats(spec);
    CHECK(st.capped_fraction == 1.0);
    CHECK(st.absorbed == 0);
    CHECK(st.total_runs == 20);
  }
  SUBCASE("three-action coordination from uniform rarely caps") {
    const Game coord3 = load("coord3");
    ExperimentSpec spec;
    spec.game = &coord3;
    spec.cells = {MixedProfile::uniform(coord3)};
    spec.runs = 1000;
    spec.learning_rates = {0.1, 0.1};
    spec.t_max = 1000000;
    spec.master_seed = 12;
    const AbsorptionTimeStats st = absorption_time_stats(spec);
    CHECK(st.capped_fraction <= 0.01);
    CHECK(st.q50 > 0);
    CHECK(st.q99 >= st.q90);
    CHECK(st.max >= st.q99);
  }
}

TEST_CASE("basin solver: corners, convergence, symmetry") {
  const double a = std::expm1(0.1);
  const BasinGrid grid = solve_basin_fixed_point(a, a, 11, 20000, 1e-10);
  REQUIRE(grid.converged);
  CHECK(grid.residual < 1e-10);
  CHECK(grid.at(0, 0) == 0.0);
  CHECK(grid.at(0, 10) == 0.0);
  CHECK(grid.at(10, 0) == 0.0);
  CHECK(grid.at(10, 10) == 1.0);
  // f(x, 1-x) = 1/2 on the interior antidiagonal for equal rates
  for (int i = 1; i < 10; ++i)
    CHECK(std::abs(grid.at(i, 10 - i) - 0.5) < 5e-3);
  // antisymmetry f(x,y) = 1 - f(1-x,1-y) away from the pinned corners
  for (int i = 1; i < 10; ++i)
    for (int j = 1; j < 10; ++j)
      CHECK(std::abs(grid.at(i, j) - (1.0 - grid.at(10 - i, 10 - j))) < 5e-3);
  // interior values are probabilities and increase along rows
  for (int i = 1; i < 10; ++i)
    for (int j = 0; j + 1 < 11; ++j) {
      CHECK(grid.at(i, j) >= 0.0);
      CHECK(grid.at(i, j) <= grid.at(i, j + 1) + 1e-12);
    }
}

TEST_CASE("basin solver: the residual decreases monotonically") {
  // run the sweep loop manually through increasing iteration caps
  const double a = std::expm1(0.2), b = std::expm1(0.05);
  double last = std::numeric_limits<double>::infinity();
  for (int iters = 2; iters <= 128; iters *= 2) {
    const BasinGrid g = solve_basin_fixed_point(a, b, 11, iters, 0.0);
    CHECK(g.residual <= last * (1 + 1e-12));
    last = g.residual;
  }
  // an impossible tolerance reports non-convergence instead of throwing
  const BasinGrid g = solve_basin_fixed_point(a, b, 11, 5, 0.0);
  CHECK_FALSE(g.converged);
  CHECK(g.iterations == 5);
  CHECK(g.residual > 0.0);
}

TEST_CASE("basin solver rejects bad parameters") {
  CHECK_THROWS_AS(solve_basin_fixed_point(0.1, 0.1, 5, 100, 1e-8),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_basin_fixed_point(-0.5, 0.1, 11, 100, 1e-8),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_basin_fixed_point(0.1, 0.1, 11, 0, 1e-8),
                  std::invalid_argument);
}

TEST_CASE("csv exports are byte-identical across invocations") {
  const Game g = load("exa1");
  ExperimentSpec spec = make_grid_spec(g, 5, 20, 0.1, 1e-4, 100000, 2024);
  const ExperimentResult r = run_grid(spec);
  write_matrix_csv(r, 0, "m1.csv");
  write_matrix_csv(r, 0, "m2.csv");
  CHECK(slurp("m1.csv") == slurp("m2.csv"));
  CHECK(slurp("m1.csv").substr(0, 4) == "x\\y,");
  write_run_log_csv(r, "l1.csv");
  write_run_log_csv(r, "l2.csv");
  CHECK(slurp("l1.csv") == slurp("l2.csv"));

  const BasinGrid grid = solve_basin_fixed_point(0.1, 0.1, 11, 2000, 1e-9);
  write_basin_csv(grid, "b1.csv");
  write_basin_csv(grid, "b2.csv");
  CHECK(slurp("b1.csv") == slurp("b2.csv"));
  CHECK(slurp("b1.csv").find("residual=") != std::string::npos);
  for (const char* f : {"m1.csv", "m2.csv", "l1.csv", "l2.csv", "b1.csv", "b2.csv"})
    std::remove(f);
}

TEST_CASE("basin solver tracks the Monte Carlo frequencies") {
  // resolution 41 keeps the interpolation bias below the 500-run binomial
  // noise; its node set contains the 11x11 comparison points (the
  // acceptance suite repeats this at rate 0.1, resolution 81)
  const Game g = load("exa1");
  ExperimentSpec spec = make_grid_spec(g, 11, 500, 0.3, 1e-4, 1000000, 808);
  const ExperimentResult mc = run_grid(spec);
  const BasinGrid basin =
      solve_basin_fixed_point(std::expm1(0.3), std::expm1(0.3), 41, 100000, 1e-10);
  double dev = 0;
  for (int ix = 0; ix < 11; ++ix)
    for (int iy = 0; iy < 11; ++iy) {
      if ((ix == 10 && iy == 0) || (ix == 0 && iy == 10)) continue;
      dev = std::max(dev,
                     std::abs(mc.frequency(ix * 11 + iy, 0) - basin.at(4 * ix, 4 * iy)));
    }
  CHECK(dev < 0.08);
}

TEST_CASE("binomial consistency between independent master seeds") {
  const Game g = load("exa1");
  ExperimentSpec spec = make_grid_spec(g, 11, 150, 0.1, 1e-4, 300000, 555);
  const ExperimentResult r1 = run_grid(spec);
  spec.master_seed = 556;
  const ExperimentResult r2 = run_grid(spec);
  int ok = 0, cells = 0;
  for (std::int64_t cell = 0; cell < r1.num_cells(); ++cell) {
    const double f1 = r1.frequency(cell, 0), f2 = r2.frequency(cell, 0);
    const double pbar = 0.5 * (f1 + f2);
    const double sigma = std::sqrt(std::max(pbar * (1 - pbar), 1e-9) * 2.0 / 150);
    ++cells;
    if (std::abs(f1 - f2) <= 3 * sigma + 1e-12) ++ok;
  }
  CHECK(ok >= cells * 99 / 100);
}
