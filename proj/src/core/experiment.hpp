#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "engine.hpp"
#include "game.hpp"

namespace ewlab {

struct ExperimentSpec {
  const Game* game = nullptr;
  std::vector<MixedProfile> cells;  // initial profiles, one per cell
  // set when the cells form an x-by-y grid over a 2x2 game
  std::vector<double> xs, ys;
  int runs = 500;
  std::vector<double> learning_rates;
  double eps = 1e-4;
  std::int64_t t_max = 1000000;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0 = all hardware threads

  bool gridded() const { return !xs.empty() && !ys.empty(); }
  void validate() const;
};

// Uniform [0,1] grids of initial profiles for a 2-action 2-player game;
// x = p1(first action), y = p2(first action).
ExperimentSpec make_grid_spec(const Game& g, int grid_points, int runs,
                              double eta, double eps, std::int64_t t_max,
                              std::uint64_t master_seed);

struct RunRecord {
  std::int32_t cell = 0;
  std::int32_t run = 0;
  std::uint64_t seed = 0;
  std::int32_t outcome = -1;  // index into equilibria, -1 = horizon capped
  std::int64_t steps = 0;
};

struct ExperimentResult {
  std::vector<double> xs, ys;  // empty when not gridded
  int runs = 0;
  std::vector<PureProfile> equilibria;
  std::vector<std::vector<std::int64_t>> counts;  // cell x (equilibria+1), capped last
  std::vector<double> mean_steps;                  // absorbed runs only
  std::vector<std::int64_t> max_steps;
  std::vector<RunRecord> log;

  std::int64_t num_cells() const { return static_cast<std::int64_t>(counts.size()); }
  double frequency(std::int64_t cell, int equilibrium_index) const;
  double capped_fraction(std::int64_t cell) const;
};

// Seeded grid experiment under the absorption stopping rule; identical
// output for any worker count. Requires at least one strict NE.
ExperimentResult run_grid(const ExperimentSpec& spec);

struct AbsorptionTimeStats {
  std::int64_t total_runs = 0;
  std::int64_t absorbed = 0;
  std::int64_t capped = 0;
  double capped_fraction = 0.0;
  double mean = 0.0;  // over absorbed runs
  std::int64_t max = 0;
  std::int64_t q50 = 0, q90 = 0, q99 = 0;
};

AbsorptionTimeStats absorption_time_stats(const ExperimentSpec& spec);
AbsorptionTimeStats absorption_time_stats(const ExperimentResult& result);

// ---------------------------------------------------------------------------
// Grid fixed point for the 2x2 coordination basin function
// ---------------------------------------------------------------------------

struct BasinGrid {
  int resolution = 0;
  double a = 0.0, b = 0.0;
  std::vector<double> values;  // row-major, index ix*resolution + iy
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;

  double at(int ix, int iy) const { return values[ix * resolution + iy]; }
};

// Jacobi iteration of the four-branch self-map with bilinear interpolation
// for off-grid arguments; the corner values 0,0,0,1 are re-imposed each
// sweep. Non-convergence is reported through `converged`, never thrown.
BasinGrid solve_basin_fixed_point(double a, double b, int resolution,
                                  int max_iterations, double tolerance);

void write_matrix_csv(const ExperimentResult& result, int equilibrium_index,
                      const std::string& path);
void write_run_log_csv(const ExperimentResult& result, const std::string& path);
void write_basin_csv(const BasinGrid& grid, const std::string& path);

}  // namespace ewlab
