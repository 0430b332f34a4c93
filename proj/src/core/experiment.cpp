#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "equilibria.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace ewlab {

void ExperimentSpec::validate() const {
  if (!game) throw std::invalid_argument("experiment: no game");
  if (cells.empty()) throw std::invalid_argument("experiment: empty grid");
  if (runs < 1) throw std::invalid_argument("experiment: runs must be >= 1");
  if (!(eps > 0)) throw std::invalid_argument("experiment: eps must be > 0");
  if (static_cast<int>(learning_rates.size()) != game->num_players())
    throw std::invalid_argument("experiment: one learning rate per player");
  for (const auto& cell : cells) cell.validate_for(*game);
}

ExperimentSpec make_grid_spec(const Game& g, int grid_points, int runs,
                              double eta, double eps, std::int64_t t_max,
                              std::uint64_t master_seed) {
  if (g.num_players() != 2 || g.action_count(0) != 2 || g.action_count(1) != 2)
    throw std::invalid_argument("grid spec: the x-y grid needs a 2x2 game");
  if (grid_points < 2) throw std::invalid_argument("grid spec: need >= 2 points");
  ExperimentSpec spec;
  spec.game = &g;
  for (int i = 0; i < grid_points; ++i)
    spec.xs.push_back(static_cast<double>(i) / (grid_points - 1));
  spec.ys = spec.xs;
  for (double x : spec.xs) {
    for (double y : spec.ys) {
      MixedProfile p;
      p.p = {{x, 1 - x}, {y, 1 - y}};
      spec.cells.push_back(std::move(p));
    }
  }
  spec.runs = runs;
  spec.learning_rates = {eta, eta};
  spec.eps = eps;
  spec.t_max = t_max;
  spec.master_seed = master_seed;
  return spec;
}

namespace {

struct LeanOutcome {
  std::int32_t outcome = -1;  // equilibrium index or -1
  std::int64_t steps = 0;
};

bool fully_pure(const MixedProfile& mp) {
  for (const auto& vec : mp.p) {
    bool has_one = false;
    for (double v : vec) {
      if (v == 1.0) has_one = true;
      else if (v != 0.0) return false;
    }
    if (!has_one) return false;
  }
  return true;
}

// Absorption-rule run without history recording. A fully pure profile is a
// fixed point of the chain, so such runs resolve immediately.
LeanOutcome run_lean(const Game& g, const std::vector<double>& etas,
                     const MixedProfile& p0, std::uint64_t seed,
                     const std::vector<PureProfile>& sne, double eps,
                     std::int64_t t_max) {
  EwConfig cfg;
  cfg.game = &g;
  cfg.learning_rates = etas;
  cfg.initial_profile = p0;
  cfg.seed = seed;
  EwState st(cfg);
  Rng rng(seed);
  MixedProfile mp = st.mixed_profile();
  LeanOutcome out;
  while (true) {
    int hit = -1;
    for (size_t k = 0; k < sne.size(); ++k) {
      if (mp.sup_distance_to_pure(sne[k]) < eps) {
        hit = static_cast<int>(k);
        break;
      }
    }
    if (hit >= 0) {
      out.outcome = hit;
      out.steps = st.stage();
      return out;
    }
    if (st.stage() >= t_max || fully_pure(mp)) {
      out.outcome = -1;
      out.steps = t_max;
      return out;
    }
    st.step(rng);
    st.mixed_profile_into(mp);
  }
}

}  // namespace

double ExperimentResult::frequency(std::int64_t cell, int equilibrium_index) const {
  return static_cast<double>(counts[cell][equilibrium_index]) / runs;
}

double ExperimentResult::capped_fraction(std::int64_t cell) const {
  return static_cast<double>(counts[cell].back()) / runs;
}

ExperimentResult run_grid(const ExperimentSpec& spec) {
  spec.validate();
  const Game& g = *spec.game;
  const auto sne = strict_nash_equilibria(g);
  if (sne.empty())
    throw std::invalid_argument("run_grid: the game has no strict Nash equilibrium");

  ExperimentResult result;
  result.xs = spec.xs;
  result.ys = spec.ys;
  result.runs = spec.runs;
  result.equilibria = sne;
  const std::int64_t num_cells = static_cast<std::int64_t>(spec.cells.size());
  result.counts.assign(num_cells, std::vector<std::int64_t>(sne.size() + 1, 0));
  result.mean_steps.assign(num_cells, 0.0);
  result.max_steps.assign(num_cells, 0);
  result.log.resize(num_cells * spec.runs);

  const int ny = static_cast<int>(spec.ys.size());
  parallel_for(num_cells, spec.threads, [&](std::int64_t cell) {
    const std::uint64_t cx = spec.gridded() ? cell / ny : cell;
    const std::uint64_t cy = spec.gridded() ? cell % ny : 0;
    for (int r = 0; r < spec.runs; ++r) {
      const std::uint64_t seed = hash64(spec.master_seed, cx, cy, r);
      const LeanOutcome lo = run_lean(g, spec.learning_rates, spec.cells[cell],
                                      seed, sne, spec.eps, spec.t_max);
      RunRecord& rec = result.log[cell * spec.runs + r];
      rec.cell = static_cast<std::int32_t>(cell);
      rec.run = r;
      rec.seed = seed;
      rec.outcome = lo.outcome;
      rec.steps = lo.steps;
    }
  });

  for (const auto& rec : result.log) {
    auto& row = result.counts[rec.cell];
    if (rec.outcome >= 0) {
      ++row[rec.outcome];
      result.mean_steps[rec.cell] += static_cast<double>(rec.steps);
      result.max_steps[rec.cell] = std::max(result.max_steps[rec.cell], rec.steps);
    } else {
      ++row.back();
    }
  }
  for (std::int64_t cell = 0; cell < num_cells; ++cell) {
    const std::int64_t absorbed = spec.runs - result.counts[cell].back();
    if (absorbed > 0) result.mean_steps[cell] /= static_cast<double>(absorbed);
  }
  return result;
}

AbsorptionTimeStats absorption_time_stats(const ExperimentResult& result) {
  AbsorptionTimeStats st;
  std::vector<std::int64_t> times;
  for (const auto& rec : result.log) {
    ++st.total_runs;
    if (rec.outcome >= 0) {
      ++st.absorbed;
      times.push_back(rec.steps);
    } else {
      ++st.capped;
    }
  }
  st.capped_fraction =
      st.total_runs ? static_cast<double>(st.capped) / st.total_runs : 0.0;
  if (!times.empty()) {
    std::sort(times.begin(), times.end());
    double sum = 0;
    for (auto t : times) sum += static_cast<double>(t);
    st.mean = sum / times.size();
    st.max = times.back();
    auto q = [&](double f) {
      return times[static_cast<size_t>(f * (times.size() - 1))];
    };
    st.q50 = q(0.5);
    st.q90 = q(0.9);
    st.q99 = q(0.99);
  }
  return st;
}

AbsorptionTimeStats absorption_time_stats(const ExperimentSpec& spec) {
  spec.validate();
  if (strict_nash_equilibria(*spec.game).empty()) {
    // nothing to absorb into: every run is horizon-capped
    AbsorptionTimeStats st;
    st.total_runs = static_cast<std::int64_t>(spec.cells.size()) * spec.runs;
    st.capped = st.total_runs;
    st.capped_fraction = 1.0;
    return st;
  }
  return absorption_time_stats(run_grid(spec));
}

// ---------------------------------------------------------------------------

BasinGrid solve_basin_fixed_point(double a, double b, int resolution,
                                  int max_iterations, double tolerance) {
  if (resolution < 11)
    throw std::invalid_argument("basin solver: resolution must be >= 11");
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("basin solver: a and b must be > 0");
  if (tolerance < 0 || max_iterations < 1)
    throw std::invalid_argument("basin solver: bad iteration parameters");

  const int N = resolution;
  BasinGrid grid;
  grid.resolution = N;
  grid.a = a;
  grid.b = b;
  grid.values.assign(N * N, 0.0);

  // Precompute, per node and branch, the interpolation stencil of the
  // four successor points. Branch order: (T,L) (T,R) (B,L) (B,R).
  struct Stencil {
    int i0, j0;
    double fx, fy;
  };
  std::vector<Stencil> stencils(static_cast<size_t>(N) * N * 4);
  auto gain = [](double v, double r) { return v * (1 + r) / (1 + r * v); };
  auto lose = [](double v, double r) { return v / (1 + r * (1 - v)); };
  auto make_stencil = [&](double px, double py) {
    Stencil s;
    double gx = px * (N - 1), gy = py * (N - 1);
    gx = std::min(std::max(gx, 0.0), static_cast<double>(N - 1));
    gy = std::min(std::max(gy, 0.0), static_cast<double>(N - 1));
    s.i0 = std::min(static_cast<int>(gx), N - 2);
    s.j0 = std::min(static_cast<int>(gy), N - 2);
    s.fx = gx - s.i0;
    s.fy = gy - s.j0;
    return s;
  };
  for (int i = 0; i < N; ++i) {
    const double x = static_cast<double>(i) / (N - 1);
    for (int j = 0; j < N; ++j) {
      const double y = static_cast<double>(j) / (N - 1);
      Stencil* s = &stencils[(static_cast<size_t>(i) * N + j) * 4];
      s[0] = make_stencil(gain(x, a), gain(y, b));
      s[1] = make_stencil(lose(x, a), gain(y, b));
      s[2] = make_stencil(gain(x, a), lose(y, b));
      s[3] = make_stencil(lose(x, a), lose(y, b));
    }
  }

  std::vector<double>& f = grid.values;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      f[i * N + j] = (static_cast<double>(i) / (N - 1) + static_cast<double>(j) / (N - 1)) / 2;
  auto pin_corners = [&](std::vector<double>& v) {
    v[0] = 0.0;                  // (0,0)
    v[N - 1] = 0.0;              // (0,1)
    v[(N - 1) * N] = 0.0;        // (1,0)
    v[(N - 1) * N + N - 1] = 1.0;  // (1,1)
  };
  pin_corners(f);

  std::vector<double> next(f.size());
  auto interp = [&](const std::vector<double>& v, const Stencil& s) {
    const double f00 = v[s.i0 * N + s.j0], f10 = v[(s.i0 + 1) * N + s.j0];
    const double f01 = v[s.i0 * N + s.j0 + 1], f11 = v[(s.i0 + 1) * N + s.j0 + 1];
    return f00 * (1 - s.fx) * (1 - s.fy) + f10 * s.fx * (1 - s.fy) +
           f01 * (1 - s.fx) * s.fy + f11 * s.fx * s.fy;
  };

  for (grid.iterations = 0; grid.iterations < max_iterations; ++grid.iterations) {
    double residual = 0.0;
    for (int i = 0; i < N; ++i) {
      const double x = static_cast<double>(i) / (N - 1);
      for (int j = 0; j < N; ++j) {
        const double y = static_cast<double>(j) / (N - 1);
        const Stencil* s = &stencils[(static_cast<size_t>(i) * N + j) * 4];
        next[i * N + j] = x * y * interp(f, s[0]) + x * (1 - y) * interp(f, s[1]) +
                          (1 - x) * y * interp(f, s[2]) +
                          (1 - x) * (1 - y) * interp(f, s[3]);
      }
    }
    pin_corners(next);
    for (size_t k = 0; k < f.size(); ++k)
      residual = std::max(residual, std::abs(next[k] - f[k]));
    f.swap(next);
    grid.residual = residual;
    if (residual < tolerance) {
      ++grid.iterations;
      grid.converged = true;
      break;
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------

void write_matrix_csv(const ExperimentResult& result, int equilibrium_index,
                      const std::string& path) {
  if (result.xs.empty())
    throw std::invalid_argument("matrix export requires a gridded experiment");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  char buf[64];
  out << "x\\y";
  for (double y : result.ys) {
    std::snprintf(buf, sizeof(buf), ",%.17g", y);
    out << buf;
  }
  out << "\n";
  const int ny = static_cast<int>(result.ys.size());
  for (size_t ix = 0; ix < result.xs.size(); ++ix) {
    std::snprintf(buf, sizeof(buf), "%.17g", result.xs[ix]);
    out << buf;
    for (int iy = 0; iy < ny; ++iy) {
      std::snprintf(buf, sizeof(buf), ",%.17g",
                    result.frequency(ix * ny + iy, equilibrium_index));
      out << buf;
    }
    out << "\n";
  }
}

void write_run_log_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "cell,run,seed,verdict,steps\n";
  for (const auto& rec : result.log) {
    out << rec.cell << "," << rec.run << "," << rec.seed << ","
        << (rec.outcome >= 0 ? std::to_string(rec.outcome) : std::string("capped"))
        << "," << rec.steps << "\n";
  }
}

void write_basin_csv(const BasinGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  char buf[192];
  std::snprintf(buf, sizeof(buf), "# a=%.17g b=%.17g residual=%.17g iterations=%d converged=%d\n",
                grid.a, grid.b, grid.residual, grid.iterations,
                grid.converged ? 1 : 0);
  out << buf;
  const int N = grid.resolution;
  out << "x\\y";
  for (int j = 0; j < N; ++j) {
    std::snprintf(buf, sizeof(buf), ",%.17g", static_cast<double>(j) / (N - 1));
    out << buf;
  }
  out << "\n";
  for (int i = 0; i < N; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(i) / (N - 1));
    out << buf;
    for (int j = 0; j < N; ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", grid.at(i, j));
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace ewlab
