#pragma once

#include <cstdint>
#include <vector>

#include "analysis.hpp"
#include "game.hpp"
#include "rng.hpp"

namespace ewlab {

// 1 / max_k prod_i p_i(k) over the common action set. +infinity when every
// diagonal action has a zero factor.
double potential_z(const Game& g, const MixedProfile& p);
int potential_z_argmin(const Game& g, const MixedProfile& p);

struct OneStepPotential {
  double current = 0.0;        // Z_t(k)
  double expected = 0.0;       // exact E(Z_{t+1}(k) | state), m^n enumeration
  double x_enumerated = 0.0;   // expected / current
  double x_closed_form = 0.0;  // case-expansion value of X_t
  double x_upper_bound = 0.0;  // 1 + C/Z - D n Z^{-(n-1)/n} with game constants
};

// Exact one-step conditional expectation of the diagonal potential at k,
// next to the closed-form X_t of the drift expansion. The enumeration is
// capped at `enumeration_cap` realized profiles. The upper-bound field is
// derived for k attaining the potential (potential_z_argmin); for other k
// it is reported but carries no guarantee.
OneStepPotential one_step_expected_potential(const Game& g, const MixedProfile& p,
                                             const std::vector<double>& etas, int k,
                                             std::int64_t enumeration_cap = 1000000);

struct SupermartingaleConstants {
  double c = 0.0;
  double d = 0.0;
  double m0 = 0.0;
};

// Constants of the coordination drift bound, taken worst-case over which
// diagonal action plays the reference role so that m0 is state independent.
// The linear alpha/(1+alpha) term is counted twice in C; a tighter constant
// likely exists.
SupermartingaleConstants supermartingale_constants(const Game& g,
                                                   const std::vector<double>& etas);

// ---------------------------------------------------------------------------
// The 3x3 near-coordination game with the (1/2,1/2) off-diagonal entry.
// ---------------------------------------------------------------------------

Game make_exa7_game();
bool is_exa7_game(const Game& g);

// min{ 1/(x1 y1), 1/(y2 (x2+x3)), 1/(x3 (y2+y3)) }
double potential_zprime(const MixedProfile& p);

// exact 9-profile enumeration of E(Z'_{t+1} | state)
double one_step_expected_zprime(const MixedProfile& p, const std::vector<double>& etas);

// Sampled calibration of the threshold above which Z' behaves as a
// supermartingale: largest sampled violation times a safety factor.
double calibrate_zprime_m0(const std::vector<double>& etas, int samples = 100000,
                           std::uint64_t seed = 20240901);

// ---------------------------------------------------------------------------
// 2x2 pure coordination drift
// ---------------------------------------------------------------------------

// Closed-form one-step drift E(u(p^1)) - u(p^0) of the common payoff
// u = xy + (1-x)(1-y), with a = e^{eta1}-1, b = e^{eta2}-1.
double drift_2x2(double a, double b, double x, double y);

// Same expectation assembled from the four realized outcomes through the
// engine's update rule; oracle for the closed form.
double drift_2x2_direct(double a, double b, double x, double y);

// ---------------------------------------------------------------------------
// Example-18 counting chain (B_t, R_t)
// ---------------------------------------------------------------------------

struct Ex18Chain {
  std::vector<std::int64_t> b;  // b[t], r[t] for t = 0..steps
  std::vector<std::int64_t> r;
};

Ex18Chain ex18_chain(double x, double y, double eta1, double eta2,
                     std::uint64_t seed, std::int64_t steps);

// P(player 2 plays L forever) = prod_t 1/(1 + (1-y)/(y(1-x)) e^{-eta2 t}).
Enclosure ex18_always_l_probability(double x, double y, double eta2,
                                    double tolerance);
// Symmetric product for player 1 playing T forever.
Enclosure ex18_always_t_probability(double x, double y, double eta1,
                                    double tolerance);

// Frequency over `runs` chains of "R stays 0 until B reaches horizon",
// whose exact probability is the truncated always-L product.
double ex18_always_l_frequency(double x, double y, double eta1, double eta2,
                               std::int64_t horizon, int runs, std::uint64_t seed);

}  // namespace ewlab
