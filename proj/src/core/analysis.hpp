#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "engine.hpp"
#include "game.hpp"

namespace ewlab {

// Two-sided enclosure of a truncated infinite product.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t terms = 0;  // factors evaluated before the tail bound took over
  double width() const { return hi - lo; }
  std::string to_string() const;
};

struct AbsorptionQuery {
  const Game* game = nullptr;
  PureProfile equilibrium;
  MixedProfile initial_profile;
  std::vector<double> learning_rates;
  double tolerance = 1e-8;
};

// Probability of playing the strict NE at every stage, as a rigorous
// enclosure of the infinite product. Rejects non-strict profiles: there the
// product collapses to 0 for interior starts.
Enclosure prob_always_play(const AbsorptionQuery& q);

// Probability of playing some strict NE under p. Zero when none exist.
double l_statistic(const Game& g, const MixedProfile& p);

// Exact sup-norm distance to Z = {q : q(a) = 0 for every strict NE a},
// by enumerating which player's coordinate is zeroed per equilibrium.
// Falls back to a projected grid search (resolution 1e-3) when the
// pattern count explodes.
double distance_to_z(const Game& g, const MixedProfile& p);

// Running averages (1/t) sum_{k<t} (1_{a^k in B} - p^k(B)) for t=1..T.
std::vector<double> levy_average(const Trajectory& traj,
                                 const std::vector<PureProfile>& B);

enum class VerdictKind { Absorbed, ApproachingZ, ConvergedTo, Undecided };

struct ConvergenceVerdict {
  VerdictKind kind = VerdictKind::Undecided;
  std::optional<PureProfile> equilibrium;   // Absorbed
  std::optional<MixedProfile> candidate;    // ConvergedTo
  bool candidate_is_neep = false;
  double terminal_l = 0.0;
  double distance_z = 0.0;
  std::string to_string(const Game& g) const;
};

// Trailing-window classification of a finished trajectory. Absorption is
// checked first; for games with strict equilibria the approach to Z takes
// precedence over profile stabilization (the Z-bound runs typically pin
// numerically at a boundary profile long before the horizon).
ConvergenceVerdict classify_trajectory(const Game& g, const Trajectory& traj,
                                       double tol = 1e-2);

}  // namespace ewlab
