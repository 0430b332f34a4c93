#pragma once

#include <string>
#include <vector>

#include "game.hpp"

namespace ewlab {

double expected_payoff(const Game& g, const MixedProfile& p, int player);

// Payoff of a pure action against the opponents' part of a mixed profile.
double deviation_payoff(const Game& g, const MixedProfile& p, int player,
                        int action);

// All pure profiles where every unilateral deviation strictly loses,
// in lexicographic order.
std::vector<PureProfile> strict_nash_equilibria(const Game& g);

// Nash equilibrium with equalizing payoffs: Nash within tol, and all
// support actions of each player earn identical payoffs against every
// pure profile in the opponents' support. Support = {a : p(a) > tol}.
bool is_neep(const Game& g, const MixedProfile& p, double tol = 1e-9);
bool is_nash(const Game& g, const MixedProfile& p, double tol = 1e-9);

// One connected piece of the NEEP set of a 2-player game.
struct NeepComponent {
  enum class Kind { Point, Segment, Polytope };
  Kind kind;
  std::vector<int> support1, support2;
  // Point: vertices = {v}; Segment: vertices = {endpoint_a, endpoint_b};
  // Polytope (dimension >= 2): all vertices, plus `constraints` text.
  std::vector<MixedProfile> vertices;
  int dimension = 0;
  std::vector<std::string> constraints;
  std::string describe(const Game& g) const;
};

// Support enumeration over a 2-player game. Components contained in the
// closure of another are dropped; output order is deterministic.
std::vector<NeepComponent> enumerate_neep_2p(const Game& g, double tol = 1e-9);

// Common action set, payoffs positive exactly on the diagonal.
bool is_strong_coordination(const Game& g);

}  // namespace ewlab
