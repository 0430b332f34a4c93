#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "equilibria.hpp"

namespace ewlab {

std::string Enclosure::to_string() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "[%.17g, %.17g] (%.3g)", lo, hi, width());
  return buf;
}

Enclosure prob_always_play(const AbsorptionQuery& q) {
  if (!q.game) throw std::invalid_argument("absorption query: no game");
  if (!(q.tolerance > 0.0))
    throw std::invalid_argument("absorption query: tolerance must be > 0");
  const Game& g = *q.game;
  q.initial_profile.validate_for(g);
  if (static_cast<int>(q.learning_rates.size()) != g.num_players())
    throw std::invalid_argument("absorption query: one learning rate per player");

  const auto sne = strict_nash_equilibria(g);
  if (std::find(sne.begin(), sne.end(), q.equilibrium) == sne.end())
    throw std::invalid_argument(
        "absorption query: profile is not a strict Nash equilibrium (the "
        "always-play probability is 0 from any interior start)");

  // per-term ratio c = p0(b)/p0(a) and decay q = exp(eta*(u(b,a_-i)-u(a)))
  struct Term {
    double c;
    double q;
  };
  std::vector<Term> terms;
  for (int i = 0; i < g.num_players(); ++i) {
    const double pa = q.initial_profile.p[i][q.equilibrium[i]];
    if (pa == 0.0) return {0.0, 0.0, 0};
    const double ua = g.payoff(i, q.equilibrium);
    PureProfile b = q.equilibrium;
    for (int bi = 0; bi < g.action_count(i); ++bi) {
      if (bi == q.equilibrium[i]) continue;
      b[i] = bi;
      const double pb = q.initial_profile.p[i][bi];
      if (pb == 0.0) continue;
      terms.push_back({pb / pa, std::exp(q.learning_rates[i] * (g.payoff(i, b) - ua))});
    }
    b[i] = q.equilibrium[i];
  }
  if (terms.empty()) return {1.0, 1.0, 0};  // Dirac at the equilibrium

  // Product over stages of prod_i 1/(1+S_i(t)). The tail after T is bounded
  // through log(1+x) <= x and the exact geometric sums of the remaining
  // S-terms.
  double prod = 1.0;
  std::int64_t t = 0;
  const std::int64_t hard_cap = 100000000;
  while (true) {
    double tail = 0.0;
    for (const auto& term : terms)
      tail += term.c * std::pow(term.q, static_cast<double>(t)) / (1.0 - term.q);
    if (tail < q.tolerance / 2 || t >= hard_cap) {
      Enclosure e;
      e.hi = prod;
      e.lo = prod * std::exp(-tail);
      e.terms = t;
      return e;
    }
    // group the stage-t factors per player: 1/(1+S_i(t))
    double stage = 1.0;
    size_t idx = 0;
    for (int i = 0; i < g.num_players(); ++i) {
      double si = 0.0;
      for (int bi = 0; bi < g.action_count(i); ++bi) {
        if (bi == q.equilibrium[i]) continue;
        if (q.initial_profile.p[i][bi] == 0.0) continue;
        si += terms[idx].c * std::pow(terms[idx].q, static_cast<double>(t));
        ++idx;
      }
      stage /= (1.0 + si);
    }
    prod *= stage;
    ++t;
  }
}

double l_statistic(const Game& g, const MixedProfile& p) {
  p.validate_for(g);
  double total = 0.0;
  for (const auto& a : strict_nash_equilibria(g)) total += p.prob(a);
  return total;
}

namespace {

double pattern_distance(const Game& g, const MixedProfile& p,
                        const std::vector<PureProfile>& sne,
                        const std::vector<int>& pattern) {
  const int n = g.num_players();
  std::vector<std::vector<int>> zero(n);
  for (size_t k = 0; k < sne.size(); ++k) {
    const int i = pattern[k];
    const int a = sne[k][i];
    if (std::find(zero[i].begin(), zero[i].end(), a) == zero[i].end())
      zero[i].push_back(a);
  }
  double cost = 0.0;
  for (int i = 0; i < n; ++i) {
    if (zero[i].empty()) continue;
    const int remaining = g.action_count(i) - static_cast<int>(zero[i].size());
    if (remaining == 0) return std::numeric_limits<double>::infinity();
    double mass = 0.0, worst = 0.0;
    for (int a : zero[i]) {
      mass += p.p[i][a];
      worst = std::max(worst, p.p[i][a]);
    }
    cost = std::max(cost, std::max(worst, mass / remaining));
  }
  return cost;
}

double grid_distance(const Game& g, const MixedProfile& p,
                     const std::vector<PureProfile>& sne) {
  // projected grid fallback, resolution 1e-3; only 2-player 2-action games
  // realistically land here, larger ones use the exact pattern route
  if (g.num_players() != 2 || g.action_count(0) != 2 || g.action_count(1) != 2)
    throw std::runtime_error("distance_to_z: game too large for exact patterns");
  double best = std::numeric_limits<double>::infinity();
  const int N = 1001;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      MixedProfile q;
      const double x = i / double(N - 1), y = j / double(N - 1);
      q.p = {{x, 1 - x}, {y, 1 - y}};
      bool in_z = true;
      for (const auto& a : sne)
        if (q.prob(a) > 1e-12) in_z = false;
      if (in_z) best = std::min(best, p.sup_distance(q));
    }
  }
  return best;
}

}  // namespace

double distance_to_z(const Game& g, const MixedProfile& p) {
  p.validate_for(g);
  const auto sne = strict_nash_equilibria(g);
  if (sne.empty()) return 0.0;  // Z is all of Delta
  const int n = g.num_players();
  double patterns = 1.0;
  for (size_t k = 0; k < sne.size(); ++k) patterns *= n;
  if (patterns > 1e6) return grid_distance(g, p, sne);

  std::vector<int> pattern(sne.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    best = std::min(best, pattern_distance(g, p, sne, pattern));
    size_t k = 0;
    while (k < pattern.size() && ++pattern[k] == n) pattern[k++] = 0;
    if (k == pattern.size()) break;
  }
  return best;
}

std::vector<double> levy_average(const Trajectory& traj,
                                 const std::vector<PureProfile>& B) {
  if (traj.steps == 0) throw std::invalid_argument("levy_average: empty trajectory");
  const Game& g = *traj.config.game;
  std::vector<bool> member(g.num_profiles(), false);
  for (const auto& a : B) member[g.profile_index(a)] = true;
  std::vector<double> out;
  out.reserve(traj.steps);
  double acc = 0.0;
  replay(traj, [&](std::int64_t t, const MixedProfile& mp) {
    if (t >= traj.steps) return;
    double pb = 0.0;
    for (std::int64_t idx = 0; idx < g.num_profiles(); ++idx)
      if (member[idx]) pb += mp.prob(g.profile_from_index(idx));
    const bool hit = member[g.profile_index(traj.action_at(t))];
    acc += (hit ? 1.0 : 0.0) - pb;
    out.push_back(acc / static_cast<double>(t + 1));
  });
  return out;
}

std::string ConvergenceVerdict::to_string(const Game& g) const {
  char buf[64];
  std::string s;
  switch (kind) {
    case VerdictKind::Absorbed:
      s = "absorbed" + g.profile_to_string(*equilibrium);
      break;
    case VerdictKind::ApproachingZ:
      s = "approaching_Z";
      break;
    case VerdictKind::ConvergedTo: {
      s = "converged_to(";
      for (int i = 0; i < g.num_players(); ++i) {
        if (i) s += " ; ";
        for (int a = 0; a < g.action_count(i); ++a) {
          if (a) s += ",";
          std::snprintf(buf, sizeof(buf), "%.4g", candidate->p[i][a]);
          s += buf;
        }
      }
      s += candidate_is_neep ? ") [NEEP]" : ") [not a NEEP]";
      break;
    }
    case VerdictKind::Undecided:
      s = "undecided";
      break;
  }
  std::snprintf(buf, sizeof(buf), " L_T=%.4g d(p,Z)=%.4g", terminal_l, distance_z);
  return s + buf;
}

ConvergenceVerdict classify_trajectory(const Game& g, const Trajectory& traj,
                                       double tol) {
  if (traj.steps == 0 && traj.actions.empty() && traj.reason != StopReason::Absorbed)
    throw std::invalid_argument("classify_trajectory: empty trajectory");
  const auto sne = strict_nash_equilibria(g);
  const std::int64_t window =
      std::max<std::int64_t>(1, std::min<std::int64_t>(1000, traj.steps / 10));

  ConvergenceVerdict v;
  v.terminal_l = l_statistic(g, traj.terminal);
  v.distance_z = distance_to_z(g, traj.terminal);

  // trailing-window statistics from one replay pass
  bool actions_constant = true;
  PureProfile last_action;
  double trailing_variation = 0.0;
  const std::int64_t from = traj.steps - window;
  replay(traj, [&](std::int64_t t, const MixedProfile& mp) {
    if (t >= from) trailing_variation = std::max(trailing_variation, mp.sup_distance(traj.terminal));
    if (t >= from && t < traj.steps) {
      const PureProfile a = traj.action_at(t);
      if (last_action.empty()) last_action = a;
      else if (a != last_action) actions_constant = false;
    }
  });

  if (!sne.empty()) {
    if (traj.reason == StopReason::Absorbed && traj.absorbed_at &&
        traj.terminal.sup_distance_to_pure(*traj.absorbed_at) < tol) {
      v.kind = VerdictKind::Absorbed;
      v.equilibrium = traj.absorbed_at;
      return v;
    }
    if (actions_constant && !last_action.empty()) {
      const auto it = std::find(sne.begin(), sne.end(), last_action);
      if (it != sne.end() && traj.terminal.sup_distance_to_pure(*it) < tol) {
        v.kind = VerdictKind::Absorbed;
        v.equilibrium = *it;
        return v;
      }
    }
    if (v.terminal_l < tol && v.distance_z < tol) {
      v.kind = VerdictKind::ApproachingZ;
      return v;
    }
  }
  if (trailing_variation < tol) {
    v.kind = VerdictKind::ConvergedTo;
    v.candidate = traj.terminal;
    v.candidate_is_neep = is_neep(g, traj.terminal, tol);
    return v;
  }
  v.kind = VerdictKind::Undecided;
  return v;
}

}  // namespace ewlab
