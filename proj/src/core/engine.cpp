#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "equilibria.hpp"

namespace ewlab {

void EwConfig::validate() const {
  if (!game) throw std::invalid_argument("ew config: no game");
  if (static_cast<int>(learning_rates.size()) != game->num_players())
    throw std::invalid_argument("ew config: one learning rate per player required");
  for (double eta : learning_rates)
    if (!(eta > 0.0)) throw std::invalid_argument("ew config: learning rates must be > 0");
  initial_profile.validate_for(*game);
}

std::string EwConfig::digest() const {
  std::uint64_t h = hash64(0x65776c6162ULL, seed);
  for (int m : game->action_counts()) h = hash64(h, static_cast<std::uint64_t>(m));
  auto fold = [&](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h = hash64(h, bits);
  };
  for (double eta : learning_rates) fold(eta);
  for (const auto& vec : initial_profile.p)
    for (double v : vec) fold(v);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EwState::EwState(EwConfig config) : config_(std::move(config)) {
  config_.validate();
  const Game& g = *config_.game;
  logw_.resize(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    logw_[i].resize(g.action_count(i));
    for (int a = 0; a < g.action_count(i); ++a) {
      const double p0 = config_.initial_profile.p[i][a];
      logw_[i][a] = p0 > 0.0 ? std::log(p0)
                             : -std::numeric_limits<double>::infinity();
    }
  }
}

void EwState::mixed_profile_into(MixedProfile& out) const {
  out.p.resize(logw_.size());
  for (size_t i = 0; i < logw_.size(); ++i) {
    out.p[i].resize(logw_[i].size());
    double mx = -std::numeric_limits<double>::infinity();
    for (double l : logw_[i]) mx = std::max(mx, l);
    double sum = 0.0;
    for (size_t a = 0; a < logw_[i].size(); ++a) {
      const double w = std::exp(logw_[i][a] - mx);
      out.p[i][a] = w;
      sum += w;
    }
    for (double& v : out.p[i]) v /= sum;
  }
}

MixedProfile EwState::mixed_profile() const {
  MixedProfile mp;
  mixed_profile_into(mp);
  return mp;
}

void EwState::apply_action(const PureProfile& a) {
  const Game& g = *config_.game;
  PureProfile probe = a;
  for (int i = 0; i < g.num_players(); ++i) {
    const double eta = config_.learning_rates[i];
    for (int b = 0; b < g.action_count(i); ++b) {
      probe[i] = b;
      logw_[i][b] += eta * g.payoff(i, probe);
    }
    probe[i] = a[i];
  }
  ++stage_;
}

PureProfile EwState::step(Rng& rng) {
  const Game& g = *config_.game;
  MixedProfile mp = mixed_profile();
  PureProfile a(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) a[i] = rng.categorical(mp.p[i]);
  apply_action(a);
  return a;
}

void EwState::shift_player(int player, double c) {
  for (double& l : logw_[player]) l += c;
}

StoppingRule StoppingRule::horizon(std::int64_t t) {
  StoppingRule r;
  r.kind = StopKind::Horizon;
  r.t_max = t;
  return r;
}

StoppingRule StoppingRule::absorption(double eps, std::int64_t t_max_fallback) {
  StoppingRule r;
  r.kind = StopKind::Absorption;
  r.eps = eps;
  r.t_max = t_max_fallback;
  return r;
}

PureProfile Trajectory::action_at(std::int64_t t) const {
  const int n = config.game->num_players();
  PureProfile a(n);
  for (int i = 0; i < n; ++i) a[i] = actions[t * n + i];
  return a;
}

MixedProfile closed_form_profile(const EwConfig& config,
                                 const std::vector<PureProfile>& history) {
  config.validate();
  const Game& g = *config.game;
  // cumulative payoff sums per (player, action), multiplied by eta once
  std::vector<std::vector<double>> acc(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) acc[i].assign(g.action_count(i), 0.0);
  PureProfile probe(g.num_players());
  for (const auto& a : history) {
    if (static_cast<int>(a.size()) != g.num_players())
      throw std::invalid_argument("history profile has wrong arity");
    probe = a;
    for (int i = 0; i < g.num_players(); ++i) {
      for (int b = 0; b < g.action_count(i); ++b) {
        probe[i] = b;
        acc[i][b] += g.payoff(i, probe);
      }
      probe[i] = a[i];
    }
  }
  MixedProfile out;
  out.p.resize(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    const double eta = config.learning_rates[i];
    std::vector<double> logw(g.action_count(i));
    double mx = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < g.action_count(i); ++a) {
      const double p0 = config.initial_profile.p[i][a];
      logw[a] = (p0 > 0.0 ? std::log(p0) : -std::numeric_limits<double>::infinity()) +
                eta * acc[i][a];
      mx = std::max(mx, logw[a]);
    }
    out.p[i].resize(g.action_count(i));
    double sum = 0.0;
    for (int a = 0; a < g.action_count(i); ++a) {
      out.p[i][a] = std::exp(logw[a] - mx);
      sum += out.p[i][a];
    }
    for (double& v : out.p[i]) v /= sum;
  }
  return out;
}

namespace {

int nearest_absorbed(const MixedProfile& mp,
                     const std::vector<PureProfile>& sne, double eps) {
  for (size_t k = 0; k < sne.size(); ++k)
    if (mp.sup_distance_to_pure(sne[k]) < eps) return static_cast<int>(k);
  return -1;
}

}  // namespace

Trajectory simulate(const EwConfig& config, const StoppingRule& stop) {
  config.validate();
  const Game& g = *config.game;
  std::vector<PureProfile> sne;
  if (stop.kind == StopKind::Absorption) {
    sne = strict_nash_equilibria(g);
    if (sne.empty() && stop.t_max <= 0)
      throw std::invalid_argument(
          "absorption stopping rule without horizon fallback on a game with no "
          "strict Nash equilibrium");
  }

  Trajectory traj;
  traj.config = config;
  EwState st(config);
  Rng rng(config.seed);
  MixedProfile mp = st.mixed_profile();
  const int n = g.num_players();

  while (true) {
    if (stop.kind == StopKind::Absorption) {
      const int hit = nearest_absorbed(mp, sne, stop.eps);
      if (hit >= 0) {
        traj.reason = StopReason::Absorbed;
        traj.absorbed_at = sne[hit];
        break;
      }
    }
    if (stop.t_max > 0 && st.stage() >= stop.t_max) {
      traj.reason = StopReason::HorizonReached;
      break;
    }
    const PureProfile a = st.step(rng);
    for (int i = 0; i < n; ++i) traj.actions.push_back(a[i]);
    st.mixed_profile_into(mp);
  }
  traj.steps = st.stage();
  traj.terminal = mp;
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  const Game& g = *traj.config.game;
  out << "# config_digest=" << traj.config.digest() << " seed=" << traj.config.seed
      << "\n";
  out << "t";
  for (int i = 0; i < g.num_players(); ++i)
    for (int a = 0; a < g.action_count(i); ++a)
      out << ",p" << i + 1 << "_" << g.action_label(i, a);
  for (int i = 0; i < g.num_players(); ++i) out << ",a" << i + 1;
  out << "\n";
  char buf[64];
  replay(traj, [&](std::int64_t t, const MixedProfile& mp) {
    out << t;
    for (const auto& vec : mp.p)
      for (double v : vec) {
        std::snprintf(buf, sizeof(buf), ",%.17g", v);
        out << buf;
      }
    if (t < traj.steps) {
      const PureProfile a = traj.action_at(t);
      for (int i = 0; i < g.num_players(); ++i)
        out << "," << g.action_label(i, a[i]);
    } else {
      for (int i = 0; i < g.num_players(); ++i) out << ",";
    }
    out << "\n";
  });
}

}  // namespace ewlab
