#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "game.hpp"
#include "rng.hpp"

namespace ewlab {

struct EwConfig {
  const Game* game = nullptr;
  std::vector<double> learning_rates;  // eta_i > 0 per player
  MixedProfile initial_profile;
  std::uint64_t seed = 0;

  void validate() const;
  // stable digest of game shape, rates, initial profile and seed,
  // printed into trajectory exports
  std::string digest() const;
};

// Per-player cumulative log-weights; the mixed profile is read off by a
// max-shifted softmax, so weights never overflow no matter the horizon.
class EwState {
 public:
  explicit EwState(EwConfig config);

  const Game& game() const { return *config_.game; }
  std::int64_t stage() const { return stage_; }
  const std::vector<std::vector<double>>& log_weights() const { return logw_; }

  MixedProfile mixed_profile() const;
  void mixed_profile_into(MixedProfile& out) const;

  // One EW stage: sample a profile (players draw in order) and update.
  PureProfile step(Rng& rng);
  // Same update rule with the realized profile imposed.
  void apply_action(const PureProfile& a);

  // Shift-invariance hook used by tests.
  void shift_player(int player, double c);

 private:
  EwConfig config_;
  std::vector<std::vector<double>> logw_;
  std::int64_t stage_ = 0;
};

enum class StopKind { Horizon, Absorption };

struct StoppingRule {
  StopKind kind = StopKind::Horizon;
  std::int64_t t_max = 1000000;  // 0 = unbounded (absorption only)
  double eps = 1e-4;             // sup-norm absorption tolerance

  static StoppingRule horizon(std::int64_t t);
  static StoppingRule absorption(double eps, std::int64_t t_max_fallback);
};

enum class StopReason { Absorbed, HorizonReached };

struct Trajectory {
  EwConfig config;
  std::vector<std::int32_t> actions;  // steps * n, realized profiles
  MixedProfile terminal;
  StopReason reason = StopReason::HorizonReached;
  std::int64_t steps = 0;
  std::optional<PureProfile> absorbed_at;

  PureProfile action_at(std::int64_t t) const;
};

// Closed-form profile after a forced action history, evaluated directly
// from the initial profile and cumulative payoffs.
MixedProfile closed_form_profile(const EwConfig& config,
                                 const std::vector<PureProfile>& history);

Trajectory simulate(const EwConfig& config, const StoppingRule& stop);

// Streaming replay of a recorded trajectory: visit(t, profile_before_step_t)
// for t = 0..steps, where the last call passes the terminal profile.
template <typename Visitor>
void replay(const Trajectory& traj, Visitor&& visit) {
  EwState st(traj.config);
  MixedProfile mp = st.mixed_profile();
  const int n = traj.config.game->num_players();
  PureProfile a(n);
  for (std::int64_t t = 0; t < traj.steps; ++t) {
    visit(t, mp);
    for (int i = 0; i < n; ++i) a[i] = traj.actions[t * n + i];
    st.apply_action(a);
    st.mixed_profile_into(mp);
  }
  visit(traj.steps, mp);
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace ewlab
