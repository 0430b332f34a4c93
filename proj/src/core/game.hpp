#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ewlab {

using PureProfile = std::vector<int>;

// Finite n-player normal-form game. Payoffs are stored densely:
// entry(profile, player) with profiles enumerated row-major, player 1's
// action outermost.
class Game {
 public:
  Game(std::vector<int> action_counts, std::vector<double> payoffs,
       std::vector<std::vector<std::string>> labels = {});

  static Game from_json_text(const std::string& text);
  static Game from_json_file(const std::string& path);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int action_count(int player) const { return action_counts_[player]; }
  const std::vector<int>& action_counts() const { return action_counts_; }
  std::int64_t num_profiles() const { return num_profiles_; }

  double payoff(int player, const PureProfile& a) const {
    return payoffs_[profile_index(a) * num_players() + player];
  }
  double payoff_by_index(int player, std::int64_t profile_index) const {
    return payoffs_[profile_index * num_players() + player];
  }

  std::int64_t profile_index(const PureProfile& a) const;
  PureProfile profile_from_index(std::int64_t index) const;

  const std::string& action_label(int player, int action) const {
    return labels_[player][action];
  }
  // Returns -1 when no action of `player` carries this label.
  int action_from_label(int player, const std::string& label) const;

  std::string profile_to_string(const PureProfile& a) const;

  bool same_payoffs(const Game& other, double tol) const;

 private:
  std::vector<int> action_counts_;
  std::vector<double> payoffs_;  // num_profiles * n
  std::vector<std::vector<std::string>> labels_;
  std::int64_t num_profiles_ = 1;
};

// Product distribution over action profiles, one probability vector per
// player.
struct MixedProfile {
  std::vector<std::vector<double>> p;

  static MixedProfile uniform(const Game& g);
  static MixedProfile dirac(const Game& g, const PureProfile& a);

  int num_players() const { return static_cast<int>(p.size()); }
  double prob(const PureProfile& a) const;
  // sup-norm distance between two profiles of identical shape
  double sup_distance(const MixedProfile& other) const;
  double sup_distance_to_pure(const PureProfile& a) const;

  void validate_for(const Game& g, double sum_tol = 1e-12) const;
};

// Enumerates all pure profiles of a game in row-major order.
class ProfileIterator {
 public:
  explicit ProfileIterator(const Game& g)
      : counts_(g.action_counts()), profile_(g.num_players(), 0) {}
  bool done() const { return done_; }
  const PureProfile& operator*() const { return profile_; }
  void next();

 private:
  std::vector<int> counts_;
  PureProfile profile_;
  bool done_ = false;
};

}  // namespace ewlab
