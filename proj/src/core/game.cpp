#include "game.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ewlab {

Game::Game(std::vector<int> action_counts, std::vector<double> payoffs,
           std::vector<std::vector<std::string>> labels)
    : action_counts_(std::move(action_counts)),
      payoffs_(std::move(payoffs)),
      labels_(std::move(labels)) {
  if (action_counts_.empty()) throw std::invalid_argument("game: no players");
  for (int m : action_counts_) {
    if (m < 1) throw std::invalid_argument("game: empty action set");
    num_profiles_ *= m;
  }
  const auto n = static_cast<std::int64_t>(action_counts_.size());
  if (static_cast<std::int64_t>(payoffs_.size()) != num_profiles_ * n)
    throw std::invalid_argument("game: payoff tensor size mismatch");
  for (double u : payoffs_)
    if (!std::isfinite(u)) throw std::invalid_argument("game: non-finite payoff");
  if (labels_.empty()) {
    labels_.resize(action_counts_.size());
    for (size_t i = 0; i < labels_.size(); ++i)
      for (int a = 0; a < action_counts_[i]; ++a)
        labels_[i].push_back("a" + std::to_string(a + 1));
  }
  for (size_t i = 0; i < labels_.size(); ++i)
    if (static_cast<int>(labels_[i].size()) != action_counts_[i])
      throw std::invalid_argument("game: label count mismatch");
}

std::int64_t Game::profile_index(const PureProfile& a) const {
  if (static_cast<int>(a.size()) != num_players())
    throw std::invalid_argument("profile has wrong number of players");
  std::int64_t idx = 0;
  for (int i = 0; i < num_players(); ++i) {
    if (a[i] < 0 || a[i] >= action_counts_[i])
      throw std::invalid_argument("action index out of range");
    idx = idx * action_counts_[i] + a[i];
  }
  return idx;
}

PureProfile Game::profile_from_index(std::int64_t index) const {
  PureProfile a(num_players());
  for (int i = num_players() - 1; i >= 0; --i) {
    a[i] = static_cast<int>(index % action_counts_[i]);
    index /= action_counts_[i];
  }
  return a;
}

int Game::action_from_label(int player, const std::string& label) const {
  for (int a = 0; a < action_counts_[player]; ++a)
    if (labels_[player][a] == label) return a;
  return -1;
}

std::string Game::profile_to_string(const PureProfile& a) const {
  std::string s = "(";
  for (int i = 0; i < num_players(); ++i) {
    if (i) s += ",";
    s += labels_[i][a[i]];
  }
  return s + ")";
}

bool Game::same_payoffs(const Game& other, double tol) const {
  if (action_counts_ != other.action_counts_) return false;
  for (size_t k = 0; k < payoffs_.size(); ++k)
    if (std::abs(payoffs_[k] - other.payoffs_[k]) > tol) return false;
  return true;
}

namespace {

using nlohmann::json;

void collect_payoffs(const json& node, const std::vector<int>& counts,
                     size_t depth, std::vector<double>& out) {
  if (!node.is_array())
    throw std::invalid_argument("game json: payoffs must be nested arrays");
  if (depth == counts.size()) {
    if (node.size() != counts.size())
      throw std::invalid_argument(
          "game json: innermost payoff array must have one entry per player");
    for (const auto& v : node) {
      if (!v.is_number()) throw std::invalid_argument("game json: payoff not a number");
      out.push_back(v.get<double>());
    }
    return;
  }
  if (static_cast<int>(node.size()) != counts[depth]) {
    std::ostringstream os;
    os << "game json: payoff dimension " << depth + 1 << " has " << node.size()
       << " entries, expected " << counts[depth];
    throw std::invalid_argument(os.str());
  }
  for (const auto& child : node) collect_payoffs(child, counts, depth + 1, out);
}

}  // namespace

Game Game::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("game json: ") + e.what());
  }
  if (!j.contains("players") || !j["players"].is_number_integer())
    throw std::invalid_argument("game json: missing integer field 'players'");
  const int n = j["players"].get<int>();
  if (n < 1) throw std::invalid_argument("game json: players must be >= 1");
  if (!j.contains("actions") || !j["actions"].is_array() ||
      static_cast<int>(j["actions"].size()) != n)
    throw std::invalid_argument("game json: 'actions' must list one label array per player");
  std::vector<int> counts;
  std::vector<std::vector<std::string>> labels;
  for (const auto& arr : j["actions"]) {
    if (!arr.is_array() || arr.empty())
      throw std::invalid_argument("game json: each player needs a nonempty label array");
    std::vector<std::string> ls;
    for (const auto& s : arr) ls.push_back(s.get<std::string>());
    counts.push_back(static_cast<int>(ls.size()));
    labels.push_back(std::move(ls));
  }
  if (!j.contains("payoffs"))
    throw std::invalid_argument("game json: missing field 'payoffs'");
  std::vector<double> payoffs;
  collect_payoffs(j["payoffs"], counts, 0, payoffs);
  return Game(std::move(counts), std::move(payoffs), std::move(labels));
}

Game Game::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    // convenience: allow fixture references without the .json suffix
    in.open(path + ".json");
    if (!in) throw std::runtime_error("cannot open game file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

MixedProfile MixedProfile::uniform(const Game& g) {
  MixedProfile mp;
  for (int i = 0; i < g.num_players(); ++i)
    mp.p.emplace_back(g.action_count(i), 1.0 / g.action_count(i));
  return mp;
}

MixedProfile MixedProfile::dirac(const Game& g, const PureProfile& a) {
  MixedProfile mp;
  for (int i = 0; i < g.num_players(); ++i) {
    std::vector<double> v(g.action_count(i), 0.0);
    v.at(a.at(i)) = 1.0;
    mp.p.push_back(std::move(v));
  }
  return mp;
}

double MixedProfile::prob(const PureProfile& a) const {
  double q = 1.0;
  for (size_t i = 0; i < p.size(); ++i) q *= p[i][a[i]];
  return q;
}

double MixedProfile::sup_distance(const MixedProfile& other) const {
  double d = 0.0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t a = 0; a < p[i].size(); ++a)
      d = std::max(d, std::abs(p[i][a] - other.p[i][a]));
  return d;
}

double MixedProfile::sup_distance_to_pure(const PureProfile& a) const {
  double d = 0.0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t b = 0; b < p[i].size(); ++b) {
      const double target = (static_cast<int>(b) == a[i]) ? 1.0 : 0.0;
      d = std::max(d, std::abs(p[i][b] - target));
    }
  return d;
}

void MixedProfile::validate_for(const Game& g, double sum_tol) const {
  if (num_players() != g.num_players())
    throw std::invalid_argument("mixed profile: player count mismatch");
  for (int i = 0; i < g.num_players(); ++i) {
    if (static_cast<int>(p[i].size()) != g.action_count(i))
      throw std::invalid_argument("mixed profile: action count mismatch");
    double s = 0.0;
    for (double v : p[i]) {
      if (!(v >= 0.0 && v <= 1.0 + sum_tol))
        throw std::invalid_argument("mixed profile: probability out of [0,1]");
      s += v;
    }
    if (std::abs(s - 1.0) > sum_tol)
      throw std::invalid_argument("mixed profile: probabilities do not sum to 1");
  }
}

void ProfileIterator::next() {
  for (int i = static_cast<int>(profile_.size()) - 1; i >= 0; --i) {
    if (++profile_[i] < counts_[i]) return;
    profile_[i] = 0;
  }
  done_ = true;
}

}  // namespace ewlab
