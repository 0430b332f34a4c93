// Command-line front end for the ewlab shared library. Everything goes
// through the public C interface in ewlab/ewlab.h.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ewlab/ewlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct GameDeleter {
  void operator()(ewlab_game* g) const { ewlab_game_free(g); }
};
using GamePtr = std::unique_ptr<ewlab_game, GameDeleter>;

[[noreturn]] void die(int code, const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  std::exit(code);
}

void check(ewlab_status status) {
  if (status == EWLAB_OK) return;
  const int code = status == EWLAB_ERR_NUMERIC ? kExitNumeric : kExitUsage;
  die(code, ewlab_last_error());
}

GamePtr load_game(const std::string& path) {
  ewlab_game* g = nullptr;
  check(ewlab_game_load(path.c_str(), &g));
  return GamePtr(g);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// initial profile grammar: "uniform", "dirac:<label,label,...>", or
// explicit per-player vectors "[0.3,0.7]x[0.25,0.75]"
std::vector<double> parse_profile(const ewlab_game* g, const std::string& text) {
  const int n = ewlab_game_players(g);
  std::vector<double> flat;
  if (text == "uniform") {
    for (int i = 0; i < n; ++i) {
      const int m = ewlab_game_action_count(g, i);
      for (int a = 0; a < m; ++a) flat.push_back(1.0 / m);
    }
    return flat;
  }
  if (text.rfind("dirac:", 0) == 0) {
    const auto labels = split(text.substr(6), ',');
    if (static_cast<int>(labels.size()) != n)
      die(kExitUsage, "dirac profile needs one action label per player");
    for (int i = 0; i < n; ++i) {
      const int m = ewlab_game_action_count(g, i);
      int hit = -1;
      for (int a = 0; a < m; ++a)
        if (labels[i] == ewlab_game_action_label(g, i, a)) hit = a;
      if (hit < 0)
        die(kExitUsage, "unknown action label '" + labels[i] + "' for player " +
                            std::to_string(i + 1));
      for (int a = 0; a < m; ++a) flat.push_back(a == hit ? 1.0 : 0.0);
    }
    return flat;
  }
  // explicit vectors
  const auto parts = split(text, 'x');
  if (static_cast<int>(parts.size()) != n)
    die(kExitUsage, "profile needs one [..] vector per player");
  for (int i = 0; i < n; ++i) {
    std::string part = parts[i];
    if (part.size() < 2 || part.front() != '[' || part.back() != ']')
      die(kExitUsage, "profile vectors look like [0.3,0.7]");
    part = part.substr(1, part.size() - 2);
    const auto nums = split(part, ',');
    if (static_cast<int>(nums.size()) != ewlab_game_action_count(g, i))
      die(kExitUsage, "player " + std::to_string(i + 1) + " needs " +
                          std::to_string(ewlab_game_action_count(g, i)) +
                          " probabilities");
    double sum = 0;
    for (const auto& v : nums) {
      char* end = nullptr;
      const double x = std::strtod(v.c_str(), &end);
      if (end == v.c_str() || *end != '\0')
        die(kExitUsage, "bad probability '" + v + "'");
      flat.push_back(x);
      sum += x;
    }
    if (sum <= 0) die(kExitUsage, "probabilities must sum to a positive value");
  }
  return flat;
}

std::vector<double> resolve_etas(const ewlab_game* g, double eta,
                                 const std::vector<double>& per_player) {
  const int n = ewlab_game_players(g);
  if (!per_player.empty()) {
    if (static_cast<int>(per_player.size()) != n)
      die(kExitUsage, "--etas needs one rate per player");
    return per_player;
  }
  return std::vector<double>(n, eta);
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("EWLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // library default: all hardware threads
}

std::string profile_to_text(const ewlab_game* g, const double* flat) {
  std::string out;
  int k = 0;
  for (int i = 0; i < ewlab_game_players(g); ++i) {
    if (i) out += " x ";
    out += "(";
    for (int a = 0; a < ewlab_game_action_count(g, i); ++a) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%s%.4g", a ? "," : "", flat[k++]);
      out += buf;
    }
    out += ")";
  }
  return out;
}

std::string pure_to_text(const ewlab_game* g, const int32_t* actions) {
  std::string out = "(";
  for (int i = 0; i < ewlab_game_players(g); ++i) {
    if (i) out += ",";
    out += ewlab_game_action_label(g, i, actions[i]);
  }
  return out + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ewlab - exponential-weights dynamics laboratory"};
  app.require_subcommand(1);

  // ---- simulate ----------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "run one trajectory and classify it");
  std::string sim_game, sim_p0 = "uniform", sim_out, sim_stop = "absorption";
  double sim_eta = 0.1, sim_eps = 1e-4, sim_tol = 1e-2;
  std::vector<double> sim_etas;
  std::uint64_t sim_seed = 0;
  std::int64_t sim_tmax = 1000000;
  sim->add_option("game", sim_game, "game file (JSON)")->required();
  sim->add_option("--p0", sim_p0, "initial profile: uniform | dirac:<labels> | [..]x[..]")
      ->capture_default_str();
  sim->add_option("--eta", sim_eta, "shared learning rate")->capture_default_str();
  sim->add_option("--etas", sim_etas, "per-player learning rates");
  sim->add_option("--seed", sim_seed, "trajectory seed")->capture_default_str();
  sim->add_option("--stop", sim_stop, "stopping rule: absorption | horizon")
      ->capture_default_str();
  sim->add_option("--tmax", sim_tmax, "horizon cap (0 = none with absorption)")
      ->capture_default_str();
  sim->add_option("--eps", sim_eps, "absorption tolerance (sup-norm)")
      ->capture_default_str();
  sim->add_option("--tol", sim_tol, "classification tolerance")->capture_default_str();
  sim->add_option("--out", sim_out, "trajectory CSV path");

  // ---- analyze -------------------------------------------------------------
  auto* ana = app.add_subcommand(
      "analyze", "always-play enclosure, L statistic and distance to Z");
  std::string ana_game, ana_p0 = "uniform", ana_ne;
  double ana_eta = 0.1, ana_tol = 1e-8;
  std::vector<double> ana_etas;
  ana->add_option("game", ana_game)->required();
  ana->add_option("--p0", ana_p0, "profile under study")->capture_default_str();
  ana->add_option("--eta", ana_eta, "shared learning rate")->capture_default_str();
  ana->add_option("--etas", ana_etas, "per-player learning rates");
  ana->add_option("--ne", ana_ne,
                  "target strict equilibrium labels, e.g. T,L (default: all)");
  ana->add_option("--tol", ana_tol, "enclosure tolerance")->capture_default_str();

  // ---- neep ---------------------------------------------------------------
  auto* neep = app.add_subcommand("neep", "enumerate or verify equalizing equilibria");
  std::string neep_game, neep_verify;
  double neep_tol = 1e-9;
  neep->add_option("game", neep_game)->required();
  neep->add_option("--verify", neep_verify, "verify one profile instead");
  neep->add_option("--tol", neep_tol, "support and payoff tolerance")
      ->capture_default_str();

  // ---- strict-ne ------------------------------------------------------------
  auto* sne = app.add_subcommand("strict-ne", "list strict Nash equilibria");
  std::string sne_game;
  sne->add_option("game", sne_game)->required();

  // ---- potential -------------------------------------------------------------
  auto* pot = app.add_subcommand(
      "potential", "coordination potential report and one-step check");
  std::string pot_game, pot_p0 = "uniform";
  double pot_eta = 0.1;
  std::vector<double> pot_etas;
  int pot_k = -1;
  bool pot_zprime = false;
  pot->add_option("game", pot_game)->required();
  pot->add_option("--p0", pot_p0, "state to evaluate")->capture_default_str();
  pot->add_option("--eta", pot_eta, "shared learning rate")->capture_default_str();
  pot->add_option("--etas", pot_etas, "per-player learning rates");
  pot->add_option("--k", pot_k, "diagonal action (default: potential argmin)");
  pot->add_flag("--zprime", pot_zprime,
                "use the three-term variant potential (3x3 near-coordination game)");

  // ---- drift -----------------------------------------------------------------
  auto* drf = app.add_subcommand("drift", "one-step payoff drift of 2x2 coordination");
  double drf_a = -1, drf_b = -1, drf_eta1 = 0.1, drf_eta2 = 0.1;
  int drf_grid = 11;
  std::string drf_out;
  drf->add_option("--a", drf_a, "a = e^{eta1} - 1 (overrides --eta1)");
  drf->add_option("--b", drf_b, "b = e^{eta2} - 1 (overrides --eta2)");
  drf->add_option("--eta1", drf_eta1)->capture_default_str();
  drf->add_option("--eta2", drf_eta2)->capture_default_str();
  drf->add_option("--grid", drf_grid, "grid points per axis")->capture_default_str();
  drf->add_option("--out", drf_out, "CSV output path");

  // ---- grid ------------------------------------------------------------------
  auto* grd = app.add_subcommand("grid", "basin-frequency experiment on a 2x2 game");
  std::string grd_game, grd_out, grd_log, grd_target;
  int grd_points = 11, grd_runs = 500, grd_threads = 0;
  double grd_eta = 0.1, grd_eps = 1e-4;
  std::int64_t grd_tmax = 1000000;
  std::uint64_t grd_seed = 0;
  grd->add_option("game", grd_game)->required();
  grd->add_option("--grid", grd_points, "grid points per axis")->capture_default_str();
  grd->add_option("--runs", grd_runs, "runs per cell")->capture_default_str();
  grd->add_option("--eta", grd_eta, "shared learning rate")->capture_default_str();
  grd->add_option("--eps", grd_eps, "absorption tolerance")->capture_default_str();
  grd->add_option("--tmax", grd_tmax, "horizon cap")->capture_default_str();
  grd->add_option("--seed", grd_seed, "master seed")->capture_default_str();
  grd->add_option("--threads", grd_threads,
                  "worker threads (0 = hardware, env EWLAB_THREADS)")
      ->capture_default_str();
  grd->add_option("--target", grd_target,
                  "equilibrium labels the matrix reports (default: first)");
  grd->add_option("--out", grd_out, "matrix CSV path");
  grd->add_option("--log", grd_log, "per-run log CSV path");

  // ---- absorb-time -------------------------------------------------------------
  auto* abt = app.add_subcommand("absorb-time",
                                 "absorption-time summary from one initial profile");
  std::string abt_game, abt_p0 = "uniform";
  int abt_runs = 1000, abt_threads = 0;
  double abt_eta = 0.1, abt_eps = 1e-4;
  std::int64_t abt_tmax = 1000000;
  std::uint64_t abt_seed = 0;
  abt->add_option("game", abt_game)->required();
  abt->add_option("--p0", abt_p0)->capture_default_str();
  abt->add_option("--runs", abt_runs)->capture_default_str();
  abt->add_option("--eta", abt_eta)->capture_default_str();
  abt->add_option("--eps", abt_eps)->capture_default_str();
  abt->add_option("--tmax", abt_tmax)->capture_default_str();
  abt->add_option("--seed", abt_seed)->capture_default_str();
  abt->add_option("--threads", abt_threads)->capture_default_str();

  // ---- solve-f -------------------------------------------------------------------
  auto* slf = app.add_subcommand("solve-f", "grid fixed point of the basin function");
  double slf_a = -1, slf_b = -1, slf_eta1 = 0.1, slf_eta2 = 0.1, slf_tol = 1e-10;
  int slf_res = 11, slf_iters = 100000;
  std::string slf_out;
  slf->add_option("--a", slf_a, "a = e^{eta1} - 1 (overrides --eta1)");
  slf->add_option("--b", slf_b, "b = e^{eta2} - 1 (overrides --eta2)");
  slf->add_option("--eta1", slf_eta1)->capture_default_str();
  slf->add_option("--eta2", slf_eta2)->capture_default_str();
  slf->add_option("--resolution", slf_res)->capture_default_str();
  slf->add_option("--max-iter", slf_iters)->capture_default_str();
  slf->add_option("--tol", slf_tol, "sup-norm residual target")->capture_default_str();
  slf->add_option("--out", slf_out, "CSV output path");

  // ---- ex18 ------------------------------------------------------------------------
  auto* e18 = app.add_subcommand("ex18", "counting-chain tools for the zero game");
  double e18_x = 0.5, e18_y = 0.5, e18_eta1 = 1.0, e18_eta2 = 1.0, e18_tol = 1e-8;
  std::int64_t e18_steps = 1000;
  std::uint64_t e18_seed = 0;
  std::string e18_out;
  bool e18_product = false;
  e18->add_option("--x", e18_x, "p0 of the first action, player 1")
      ->capture_default_str();
  e18->add_option("--y", e18_y, "p0 of the first action, player 2")
      ->capture_default_str();
  e18->add_option("--eta1", e18_eta1)->capture_default_str();
  e18->add_option("--eta2", e18_eta2)->capture_default_str();
  e18->add_option("--steps", e18_steps)->capture_default_str();
  e18->add_option("--seed", e18_seed)->capture_default_str();
  e18->add_option("--tol", e18_tol, "product enclosure tolerance")
      ->capture_default_str();
  e18->add_flag("--always-l-prob", e18_product,
                "print the always-L/always-T product enclosures instead");
  e18->add_option("--out", e18_out, "chain CSV path");

  CLI11_PARSE(app, argc, argv);

  // ---------------------------------------------------------------------------

  if (sim->parsed()) {
    GamePtr game = load_game(sim_game);
    const auto p0 = parse_profile(game.get(), sim_p0);
    const auto etas = resolve_etas(game.get(), sim_eta, sim_etas);
    ewlab_stop_rule stop{sim_stop == "horizon" ? 0 : 1, sim_tmax, sim_eps};
    if (sim_stop != "horizon" && sim_stop != "absorption")
      die(kExitUsage, "--stop must be absorption or horizon");
    ewlab_trajectory* traj = nullptr;
    check(ewlab_simulate(game.get(), p0.data(), etas.data(), sim_seed, &stop, &traj));
    ewlab_verdict verdict;
    std::vector<double> candidate(ewlab_game_profile_size(game.get()));
    std::vector<int32_t> absorbed(ewlab_game_players(game.get()), -1);
    check(ewlab_classify_trajectory(game.get(), traj, sim_tol, &verdict,
                                    candidate.data(), absorbed.data()));
    std::printf("steps: %" PRId64 "\n", ewlab_trajectory_steps(traj));
    std::printf("stop: %s\n",
                ewlab_trajectory_stop_reason(traj) == 0 ? "absorbed" : "horizon");
    const char* kinds[] = {"absorbed", "approaching_Z", "converged_to", "undecided"};
    std::printf("verdict: %s", kinds[verdict.kind]);
    if (verdict.kind == 0)
      std::printf(" %s", pure_to_text(game.get(), absorbed.data()).c_str());
    if (verdict.kind == 2)
      std::printf(" %s [%s]", profile_to_text(game.get(), candidate.data()).c_str(),
                  verdict.candidate_is_neep ? "NEEP" : "not a NEEP");
    std::printf("\nL_T: %.4g\nd(p_T, Z): %.4g\n", verdict.terminal_l,
                verdict.distance_z);
    std::printf("terminal: %s\n",
                profile_to_text(game.get(), candidate.data()).c_str());
    if (!sim_out.empty()) {
      check(ewlab_trajectory_write_csv(traj, sim_out.c_str()));
      std::printf("trajectory written to %s\n", sim_out.c_str());
    }
    ewlab_trajectory_free(traj);
    return kExitOk;
  }

  if (ana->parsed()) {
    GamePtr game = load_game(ana_game);
    const auto p0 = parse_profile(game.get(), ana_p0);
    const auto etas = resolve_etas(game.get(), ana_eta, ana_etas);
    const int n = ewlab_game_players(game.get());
    int32_t count = 0;
    check(ewlab_strict_nash_count(game.get(), &count));
    double l = 0, dz = 0;
    check(ewlab_l_statistic(game.get(), p0.data(), &l));
    check(ewlab_distance_to_z(game.get(), p0.data(), &dz));
    std::printf("profile: %s\n", profile_to_text(game.get(), p0.data()).c_str());
    std::printf("L statistic: %.17g\n", l);
    std::printf("distance to Z: %.17g\n", dz);
    std::vector<std::vector<int32_t>> targets;
    if (!ana_ne.empty()) {
      const auto labels = split(ana_ne, ',');
      if (static_cast<int>(labels.size()) != n)
        die(kExitUsage, "--ne needs one label per player");
      std::vector<int32_t> a(n);
      for (int i = 0; i < n; ++i) {
        a[i] = -1;
        for (int act = 0; act < ewlab_game_action_count(game.get(), i); ++act)
          if (labels[i] == ewlab_game_action_label(game.get(), i, act)) a[i] = act;
        if (a[i] < 0) die(kExitUsage, "unknown action label '" + labels[i] + "'");
      }
      targets.push_back(a);
    } else {
      for (int32_t k = 0; k < count; ++k) {
        std::vector<int32_t> a(n);
        check(ewlab_strict_nash_get(game.get(), k, a.data()));
        targets.push_back(a);
      }
    }
    for (const auto& a : targets) {
      double lo = 0, hi = 0;
      check(ewlab_prob_always_play(game.get(), a.data(), p0.data(), etas.data(),
                                   ana_tol, &lo, &hi));
      std::printf("always-play %s: [%.17g, %.17g] (%.3g)\n",
                  pure_to_text(game.get(), a.data()).c_str(), lo, hi, hi - lo);
    }
    return kExitOk;
  }

  if (neep->parsed()) {
    GamePtr game = load_game(neep_game);
    if (!neep_verify.empty()) {
      const auto p = parse_profile(game.get(), neep_verify);
      int32_t flag = 0;
      check(ewlab_is_neep(game.get(), p.data(), neep_tol, &flag));
      std::printf("%s\n", flag ? "NEEP" : "not a NEEP");
      return kExitOk;
    }
    ewlab_neep_set* set = nullptr;
    check(ewlab_neep_enumerate_2p(game.get(), neep_tol, &set));
    const int32_t count = ewlab_neep_component_count(set);
    if (count == 0) std::printf("no NEEP\n");
    for (int32_t k = 0; k < count; ++k)
      std::printf("%d: %s\n", k, ewlab_neep_component_describe(set, k));
    ewlab_neep_set_free(set);
    return kExitOk;
  }

  if (sne->parsed()) {
    GamePtr game = load_game(sne_game);
    int32_t count = 0;
    check(ewlab_strict_nash_count(game.get(), &count));
    if (count == 0) std::printf("no strict Nash equilibrium\n");
    std::vector<int32_t> a(ewlab_game_players(game.get()));
    for (int32_t k = 0; k < count; ++k) {
      check(ewlab_strict_nash_get(game.get(), k, a.data()));
      std::printf("%s\n", pure_to_text(game.get(), a.data()).c_str());
    }
    return kExitOk;
  }

  if (pot->parsed()) {
    GamePtr game = load_game(pot_game);
    const auto p = parse_profile(game.get(), pot_p0);
    const auto etas = resolve_etas(game.get(), pot_eta, pot_etas);
    if (pot_zprime) {
      if (!ewlab_game_is_exa7(game.get()))
        die(kExitUsage, "--zprime needs the 3x3 near-coordination game");
      double z = 0, e = 0, m0 = 0;
      check(ewlab_potential_zprime(p.data(), &z));
      check(ewlab_one_step_expected_zprime(p.data(), etas.data(), &e));
      check(ewlab_zprime_m0(etas.data(), 100000, 20240901, &m0));
      std::printf("Z': %.17g\n", z);
      std::printf("one-step expectation: %.17g\n", e);
      std::printf("calibrated M0': %.17g\n", m0);
      std::printf("supermartingale at this state: %s\n",
                  (z >= m0 && e <= z) || z < m0 ? "consistent" : "violated");
      return kExitOk;
    }
    int32_t coord = 0;
    check(ewlab_is_strong_coordination(game.get(), &coord));
    if (!coord) die(kExitUsage, "potential requires a strong coordination game");
    double z = 0;
    check(ewlab_potential_z(game.get(), p.data(), &z));
    double c, d, m0;
    check(ewlab_supermartingale_constants(game.get(), etas.data(), &c, &d, &m0));
    std::printf("Z: %.17g\n", z);
    std::printf("C: %.17g\nD: %.17g\nM0: %.17g\n", c, d, m0);
    int k = pot_k;
    if (k < 0) {
      // default: the diagonal action achieving the potential
      double best = -1;
      const int m = ewlab_game_action_count(game.get(), 0);
      for (int cand = 0; cand < m; ++cand) {
        double cur, rest;
        check(ewlab_one_step_expected_potential(game.get(), p.data(), etas.data(),
                                                cand, &cur, &rest, nullptr, nullptr,
                                                nullptr));
        const double prod = 1.0 / cur;
        if (prod > best) {
          best = prod;
          k = cand;
        }
      }
    }
    double current, expected, xe, xc, xb;
    check(ewlab_one_step_expected_potential(game.get(), p.data(), etas.data(), k,
                                            &current, &expected, &xe, &xc, &xb));
    std::printf("k: %s\n", ewlab_game_action_label(game.get(), 0, k));
    std::printf("Z(k): %.17g\n", current);
    std::printf("E(Z_{t+1}(k)): %.17g\n", expected);
    std::printf("X enumerated: %.17g\nX closed form: %.17g\nX bound: %.17g\n", xe, xc,
                xb);
    return kExitOk;
  }

  if (drf->parsed()) {
    const double a = drf_a > -1 ? drf_a : std::expm1(drf_eta1);
    const double b = drf_b > -1 ? drf_b : std::expm1(drf_eta2);
    FILE* out = stdout;
    if (!drf_out.empty()) {
      out = std::fopen(drf_out.c_str(), "w");
      if (!out) die(kExitUsage, "cannot open " + drf_out);
    }
    std::fprintf(out, "x,y,drift\n");
    for (int i = 0; i < drf_grid; ++i) {
      for (int j = 0; j < drf_grid; ++j) {
        const double x = static_cast<double>(i) / (drf_grid - 1);
        const double y = static_cast<double>(j) / (drf_grid - 1);
        double f = 0;
        check(ewlab_drift_2x2(a, b, x, y, &f));
        std::fprintf(out, "%.17g,%.17g,%.17g\n", x, y, f);
      }
    }
    if (out != stdout) std::fclose(out);
    return kExitOk;
  }

  if (grd->parsed()) {
    GamePtr game = load_game(grd_game);
    ewlab_grid_spec spec{grd_points, grd_runs,          grd_eta, grd_eps,
                         grd_tmax,   grd_seed, resolve_threads(grd_threads)};
    ewlab_experiment* e = nullptr;
    check(ewlab_run_grid(game.get(), &spec, &e));
    int32_t target = 0;
    if (!grd_target.empty()) {
      const int n = ewlab_game_players(game.get());
      const auto labels = split(grd_target, ',');
      if (static_cast<int>(labels.size()) != n)
        die(kExitUsage, "--target needs one label per player");
      const int32_t count = ewlab_experiment_equilibria(e);
      target = -1;
      std::vector<int32_t> a(n);
      for (int32_t k = 0; k < count; ++k) {
        check(ewlab_strict_nash_get(game.get(), k, a.data()));
        bool match = true;
        for (int i = 0; i < n; ++i)
          if (labels[i] != ewlab_game_action_label(game.get(), i, a[i])) match = false;
        if (match) target = k;
      }
      if (target < 0) die(kExitUsage, "--target is not a strict equilibrium");
    }
    if (!grd_out.empty())
      check(ewlab_experiment_write_matrix_csv(e, target, grd_out.c_str()));
    if (!grd_log.empty()) check(ewlab_experiment_write_log_csv(e, grd_log.c_str()));
    int64_t total, absorbed, capped, max_steps, q50, q90, q99;
    double capped_fraction, mean;
    check(ewlab_experiment_stats(e, &total, &absorbed, &capped, &capped_fraction,
                                 &mean, &max_steps, &q50, &q90, &q99));
    std::printf("runs: %" PRId64 " absorbed: %" PRId64 " capped: %" PRId64
                " (%.4g)\n",
                total, absorbed, capped, capped_fraction);
    std::printf("absorption time: mean %.4g, q50 %" PRId64 ", q90 %" PRId64
                ", q99 %" PRId64 ", max %" PRId64 "\n",
                mean, q50, q90, q99, max_steps);
    if (grd_out.empty()) {
      for (int ix = 0; ix < grd_points; ++ix) {
        for (int iy = 0; iy < grd_points; ++iy) {
          double f = 0;
          check(ewlab_experiment_frequency(e, ix, iy, target, &f));
          std::printf("%s%.4g", iy ? " " : "", f);
        }
        std::printf("\n");
      }
    }
    ewlab_experiment_free(e);
    return kExitOk;
  }

  if (abt->parsed()) {
    GamePtr game = load_game(abt_game);
    const auto p0 = parse_profile(game.get(), abt_p0);
    const std::vector<double> etas(ewlab_game_players(game.get()), abt_eta);
    int64_t total, absorbed, capped, max_steps, q50, q90, q99;
    double capped_fraction, mean;
    check(ewlab_absorption_stats(game.get(), p0.data(), etas.data(), abt_runs,
                                 abt_eps, abt_tmax, abt_seed,
                                 resolve_threads(abt_threads), &total, &absorbed,
                                 &capped, &capped_fraction, &mean, &max_steps, &q50,
                                 &q90, &q99));
    std::printf("runs: %" PRId64 " absorbed: %" PRId64 " capped: %" PRId64
                " (%.4g)\n",
                total, absorbed, capped, capped_fraction);
    std::printf("absorption time: mean %.4g, q50 %" PRId64 ", q90 %" PRId64
                ", q99 %" PRId64 ", max %" PRId64 "\n",
                mean, q50, q90, q99, max_steps);
    return kExitOk;
  }

  if (slf->parsed()) {
    const double a = slf_a > -1 ? slf_a : std::expm1(slf_eta1);
    const double b = slf_b > -1 ? slf_b : std::expm1(slf_eta2);
    ewlab_basin* basin = nullptr;
    check(ewlab_solve_basin(a, b, slf_res, slf_iters, slf_tol, &basin));
    int32_t resolution, iterations, converged;
    double residual;
    check(ewlab_basin_info(basin, &resolution, &residual, &iterations, &converged));
    std::printf("resolution: %d\niterations: %d\nresidual: %.17g\nconverged: %s\n",
                resolution, iterations, residual, converged ? "yes" : "no");
    if (!slf_out.empty()) check(ewlab_basin_write_csv(basin, slf_out.c_str()));
    ewlab_basin_free(basin);
    if (!converged) {
      std::fprintf(stderr, "error: fixed point not reached within --max-iter\n");
      return kExitNumeric;
    }
    return kExitOk;
  }

  if (e18->parsed()) {
    if (e18_product) {
      double lo, hi;
      int64_t terms;
      check(ewlab_ex18_always_l(e18_x, e18_y, e18_eta2, e18_tol, &lo, &hi, &terms));
      std::printf("always-L: [%.17g, %.17g] (%.3g), %" PRId64 " factors\n", lo, hi,
                  hi - lo, terms);
      check(ewlab_ex18_always_t(e18_x, e18_y, e18_eta1, e18_tol, &lo, &hi, &terms));
      std::printf("always-T: [%.17g, %.17g] (%.3g), %" PRId64 " factors\n", lo, hi,
                  hi - lo, terms);
      return kExitOk;
    }
    std::vector<int64_t> b(e18_steps + 1), r(e18_steps + 1);
    check(ewlab_ex18_chain(e18_x, e18_y, e18_eta1, e18_eta2, e18_seed, e18_steps,
                           b.data(), r.data()));
    FILE* out = stdout;
    if (!e18_out.empty()) {
      out = std::fopen(e18_out.c_str(), "w");
      if (!out) die(kExitUsage, "cannot open " + e18_out);
    }
    std::fprintf(out, "t,B,R\n");
    for (std::int64_t t = 0; t <= e18_steps; ++t)
      std::fprintf(out, "%" PRId64 ",%" PRId64 ",%" PRId64 "\n", t, b[t], r[t]);
    if (out != stdout) std::fclose(out);
    return kExitOk;
  }

  return kExitUsage;
}
