#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "coordination.hpp"
#include "engine.hpp"
#include "equilibria.hpp"
#include "game.hpp"

using namespace ewlab;

namespace {

Game load(const std::string& name) {
  return Game::from_json_file(std::string(FIXTURES_DIR) + "/" + name);
}

Game random_strong_coordination(Rng& rng, int n, int m) {
  std::int64_t profiles = 1;
  for (int i = 0; i < n; ++i) profiles *= m;
  std::vector<double> payoffs(profiles * n, 0.0);
  Game shape(std::vector<int>(n, m), payoffs);
  for (int k = 0; k < m; ++k) {
    const PureProfile diag(n, k);
    for (int i = 0; i < n; ++i)
      payoffs[shape.profile_index(diag) * n + i] = 0.05 + 1.95 * rng.uniform();
  }
  return Game(std::vector<int>(n, m), payoffs);
}

MixedProfile random_state(Rng& rng, const Game& g, double scale) {
  MixedProfile p;
  p.p.resize(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    p.p[i].resize(g.action_count(i));
    const int anchor = static_cast<int>(rng.uniform() * g.action_count(i));
    double sum = 0;
    for (int a = 0; a < g.action_count(i); ++a) {
      p.p[i][a] = std::exp(a == anchor ? 0.0 : -scale * rng.uniform());
      sum += p.p[i][a];
    }
    for (double& v : p.p[i]) v /= sum;
  }
  return p;
}

// independent brute force for the drift factor: full m^n sum of products of
// per-player exponential-moment factors, straight from the payoff tensor
double brute_force_x(const Game& g, const MixedProfile& p,
                     const std::vector<double>& etas, int c) {
  const int n = g.num_players();
  const int m = g.action_count(0);
  double x = 0.0;
  for (ProfileIterator it(g); !it.done(); it.next()) {
    const PureProfile& prof = *it;
    double weight = 1.0;
    for (int i = 0; i < n; ++i) weight *= p.p[i][prof[i]];
    double value = 1.0;
    PureProfile probe = prof;
    for (int i = 0; i < n; ++i) {
      probe[i] = c;
      const double uc = g.payoff(i, probe);
      double s = 0.0;
      for (int b = 0; b < m; ++b) {
        probe[i] = b;
        s += p.p[i][b] * std::exp(etas[i] * (g.payoff(i, probe) - uc));
      }
      probe[i] = prof[i];
      value *= s;
    }
    x += weight * value;
  }
  return x;
}

}  // namespace

TEST_CASE("diagonal potential on the textbook states") {
  const Game coord3 = load("coord3");
  CHECK(potential_z(coord3, MixedProfile::uniform(coord3)) == doctest::Approx(9.0));
  CHECK(potential_z(coord3, MixedProfile::dirac(coord3, {2, 2})) == 1.0);

  // three players, two actions, p_i = (0.8, 0.2) for all i
  Rng rng(1);
  const Game g3 = random_strong_coordination(rng, 3, 2);
  MixedProfile p;
  p.p = {{0.8, 0.2}, {0.8, 0.2}, {0.8, 0.2}};
  CHECK(potential_z(g3, p) == doctest::Approx(1.0 / 0.512).epsilon(1e-14));

  MixedProfile degenerate;
  degenerate.p = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}};
  CHECK(std::isinf(potential_z(g3, degenerate)));

  CHECK_THROWS_AS(potential_z(load("exa7"), MixedProfile::uniform(load("exa7"))),
                  std::invalid_argument);
}

TEST_CASE("potential argmin ignores no-op rescaling and follows relabeling") {
  const Game coord3 = load("coord3");
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    MixedProfile p = random_state(rng, coord3, 6.0);
    const int arg = potential_z_argmin(coord3, p);
    // multiply one player's vector by a constant, then renormalize: a no-op
    MixedProfile q = p;
    double sum = 0;
    for (double& v : q.p[0]) {
      v *= 3.25;
      sum += v;
    }
    for (double& v : q.p[0]) v /= sum;
    CHECK(potential_z_argmin(coord3, q) == arg);
    CHECK(potential_z(coord3, q) ==
          doctest::Approx(potential_z(coord3, p)).epsilon(1e-12));

    // simultaneous relabeling of the common action set
    std::vector<int> perm{2, 0, 1};
    std::vector<double> payoffs;
    for (ProfileIterator it(coord3); !it.done(); it.next()) {
      const PureProfile& a = *it;
      const PureProfile b{perm[a[0]], perm[a[1]]};
      payoffs.push_back(coord3.payoff(0, b));
      payoffs.push_back(coord3.payoff(1, b));
    }
    // coord3 is symmetric under relabeling, so only the profile moves
    MixedProfile r;
    r.p.resize(2);
    for (int i = 0; i < 2; ++i) {
      r.p[i].resize(3);
      for (int a = 0; a < 3; ++a) r.p[i][perm[a]] = p.p[i][a];
    }
    CHECK(potential_z(coord3, r) ==
          doctest::Approx(potential_z(coord3, p)).epsilon(1e-12));
    CHECK(potential_z_argmin(coord3, r) == perm[arg]);
  }
}

TEST_CASE("one-step potential: absorbing at a diagonal Dirac state") {
  const Game coord3 = load("coord3");
  const auto r = one_step_expected_potential(
      coord3, MixedProfile::dirac(coord3, {1, 1}), {0.1, 0.1}, 1);
  CHECK(r.current == 1.0);
  CHECK(r.expected == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.x_closed_form == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("one-step potential: closed form equals enumeration") {
  const Game coord3 = load("coord3");
  const auto uniform = one_step_expected_potential(
      coord3, MixedProfile::uniform(coord3), {0.1, 0.1}, 0);
  CHECK(uniform.x_enumerated ==
        doctest::Approx(uniform.x_closed_form).epsilon(1e-12));

  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 2);
    const int m = 2 + static_cast<int>(rng.uniform() * 2);
    const Game g = random_strong_coordination(rng, n, m);
    std::vector<double> etas;
    for (int i = 0; i < n; ++i) etas.push_back(0.01 + 0.99 * rng.uniform());
    const MixedProfile p = random_state(rng, g, 2.0 + 30.0 * rng.uniform());
    const int k = static_cast<int>(rng.uniform() * m);
    const auto r = one_step_expected_potential(g, p, etas, k);
    const double brute = brute_force_x(g, p, etas, k);
    CHECK(r.x_closed_form == doctest::Approx(brute).epsilon(1e-10));
    CHECK(r.x_enumerated == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("supermartingale constants of the three-action coordination game") {
  const Game coord3 = load("coord3");
  const auto k = supermartingale_constants(coord3, {0.1, 0.1});
  const double alpha = std::expm1(0.1);
  const double beta = alpha / (1 + alpha);
  // all diagonal payoffs coincide, so every reference-action choice agrees
  const double expected_c = -2.0 + 2.0 * (1 + alpha) * (1 + alpha) + 4 * beta + 4 * alpha;
  CHECK(k.c == doctest::Approx(expected_c).epsilon(1e-14));
  CHECK(k.d == doctest::Approx(1.0 - std::exp(-0.1)).epsilon(1e-14));
  CHECK(k.m0 == doctest::Approx(std::pow(k.c / (2 * k.d), 2.0)).epsilon(1e-14));
}

TEST_CASE("the D constant is min over players of 1 - e^{-eta u(diag)}") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 2);
    const int m = 2 + static_cast<int>(rng.uniform() * 2);
    const Game g = random_strong_coordination(rng, n, m);
    std::vector<double> etas;
    for (int i = 0; i < n; ++i) etas.push_back(0.01 + 0.99 * rng.uniform());
    const auto k = supermartingale_constants(g, etas);
    double oracle = std::numeric_limits<double>::infinity();
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < n; ++i)
        oracle = std::min(oracle,
                          1.0 - std::exp(-etas[i] * g.payoff(i, PureProfile(n, c))));
    CHECK(k.d == doctest::Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("drift bound and supermartingale property above the threshold") {
  Rng rng(5);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 120; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 2);
    const int m = 2 + static_cast<int>(rng.uniform() * 2);
    const Game g = random_strong_coordination(rng, n, m);
    std::vector<double> etas;
    for (int i = 0; i < n; ++i) etas.push_back(0.01 + 0.99 * rng.uniform());
    const auto consts = supermartingale_constants(g, etas);
    const MixedProfile p = random_state(rng, g, 10.0 + 70.0 * rng.uniform());
    const double z = potential_z(g, p);
    if (!std::isfinite(z) || z < consts.m0) continue;
    const int k = potential_z_argmin(g, p);
    const auto r = one_step_expected_potential(g, p, etas, k);
    CHECK(r.x_closed_form <= r.x_upper_bound + 1e-12);
    CHECK(r.expected <= r.current * (1 + 1e-12));
    ++checked;
  }
  CHECK(checked >= 120);
}

TEST_CASE("z-prime potential values") {
  MixedProfile uniform;
  uniform.p = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  CHECK(potential_zprime(uniform) == doctest::Approx(4.5).epsilon(1e-14));

  MixedProfile dirac1;
  dirac1.p = {{1, 0, 0}, {1, 0, 0}};
  CHECK(potential_zprime(dirac1) == 1.0);

  MixedProfile degenerate;
  degenerate.p = {{0, 1, 0}, {1, 0, 0}};
  CHECK(std::isinf(potential_zprime(degenerate)));

  MixedProfile wrong;
  wrong.p = {{0.5, 0.5}, {0.5, 0.5}};
  CHECK_THROWS_AS(potential_zprime(wrong), std::invalid_argument);
}

TEST_CASE("z-prime one-step expectation is a supermartingale above its threshold") {
  const Game exa7 = make_exa7_game();
  CHECK(is_exa7_game(load("exa7")));
  CHECK_FALSE(is_exa7_game(load("coord3")));

  Rng rng(6);
  for (const double eta : {0.1, 0.5, 1.0}) {
    const std::vector<double> etas{eta, eta};
    const double m0 = calibrate_zprime_m0(etas, 30000);
    int checked = 0;
    for (int trial = 0; trial < 40000 && checked < 300; ++trial) {
      const MixedProfile p = random_state(rng, exa7, 2.0 + 40.0 * rng.uniform());
      const double z = potential_zprime(p);
      if (!std::isfinite(z) || z < m0) continue;
      const double e = one_step_expected_zprime(p, etas);
      CHECK(e <= z * (1 + 1e-12));
      ++checked;
    }
    CHECK(checked >= 300);
  }
}

TEST_CASE("closed-form drift equals the engine expectation") {
  for (const double a : {0.1, 1.0, 5.0}) {
    for (const double b : {0.1, 1.0, 5.0}) {
      for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
          const double x = i / 20.0, y = j / 20.0;
          CHECK(drift_2x2(a, b, x, y) ==
                doctest::Approx(drift_2x2_direct(a, b, x, y)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("drift vanishes at the center and for zero learning rates") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = 5.0 * rng.uniform() + 0.01, b = 5.0 * rng.uniform() + 0.01;
    CHECK(std::abs(drift_2x2(a, b, 0.5, 0.5)) < 1e-15);
    const double x = rng.uniform(), y = rng.uniform();
    CHECK(std::abs(drift_2x2(0.0, 0.0, x, y)) < 1e-15);
  }
}

TEST_CASE("drift asymptotics near the center for vanishing rates") {
  // with a = 0, f(1/2 - b/16, 1/4) = -3 b^3/1024 + O(b^4)
  for (const double b : {1e-2, 1e-3}) {
    const double f = drift_2x2(0.0, b, 0.5 - b / 16, 0.25);
    const double ratio = f / (-3.0 * b * b * b / 1024.0);
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
  }
}

TEST_CASE("example-18 chain: trajectory shape and determinism") {
  const Ex18Chain c1 = ex18_chain(0.5, 0.5, 1.0, 1.0, 42, 500);
  const Ex18Chain c2 = ex18_chain(0.5, 0.5, 1.0, 1.0, 42, 500);
  REQUIRE(c1.b.size() == 501);
  CHECK(c1.b == c2.b);
  CHECK(c1.r == c2.r);
  CHECK(c1.b[0] == 0);
  for (size_t t = 1; t < c1.b.size(); ++t) {
    const auto db = c1.b[t] - c1.b[t - 1];
    CHECK(db >= 0);
    CHECK(db <= 1);
  }
  CHECK_THROWS_AS(ex18_chain(0.0, 0.5, 1, 1, 0, 10), std::invalid_argument);
}

TEST_CASE("example-18 always-L product: trivial limit and oracle") {
  // as y -> 1 every factor tends to 1
  const Enclosure near_one = ex18_always_l_probability(0.5, 1 - 1e-9, 1.0, 1e-10);
  CHECK(near_one.lo > 0.999999);

  // direct 200-term oracle at (1/2, 1/2, eta2 = 1): factors 1/(1+2e^{-t})
  double log_oracle = 0.0;
  for (int t = 0; t < 200; ++t) log_oracle -= std::log1p(2.0 * std::exp(-1.0 * t));
  const double oracle = std::exp(log_oracle);
  const Enclosure e = ex18_always_l_probability(0.5, 0.5, 1.0, 1e-9);
  CHECK(e.width() <= 1e-9);
  CHECK(e.lo <= oracle + 1e-12);
  CHECK(oracle <= e.hi + 1e-12);
  CHECK(oracle == doctest::Approx(0.129805).epsilon(1e-5));

  const Enclosure t_side = ex18_always_t_probability(0.5, 0.5, 1.0, 1e-9);
  CHECK(t_side.lo == doctest::Approx(e.lo).epsilon(1e-9));  // symmetric point
}

TEST_CASE("example-18 chain matches the engine dynamics in distribution") {
  // two-sample comparison of the B_t and R_t marginals at checkpoints,
  // chain transitions on one side, the full engine on the fixture game on
  // the other
  const Game exa18 = load("exa18");
  const double x = 0.35, y = 0.55, eta1 = 0.8, eta2 = 0.6;
  const int samples = 10000;
  const std::vector<std::int64_t> checkpoints{10, 100, 1000};

  std::vector<std::vector<std::int64_t>> chain_b(checkpoints.size()),
      chain_r(checkpoints.size()), engine_b(checkpoints.size()),
      engine_r(checkpoints.size());

  for (int s = 0; s < samples; ++s) {
    const Ex18Chain c = ex18_chain(x, y, eta1, eta2, hash64(111, s), 1000);
    for (size_t k = 0; k < checkpoints.size(); ++k) {
      chain_b[k].push_back(c.b[checkpoints[k]]);
      chain_r[k].push_back(c.r[checkpoints[k]]);
    }
  }

  EwConfig cfg;
  cfg.game = &exa18;
  cfg.learning_rates = {eta1, eta2};
  cfg.initial_profile.p = {{x, 1 - x}, {y, 1 - y}};
  for (int s = 0; s < samples; ++s) {
    cfg.seed = hash64(222, s);
    EwState st(cfg);
    Rng rng(cfg.seed);
    std::int64_t b = 0, r = 0;
    size_t k = 0;
    for (std::int64_t t = 1; t <= 1000; ++t) {
      const PureProfile a = st.step(rng);
      b += a[0] == 1;
      r += a[1] == 1;
      if (k < checkpoints.size() && t == checkpoints[k]) {
        engine_b[k].push_back(b);
        engine_r[k].push_back(r);
        ++k;
      }
    }
  }

  auto ks_distance = [](std::vector<std::int64_t> a, std::vector<std::int64_t> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::int64_t hi = std::max(a.back(), b.back());
    double worst = 0;
    size_t ia = 0, ib = 0;
    for (std::int64_t v = 0; v <= hi; ++v) {
      while (ia < a.size() && a[ia] <= v) ++ia;
      while (ib < b.size() && b[ib] <= v) ++ib;
      worst = std::max(worst, std::abs(static_cast<double>(ia) / a.size() -
                                       static_cast<double>(ib) / b.size()));
    }
    return worst;
  };

  for (size_t k = 0; k < checkpoints.size(); ++k) {
    CAPTURE(checkpoints[k]);
    CHECK(ks_distance(chain_b[k], engine_b[k]) < 0.035);
    CHECK(ks_distance(chain_r[k], engine_r[k]) < 0.035);
  }
}
