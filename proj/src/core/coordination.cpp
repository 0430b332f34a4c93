#include "coordination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "equilibria.hpp"

namespace ewlab {

namespace {

void require_strong_coordination(const Game& g) {
  if (!is_strong_coordination(g))
    throw std::invalid_argument("operation requires a strong coordination game");
}

double diagonal_product(const Game& g, const MixedProfile& p, int k) {
  double prod = 1.0;
  for (int i = 0; i < g.num_players(); ++i) prod *= p.p[i][k];
  return prod;
}

}  // namespace

double potential_z(const Game& g, const MixedProfile& p) {
  require_strong_coordination(g);
  p.validate_for(g);
  double best = 0.0;
  for (int k = 0; k < g.action_count(0); ++k)
    best = std::max(best, diagonal_product(g, p, k));
  return best > 0.0 ? 1.0 / best : std::numeric_limits<double>::infinity();
}

int potential_z_argmin(const Game& g, const MixedProfile& p) {
  require_strong_coordination(g);
  int arg = 0;
  double best = -1.0;
  for (int k = 0; k < g.action_count(0); ++k) {
    const double prod = diagonal_product(g, p, k);
    if (prod > best) {
      best = prod;
      arg = k;
    }
  }
  return arg;
}

namespace {

double closed_form_x(const Game& g, const MixedProfile& p,
                     const std::vector<double>& etas, int c) {
  const int n = g.num_players();
  const int m = g.action_count(0);
  // alpha_i(k) = e^{eta_i u_i(k,..,k)} - 1
  std::vector<std::vector<double>> alpha(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k)
      alpha[i][k] = std::expm1(etas[i] * g.payoff(i, PureProfile(n, k)));

  auto F = [&](int i, int j) {
    if (j == c) return (1.0 + p.p[i][c] * alpha[i][c]) / (1.0 + alpha[i][c]);
    return 1.0 + p.p[i][j] * alpha[i][j];
  };

  if (n == 2) {
    // the double sum factorizes: each player's factor only depends on the
    // opponent's realized action
    double g1 = 0.0, g2 = 0.0;
    for (int k = 0; k < m; ++k) {
      g1 += p.p[0][k] * F(1, k);
      g2 += p.p[1][k] * F(0, k);
    }
    return g1 * g2;
  }

  // n >= 3: only diagonal profiles and single-deviator profiles contribute
  // factors different from 1
  double x = 1.0;
  for (int k = 0; k < m; ++k) {
    double pk = 1.0;
    for (int i = 0; i < n; ++i) pk *= p.p[i][k];
    double xk = 1.0;
    for (int i = 0; i < n; ++i) xk *= F(i, k);
    x += pk * (xk - 1.0);
    for (int i = 0; i < n; ++i) {
      double others = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) others *= p.p[j][k];
      x += others * (1.0 - p.p[i][k]) * (F(i, k) - 1.0);
    }
  }
  return x;
}

}  // namespace

OneStepPotential one_step_expected_potential(const Game& g, const MixedProfile& p,
                                             const std::vector<double>& etas, int k,
                                             std::int64_t enumeration_cap) {
  require_strong_coordination(g);
  p.validate_for(g);
  const int n = g.num_players();
  const int m = g.action_count(0);
  if (k < 0 || k >= m) throw std::invalid_argument("diagonal action out of range");
  if (static_cast<int>(etas.size()) != n)
    throw std::invalid_argument("one learning rate per player required");
  if (g.num_profiles() > enumeration_cap)
    throw std::invalid_argument("profile space exceeds the enumeration cap");

  OneStepPotential out;
  const double prod_k = diagonal_product(g, p, k);
  out.current = prod_k > 0 ? 1.0 / prod_k : std::numeric_limits<double>::infinity();

  // exact expectation: enumerate realized profiles, push the state through
  // the weight update, evaluate 1/prod_i p^{t+1}_i(k)
  double expected = 0.0;
  PureProfile probe(n);
  for (ProfileIterator it(g); !it.done(); it.next()) {
    const PureProfile& a = *it;
    double pa = 1.0;
    for (int i = 0; i < n; ++i) pa *= p.p[i][a[i]];
    if (pa == 0.0) continue;
    double inv_next = 1.0;
    probe = a;
    for (int i = 0; i < n; ++i) {
      // 1/p_i^{t+1}(k) = (1/p_i^t(k)) sum_b p_i^t(b) e^{eta_i (u_i(b,a_-i) - u_i(k,a_-i))}
      probe[i] = k;
      const double uk = g.payoff(i, probe);
      double s = 0.0;
      for (int b = 0; b < m; ++b) {
        probe[i] = b;
        s += p.p[i][b] * std::exp(etas[i] * (g.payoff(i, probe) - uk));
      }
      probe[i] = a[i];
      inv_next *= s / p.p[i][k];
    }
    expected += pa * inv_next;
  }
  out.expected = expected;
  out.x_enumerated = expected * prod_k;
  out.x_closed_form = closed_form_x(g, p, etas, k);

  const auto consts = supermartingale_constants(g, etas);
  const double z = out.current;
  out.x_upper_bound =
      1.0 + consts.c / z - consts.d * n * std::pow(z, -(n - 1.0) / n);
  return out;
}

SupermartingaleConstants supermartingale_constants(const Game& g,
                                                   const std::vector<double>& etas) {
  require_strong_coordination(g);
  const int n = g.num_players();
  const int m = g.action_count(0);
  if (static_cast<int>(etas.size()) != n)
    throw std::invalid_argument("one learning rate per player required");
  std::vector<std::vector<double>> alpha(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k)
      alpha[i][k] = std::expm1(etas[i] * g.payoff(i, PureProfile(n, k)));

  SupermartingaleConstants out;
  out.c = -std::numeric_limits<double>::infinity();
  out.d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < m; ++c) {
    double sum_beta = 0.0, min_beta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double beta = alpha[i][c] / (1.0 + alpha[i][c]);
      sum_beta += beta;
      min_beta = std::min(min_beta, beta);
    }
    double cc = -m + 1.0 + 2.0 * sum_beta;
    for (int k = 0; k < m; ++k) {
      if (k == c) continue;
      double prod = 1.0, lin = 0.0;
      for (int i = 0; i < n; ++i) {
        prod *= 1.0 + alpha[i][k];
        lin += alpha[i][k];
      }
      cc += prod + lin;
    }
    out.c = std::max(out.c, cc);
    out.d = std::min(out.d, min_beta);
  }
  out.m0 = std::pow(out.c / (out.d * n), static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------------------

Game make_exa7_game() {
  // rows T,M,B x cols l,m,r; both players share the payoff
  const std::vector<double> u = {1, 0, 0, 0, 1, 0, 0, 0.5, 1};
  std::vector<double> payoffs;
  for (double v : u) {
    payoffs.push_back(v);
    payoffs.push_back(v);
  }
  return Game({3, 3}, payoffs, {{"T", "M", "B"}, {"l", "m", "r"}});
}

bool is_exa7_game(const Game& g) {
  if (g.num_players() != 2 || g.action_count(0) != 3 || g.action_count(1) != 3)
    return false;
  return g.same_payoffs(make_exa7_game(), 1e-12);
}

double potential_zprime(const MixedProfile& p) {
  if (p.num_players() != 2 || p.p[0].size() != 3 || p.p[1].size() != 3)
    throw std::invalid_argument("zprime: expects a 2-player 3-action profile");
  const auto& x = p.p[0];
  const auto& y = p.p[1];
  const double dens[3] = {x[0] * y[0], y[1] * (x[1] + x[2]), x[2] * (y[1] + y[2])};
  double best = std::numeric_limits<double>::infinity();
  for (double den : dens)
    if (den > 0.0) best = std::min(best, 1.0 / den);
  return best;
}

double one_step_expected_zprime(const MixedProfile& p,
                                const std::vector<double>& etas) {
  const Game g = make_exa7_game();
  p.validate_for(g);
  if (etas.size() != 2) throw std::invalid_argument("two learning rates required");
  double expected = 0.0;
  for (int a1 = 0; a1 < 3; ++a1) {
    for (int a2 = 0; a2 < 3; ++a2) {
      const double pa = p.p[0][a1] * p.p[1][a2];
      if (pa == 0.0) continue;
      MixedProfile next;
      next.p.resize(2);
      for (int i = 0; i < 2; ++i) {
        next.p[i].resize(3);
        double sum = 0.0;
        for (int b = 0; b < 3; ++b) {
          const double u =
              i == 0 ? g.payoff(0, {b, a2}) : g.payoff(1, {a1, b});
          next.p[i][b] = p.p[i][b] * std::exp(etas[i] * u);
          sum += next.p[i][b];
        }
        for (double& v : next.p[i]) v /= sum;
      }
      expected += pa * potential_zprime(next);
    }
  }
  return expected;
}

double calibrate_zprime_m0(const std::vector<double>& etas, int samples,
                           std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    MixedProfile p;
    p.p.resize(2);
    const double scale = 2.0 + 48.0 * rng.uniform();
    for (int i = 0; i < 2; ++i) {
      p.p[i].resize(3);
      const int anchor = static_cast<int>(rng.uniform() * 3.0);
      double sum = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double logit = (a == anchor) ? 0.0 : -scale * rng.uniform();
        p.p[i][a] = std::exp(logit);
        sum += p.p[i][a];
      }
      for (double& v : p.p[i]) v /= sum;
    }
    const double z = potential_zprime(p);
    if (!std::isfinite(z)) continue;
    const double e = one_step_expected_zprime(p, etas);
    if (e > z * (1.0 + 1e-12)) worst = std::max(worst, z);
  }
  // safety factor over the largest sampled violation; floor keeps the
  // threshold meaningful when no violation shows up at all
  return std::max(8.0, 4.0 * worst);
}

// ---------------------------------------------------------------------------

double drift_2x2(double a, double b, double x, double y) {
  if (!(a > -1.0) || !(b > -1.0))
    throw std::invalid_argument("drift: a and b must exceed -1");
  const double u = x * y + (1 - x) * (1 - y);
  const double d1 = 1 + a * x, d2 = 1 + b * y, d3 = 1 + a * (1 - x),
               d4 = 1 + b * (1 - y);
  const double den = d1 * d2 * d3 * d4;
  if (den == 0.0) throw std::invalid_argument("drift: degenerate denominator");
  const double ab = a + b + a * b;
  const double num =
      -u * d1 * d2 * d3 * d4 +
      x * y * (u + x * y * ab) * d3 * d4 +
      x * (1 - y) * (u + a * (1 - x) * (1 - y) + b * x * y) * d1 * d4 +
      (1 - x) * y * (u + a * x * y + b * (1 - x) * (1 - y)) * d2 * d3 +
      (1 - x) * (1 - y) * (u + (1 - x) * (1 - y) * ab) * d1 * d2;
  return num / den;
}

double drift_2x2_direct(double a, double b, double x, double y) {
  // four realized outcomes through the engine's own update rule
  const std::vector<double> payoffs = {1, 1, 0, 0, 0, 0, 1, 1};
  static const Game game({2, 2}, payoffs, {{"T", "B"}, {"L", "R"}});
  EwConfig cfg;
  cfg.game = &game;
  cfg.learning_rates = {std::log1p(a), std::log1p(b)};
  cfg.initial_profile.p = {{x, 1 - x}, {y, 1 - y}};
  cfg.seed = 0;
  auto u = [](const MixedProfile& mp) {
    return mp.p[0][0] * mp.p[1][0] + mp.p[0][1] * mp.p[1][1];
  };
  double expectation = 0.0;
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      const double pa = cfg.initial_profile.p[0][a1] * cfg.initial_profile.p[1][a2];
      EwState st(cfg);
      st.apply_action({a1, a2});
      expectation += pa * u(st.mixed_profile());
    }
  }
  return expectation - u(cfg.initial_profile);
}

// ---------------------------------------------------------------------------

Ex18Chain ex18_chain(double x, double y, double eta1, double eta2,
                     std::uint64_t seed, std::int64_t steps) {
  if (!(x > 0 && x < 1 && y > 0 && y < 1))
    throw std::invalid_argument("ex18 chain: x and y must lie in (0,1)");
  Rng rng(seed);
  Ex18Chain chain;
  chain.b.reserve(steps + 1);
  chain.r.reserve(steps + 1);
  std::int64_t b = 0, r = 0;
  chain.b.push_back(b);
  chain.r.push_back(r);
  for (std::int64_t t = 0; t < steps; ++t) {
    const double p_b_stay = x / (x + (1 - x) * std::exp(-eta1 * static_cast<double>(r)));
    const double p_r_stay = y / (y + (1 - y) * std::exp(-eta2 * static_cast<double>(b)));
    const bool b_moves = rng.uniform() >= p_b_stay;
    const bool r_moves = rng.uniform() >= p_r_stay;
    if (b_moves) ++b;
    if (r_moves) ++r;
    chain.b.push_back(b);
    chain.r.push_back(r);
  }
  return chain;
}

namespace {

Enclosure geometric_product(double c, double q, double tolerance) {
  // prod_{t>=0} 1/(1 + c q^t), 0 < q < 1, c >= 0
  if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be > 0");
  if (!(q > 0 && q < 1)) throw std::invalid_argument("decay must lie in (0,1)");
  double prod = 1.0;
  std::int64_t t = 0;
  while (true) {
    const double tail = c * std::pow(q, static_cast<double>(t)) / (1.0 - q);
    if (tail < tolerance / 2 || t > 100000000) {
      Enclosure e;
      e.hi = prod;
      e.lo = prod * std::exp(-tail);
      e.terms = t;
      return e;
    }
    prod /= 1.0 + c * std::pow(q, static_cast<double>(t));
    ++t;
  }
}

}  // namespace

Enclosure ex18_always_l_probability(double x, double y, double eta2,
                                    double tolerance) {
  if (!(x > 0 && x < 1 && y > 0 && y < 1))
    throw std::invalid_argument("ex18 product: x and y must lie in (0,1)");
  return geometric_product((1 - y) / (y * (1 - x)), std::exp(-eta2), tolerance);
}

Enclosure ex18_always_t_probability(double x, double y, double eta1,
                                    double tolerance) {
  if (!(x > 0 && x < 1 && y > 0 && y < 1))
    throw std::invalid_argument("ex18 product: x and y must lie in (0,1)");
  return geometric_product((1 - x) / (x * (1 - y)), std::exp(-eta1), tolerance);
}

double ex18_always_l_frequency(double x, double y, double eta1, double eta2,
                               std::int64_t horizon, int runs, std::uint64_t seed) {
  (void)eta1;  // along the monitored event R is pinned at 0, so B stays w.p. x
  int hits = 0;
  for (int run = 0; run < runs; ++run) {
    Rng rng(hash64(seed, static_cast<std::uint64_t>(run)));
    std::int64_t b = 0;
    bool ok = true;
    std::int64_t guard = 0;
    while (b < horizon && ok) {
      if (++guard > 100000000) {
        ok = false;
        break;
      }
      const double p_r_stay = y / (y + (1 - y) * std::exp(-eta2 * static_cast<double>(b)));
      const bool b_moves = rng.uniform() >= x;
      const bool r_moves = rng.uniform() >= p_r_stay;
      if (r_moves) ok = false;
      else if (b_moves) ++b;
    }
    if (ok) ++hits;
  }
  return static_cast<double>(hits) / runs;
}

}  // namespace ewlab
