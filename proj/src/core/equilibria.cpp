#include "equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ewlab {

double expected_payoff(const Game& g, const MixedProfile& p, int player) {
  p.validate_for(g);
  double total = 0.0;
  for (ProfileIterator it(g); !it.done(); it.next())
    total += p.prob(*it) * g.payoff(player, *it);
  return total;
}

double deviation_payoff(const Game& g, const MixedProfile& p, int player,
                        int action) {
  double total = 0.0;
  for (ProfileIterator it(g); !it.done(); it.next()) {
    const PureProfile& a = *it;
    if (a[player] != action) continue;
    double q = 1.0;
    for (int j = 0; j < g.num_players(); ++j)
      if (j != player) q *= p.p[j][a[j]];
    total += q * g.payoff(player, a);
  }
  return total;
}

std::vector<PureProfile> strict_nash_equilibria(const Game& g) {
  std::vector<PureProfile> out;
  for (ProfileIterator it(g); !it.done(); it.next()) {
    const PureProfile& a = *it;
    bool strict = true;
    for (int i = 0; i < g.num_players() && strict; ++i) {
      const double u = g.payoff(i, a);
      PureProfile b = a;
      for (int bi = 0; bi < g.action_count(i); ++bi) {
        if (bi == a[i]) continue;
        b[i] = bi;
        if (g.payoff(i, b) >= u) {
          strict = false;
          break;
        }
      }
    }
    if (strict) out.push_back(a);
  }
  return out;  // ProfileIterator is already lexicographic
}

namespace {

std::vector<std::vector<int>> supports_of(const MixedProfile& p, double tol) {
  std::vector<std::vector<int>> s(p.p.size());
  for (size_t i = 0; i < p.p.size(); ++i)
    for (size_t a = 0; a < p.p[i].size(); ++a)
      if (p.p[i][a] > tol) s[i].push_back(static_cast<int>(a));
  return s;
}

// Iterate the product of the opponents' supports of player `i`.
bool next_support_profile(const std::vector<std::vector<int>>& supports,
                          std::vector<size_t>& idx, int skip_player) {
  for (int j = static_cast<int>(idx.size()) - 1; j >= 0; --j) {
    if (j == skip_player) continue;
    if (++idx[j] < supports[j].size()) return true;
    idx[j] = 0;
  }
  return false;
}

}  // namespace

bool is_nash(const Game& g, const MixedProfile& p, double tol) {
  p.validate_for(g);
  for (int i = 0; i < g.num_players(); ++i) {
    const double v = expected_payoff(g, p, i);
    for (int b = 0; b < g.action_count(i); ++b)
      if (deviation_payoff(g, p, i, b) - v > tol) return false;
  }
  return true;
}

bool is_neep(const Game& g, const MixedProfile& p, double tol) {
  if (tol < 0) throw std::invalid_argument("is_neep: tol must be >= 0");
  if (!is_nash(g, p, tol)) return false;
  const auto supports = supports_of(p, tol);
  const int n = g.num_players();
  for (int i = 0; i < n; ++i) {
    if (supports[i].size() < 2) continue;
    std::vector<size_t> idx(n, 0);
    PureProfile a(n, 0);
    do {
      for (int j = 0; j < n; ++j)
        if (j != i) a[j] = supports[j][idx[j]];
      a[i] = supports[i][0];
      const double ref = g.payoff(i, a);
      for (size_t k = 1; k < supports[i].size(); ++k) {
        a[i] = supports[i][k];
        if (std::abs(g.payoff(i, a) - ref) > tol) return false;
      }
    } while (next_support_profile(supports, idx, i));
  }
  return true;
}

bool is_strong_coordination(const Game& g) {
  const int n = g.num_players();
  const int m = g.action_count(0);
  for (int i = 1; i < n; ++i)
    if (g.action_count(i) != m) return false;
  for (ProfileIterator it(g); !it.done(); it.next()) {
    const PureProfile& a = *it;
    const bool diagonal =
        std::all_of(a.begin(), a.end(), [&](int k) { return k == a[0]; });
    for (int i = 0; i < n; ++i) {
      const double u = g.payoff(i, a);
      if (diagonal ? (u <= 0.0) : (u != 0.0)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 2-player NEEP support enumeration
// ---------------------------------------------------------------------------

namespace {

// Solve A x = b by Gaussian elimination with partial pivoting.
// Returns false when the system is (numerically) singular.
bool solve_linear(std::vector<std::vector<double>> A, std::vector<double> b,
                  std::vector<double>& x) {
  const size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-12) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (size_t r = n; r-- > 0;) {
    double s = b[r];
    for (size_t c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return true;
}

// A polytope inside the simplex over `support`, cut by linear constraints
// c.x <= 0 (coefficients indexed by support position).
struct FactorPolytope {
  std::vector<int> support;
  int full_dim;
  std::vector<std::vector<double>> cuts;        // each length support.size()
  std::vector<std::vector<double>> vertices;    // full-length vectors
  int dimension = 0;
};

constexpr double kFeasTol = 1e-9;

bool vertex_feasible(const std::vector<double>& v,
                     const FactorPolytope& poly) {
  for (double q : v)
    if (q < -kFeasTol || q > 1 + kFeasTol) return false;
  for (const auto& c : poly.cuts) {
    double s = 0.0;
    for (size_t k = 0; k < poly.support.size(); ++k)
      s += c[k] * v[poly.support[k]];
    if (s > kFeasTol) return false;
  }
  return true;
}

int affine_rank(const std::vector<std::vector<double>>& vertices) {
  if (vertices.size() <= 1) return 0;
  std::vector<std::vector<double>> dirs;
  for (size_t k = 1; k < vertices.size(); ++k) {
    std::vector<double> d(vertices[k].size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = vertices[k][j] - vertices[0][j];
    dirs.push_back(std::move(d));
  }
  // Gram-Schmidt rank
  int rank = 0;
  std::vector<std::vector<double>> basis;
  for (auto& d : dirs) {
    for (const auto& e : basis) {
      double dot = 0, nn = 0;
      for (size_t j = 0; j < d.size(); ++j) {
        dot += d[j] * e[j];
        nn += e[j] * e[j];
      }
      for (size_t j = 0; j < d.size(); ++j) d[j] -= dot / nn * e[j];
    }
    double norm = 0;
    for (double q : d) norm += q * q;
    if (std::sqrt(norm) > 1e-7) {
      basis.push_back(d);
      ++rank;
    }
  }
  return rank;
}

// Enumerate vertices by activating |support|-1 constraints out of
// {coordinate = 0 on support} and {cut . x = 0}, together with sum = 1.
void enumerate_vertices(FactorPolytope& poly) {
  const size_t s = poly.support.size();
  std::vector<std::vector<double>> candidates;
  for (size_t k = 0; k < s; ++k) {
    std::vector<double> row(s, 0.0);
    row[k] = 1.0;
    candidates.push_back(std::move(row));  // x_k = 0
  }
  for (const auto& c : poly.cuts) candidates.push_back(c);

  std::vector<std::vector<double>> found;
  const size_t need = s - 1;
  std::vector<size_t> pick(need);
  std::function<void(size_t, size_t)> rec = [&](size_t start, size_t depth) {
    if (depth == need) {
      std::vector<std::vector<double>> A;
      std::vector<double> b;
      A.emplace_back(s, 1.0);  // sum to one
      b.push_back(1.0);
      for (size_t q = 0; q < need; ++q) {
        A.push_back(candidates[pick[q]]);
        b.push_back(0.0);
      }
      std::vector<double> x;
      if (!solve_linear(A, b, x)) return;
      std::vector<double> full(poly.full_dim, 0.0);
      for (size_t k = 0; k < s; ++k)
        full[poly.support[k]] = std::max(0.0, std::min(1.0, x[k]));
      // re-check feasibility on the clamped vector
      std::vector<double> raw(poly.full_dim, 0.0);
      for (size_t k = 0; k < s; ++k) raw[poly.support[k]] = x[k];
      if (!vertex_feasible(raw, poly)) return;
      for (const auto& v : found)
        if (std::equal(v.begin(), v.end(), full.begin(),
                       [](double a, double b) { return std::abs(a - b) < 1e-8; }))
          return;
      found.push_back(full);
      return;
    }
    for (size_t c = start; c < candidates.size(); ++c) {
      pick[depth] = c;
      rec(c + 1, depth + 1);
    }
  };
  if (need == 0) {
    std::vector<double> full(poly.full_dim, 0.0);
    full[poly.support[0]] = 1.0;
    if (vertex_feasible(full, poly)) found.push_back(full);
  } else {
    rec(0, 0);
  }
  std::sort(found.begin(), found.end());
  poly.vertices = std::move(found);
  poly.dimension = affine_rank(poly.vertices);
}

// Is every vertex of `a` inside `b`?
bool factor_contained(const FactorPolytope& a, const FactorPolytope& b) {
  for (const auto& v : a.vertices) {
    for (int j = 0; j < a.full_dim; ++j) {
      const bool in_support =
          std::find(b.support.begin(), b.support.end(), j) != b.support.end();
      if (!in_support && v[j] > kFeasTol) return false;
    }
    if (!vertex_feasible(v, b)) return false;
  }
  return true;
}

struct CandidateComponent {
  FactorPolytope f1, f2;
  std::vector<int> support1, support2;
};

void subsets(int m, std::vector<std::vector<int>>& out) {
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> s;
    for (int a = 0; a < m; ++a)
      if (mask & (1 << a)) s.push_back(a);
    out.push_back(std::move(s));
  }
}

}  // namespace

std::string NeepComponent::describe(const Game& g) const {
  std::ostringstream os;
  auto print_profile = [&](const MixedProfile& mp) {
    os << "(";
    for (int i = 0; i < g.num_players(); ++i) {
      if (i) os << " ; ";
      bool first = true;
      for (int a = 0; a < g.action_count(i); ++a) {
        if (mp.p[i][a] < 1e-12) continue;
        if (!first) os << " + ";
        os << mp.p[i][a] << "*" << g.action_label(i, a);
        first = false;
      }
    }
    os << ")";
  };
  switch (kind) {
    case Kind::Point:
      os << "point ";
      print_profile(vertices[0]);
      break;
    case Kind::Segment:
      os << "segment ";
      print_profile(vertices[0]);
      os << " -- ";
      print_profile(vertices[1]);
      break;
    case Kind::Polytope:
      os << "polytope dim " << dimension << " with vertices";
      for (const auto& v : vertices) {
        os << " ";
        print_profile(v);
      }
      break;
  }
  return os.str();
}

std::vector<NeepComponent> enumerate_neep_2p(const Game& g, double tol) {
  if (g.num_players() != 2)
    throw std::invalid_argument("enumerate_neep_2p: only 2-player games");
  const int m1 = g.action_count(0), m2 = g.action_count(1);
  std::vector<std::vector<int>> subsets1, subsets2;
  subsets(m1, subsets1);
  subsets(m2, subsets2);

  auto u = [&](int player, int a1, int a2) {
    return g.payoff(player, PureProfile{a1, a2});
  };

  std::vector<CandidateComponent> comps;
  for (const auto& S1 : subsets1) {
    for (const auto& S2 : subsets2) {
      // equalizing condition is a property of the support pair alone:
      // each player's payoff must not depend on their own action inside
      // the support rectangle
      bool equalizing = true;
      for (int a2 : S2) {
        for (size_t k = 1; k < S1.size() && equalizing; ++k)
          if (std::abs(u(0, S1[k], a2) - u(0, S1[0], a2)) > tol)
            equalizing = false;
      }
      for (int a1 : S1) {
        for (size_t k = 1; k < S2.size() && equalizing; ++k)
          if (std::abs(u(1, a1, S2[k]) - u(1, a1, S2[0])) > tol)
            equalizing = false;
      }
      if (!equalizing) continue;

      // Nash cuts: deviations of player 1 constrain p2 and vice versa.
      FactorPolytope f2{S2, m2, {}, {}, 0};
      for (int b1 = 0; b1 < m1; ++b1) {
        if (std::find(S1.begin(), S1.end(), b1) != S1.end()) continue;
        std::vector<double> c(S2.size());
        for (size_t k = 0; k < S2.size(); ++k)
          c[k] = u(0, b1, S2[k]) - u(0, S1[0], S2[k]);
        f2.cuts.push_back(std::move(c));
      }
      FactorPolytope f1{S1, m1, {}, {}, 0};
      for (int b2 = 0; b2 < m2; ++b2) {
        if (std::find(S2.begin(), S2.end(), b2) != S2.end()) continue;
        std::vector<double> c(S1.size());
        for (size_t k = 0; k < S1.size(); ++k)
          c[k] = u(1, S1[k], b2) - u(1, S1[k], S2[0]);
        f1.cuts.push_back(std::move(c));
      }
      enumerate_vertices(f1);
      enumerate_vertices(f2);
      if (f1.vertices.empty() || f2.vertices.empty()) continue;
      comps.push_back({std::move(f1), std::move(f2), S1, S2});
    }
  }

  // drop components contained in another's closure
  std::vector<bool> dead(comps.size(), false);
  for (size_t a = 0; a < comps.size(); ++a) {
    for (size_t b = 0; b < comps.size() && !dead[a]; ++b) {
      if (a == b || dead[b]) continue;
      if (factor_contained(comps[a].f1, comps[b].f1) &&
          factor_contained(comps[a].f2, comps[b].f2)) {
        const bool mutual = factor_contained(comps[b].f1, comps[a].f1) &&
                            factor_contained(comps[b].f2, comps[a].f2);
        if (!mutual || a > b) dead[a] = true;
      }
    }
  }

  std::vector<NeepComponent> out;
  for (size_t idx = 0; idx < comps.size(); ++idx) {
    if (dead[idx]) continue;
    const auto& c = comps[idx];
    NeepComponent nc;
    nc.support1 = c.support1;
    nc.support2 = c.support2;
    nc.dimension = c.f1.dimension + c.f2.dimension;
    auto make_profile = [&](const std::vector<double>& v1,
                            const std::vector<double>& v2) {
      MixedProfile mp;
      mp.p = {v1, v2};
      return mp;
    };
    if (nc.dimension == 0) {
      nc.kind = NeepComponent::Kind::Point;
      nc.vertices.push_back(make_profile(c.f1.vertices[0], c.f2.vertices[0]));
    } else if (nc.dimension == 1) {
      nc.kind = NeepComponent::Kind::Segment;
      if (c.f1.dimension == 1) {
        nc.vertices.push_back(make_profile(c.f1.vertices.front(), c.f2.vertices[0]));
        nc.vertices.push_back(make_profile(c.f1.vertices.back(), c.f2.vertices[0]));
      } else {
        nc.vertices.push_back(make_profile(c.f1.vertices[0], c.f2.vertices.front()));
        nc.vertices.push_back(make_profile(c.f1.vertices[0], c.f2.vertices.back()));
      }
    } else {
      nc.kind = NeepComponent::Kind::Polytope;
      for (const auto& v1 : c.f1.vertices)
        for (const auto& v2 : c.f2.vertices)
          nc.vertices.push_back(make_profile(v1, v2));
      std::ostringstream os;
      os << "supports {";
      for (int a : c.support1) os << " " << g.action_label(0, a);
      os << " } x {";
      for (int a : c.support2) os << " " << g.action_label(1, a);
      os << " }, deviation inequalities active";
      nc.constraints.push_back(os.str());
    }
    out.push_back(std::move(nc));
  }
  std::sort(out.begin(), out.end(), [](const NeepComponent& a, const NeepComponent& b) {
    if (a.support1 != b.support1) return a.support1 < b.support1;
    if (a.support2 != b.support2) return a.support2 < b.support2;
    return a.vertices.size() < b.vertices.size();
  });
  return out;
}

}  // namespace ewlab
