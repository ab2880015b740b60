#pragma once
// Brute-force reference implementations used only by the tests. None of
// them shares code with the library algorithms they check.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "vkit/fk.hpp"
#include "vkit/measure.hpp"
#include "vkit/metric.hpp"
#include "vkit/persistence.hpp"

namespace oracle {

using vkit::Index;

/// Minimum transport cost over every vertex of the transportation polytope.
/// Vertices are the basic feasible solutions: m + k - 1 cells forming a
/// spanning tree of the bipartite graph, with flows fixed by leaf peeling.
inline double transport_by_vertices(const vkit::FiniteMetricSpace& X, const vkit::FiniteMeasure& mu,
                                    const vkit::FiniteMeasure& nu) {
  const std::size_t m = mu.support_size(), k = nu.support_size();
  const std::size_t cells = m * k, basis = m + k - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(cells, 0);
  std::fill(pick.end() - static_cast<long>(basis), pick.end(), 1);
  do {
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < cells; ++c)
      if (pick[c]) chosen.push_back(c);
    // Acyclic check with union-find on m + k nodes.
    std::vector<std::size_t> parent(m + k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    bool tree = true;
    for (auto c : chosen) {
      const auto a = find(c / k), b = find(m + c % k);
      if (a == b) {
        tree = false;
        break;
      }
      parent[a] = b;
    }
    if (!tree) continue;
    // Leaf peeling.
    std::vector<double> supply(mu.weights().begin(), mu.weights().end());
    std::vector<double> demand(nu.weights().begin(), nu.weights().end());
    std::vector<bool> done(chosen.size(), false);
    std::vector<double> flow(chosen.size(), 0.0);
    for (std::size_t round = 0; round < chosen.size(); ++round) {
      for (std::size_t e = 0; e < chosen.size(); ++e) {
        if (done[e]) continue;
        const std::size_t i = chosen[e] / k, j = chosen[e] % k;
        std::size_t deg_i = 0, deg_j = 0;
        for (std::size_t f = 0; f < chosen.size(); ++f) {
          if (done[f]) continue;
          deg_i += chosen[f] / k == i;
          deg_j += chosen[f] % k == j;
        }
        if (deg_i == 1) {
          flow[e] = supply[i];
        } else if (deg_j == 1) {
          flow[e] = demand[j];
        } else {
          continue;
        }
        supply[i] -= flow[e];
        demand[j] -= flow[e];
        done[e] = true;
        break;
      }
    }
    bool feasible = true;
    double cost = 0.0;
    for (std::size_t e = 0; e < chosen.size(); ++e) {
      if (flow[e] < -1e-12) feasible = false;
      cost += flow[e] * X(mu.support()[chosen[e] / k], nu.support()[chosen[e] % k]);
    }
    for (double s : supply) feasible = feasible && std::abs(s) <= 1e-12;
    for (double d : demand) feasible = feasible && std::abs(d) <= 1e-12;
    if (feasible) best = std::min(best, cost);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

/// Every subset of {0..n-1} with 1..k_max+1 elements, as sorted index lists.
inline std::vector<std::vector<Index>> subsets(std::size_t n, int k_max) {
  std::vector<std::vector<Index>> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > k_max + 1) continue;
    std::vector<Index> s;
    for (Index i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double diameter(const vkit::FiniteMetricSpace& X, const std::vector<Index>& s) {
  double d = 0.0;
  for (Index a : s)
    for (Index b : s) d = std::max(d, X(a, b));
  return d;
}

inline double cech_value(const vkit::FiniteMetricSpace& X, const std::vector<Index>& s) {
  double best = std::numeric_limits<double>::infinity();
  for (Index z = 0; z < X.size(); ++z) {
    double worst = 0.0;
    for (Index x : s) worst = std::max(worst, X(z, x));
    best = std::min(best, worst);
  }
  return best;
}

/// (simplex, value) pairs of the open VR / Cech complex at r.
inline std::map<std::vector<Index>, double> vr(const vkit::FiniteMetricSpace& X, double r, int k_max) {
  std::map<std::vector<Index>, double> out;
  for (auto& s : subsets(X.size(), k_max))
    if (const double d = diameter(X, s); d < r) out[s] = d;
  return out;
}

inline std::map<std::vector<Index>, double> cech(const vkit::FiniteMetricSpace& X, double r, int k_max) {
  std::map<std::vector<Index>, double> out;
  for (auto& s : subsets(X.size(), k_max))
    if (const double d = cech_value(X, s); d < r) out[s] = d;
  return out;
}

inline std::map<std::vector<Index>, double> vietoris(std::size_t n, const std::vector<vkit::PointSet>& cover,
                                                     int k_max) {
  std::map<std::vector<Index>, double> out;
  for (auto& s : subsets(n, k_max))
    for (const auto& U : cover)
      if (std::all_of(s.begin(), s.end(), [&](Index x) { return U.contains(x); })) {
        out[s] = 0.0;
        break;
      }
  return out;
}

// ---------------------------------------------------------------------------
// Freudenthal-Kuhn by direct enumeration of every (base, permutation).

struct FKSimplexRaw {
  std::vector<int> base;
  std::vector<int> perm;
  std::vector<std::vector<int>> vertices;
};

inline std::vector<FKSimplexRaw> fk_all(int n, int p) {
  std::vector<FKSimplexRaw> out;
  std::vector<int> base(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      FKSimplexRaw s{base, perm, {base}};
      for (int a : perm) {
        auto v = s.vertices.back();
        ++v[static_cast<std::size_t>(a)];
        s.vertices.push_back(v);
      }
      out.push_back(std::move(s));
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::size_t i = 0;
    while (i < base.size() && ++base[i] == p) base[i++] = 0;
    if (i == base.size()) break;
  }
  return out;
}

/// |det| of an n x n matrix by partial-pivot elimination.
inline double abs_det(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    std::swap(a[piv], a[c]);
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return std::abs(det);
}

inline double volume(const FKSimplexRaw& s, int p) {
  const std::size_t n = s.base.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m[r][c] = static_cast<double>(s.vertices[r + 1][c] - s.vertices[0][c]) / p;
  double fact = 1.0;
  for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<double>(k);
  return abs_det(m) / fact;
}

// ---------------------------------------------------------------------------

/// shrink_to_inner by scanning i = 1, 2, ... directly.
inline std::optional<std::pair<std::size_t, vkit::PointSet>> inner_scan(const vkit::FiniteMetricSpace& X,
                                                                        const std::vector<vkit::FiniteMeasure>& A,
                                                                        double p, const vkit::PointSet& U,
                                                                        std::size_t i_max = 100000) {
  for (std::size_t i = 1; i <= i_max; ++i) {
    std::vector<Index> members;
    for (Index x : U) {
      double d = std::numeric_limits<double>::infinity();
      for (Index y = 0; y < X.size(); ++y)
        if (!U.contains(y)) d = std::min(d, X(x, y));
      if (d > 1.0 / static_cast<double>(i)) members.push_back(x);
    }
    vkit::PointSet V(members);
    if (std::all_of(A.begin(), A.end(), [&](const vkit::FiniteMeasure& mu) { return mu.mass(V) > p; }))
      return std::make_pair(i, V);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

/// Bottleneck distance by trying every assignment of the diagonal-augmented
/// point sets; only for a handful of points per dimension.
inline double bottleneck(const std::vector<vkit::Interval>& P, const std::vector<vkit::Interval>& Q) {
  const std::size_t a = P.size(), b = Q.size(), n = a + b;
  auto cost = [&](std::size_t i, std::size_t j) -> double {
    const bool pi = i < a, qj = j < b;
    if (pi && qj) {
      const auto &x = P[i], &y = Q[j];
      if (x.essential() != y.essential()) return std::numeric_limits<double>::infinity();
      const double db = std::abs(x.birth - y.birth);
      return x.essential() ? db : std::max(db, std::abs(x.death - y.death));
    }
    if (pi) return P[i].essential() ? std::numeric_limits<double>::infinity() : (P[i].death - P[i].birth) / 2;
    if (qj) return Q[j].essential() ? std::numeric_limits<double>::infinity() : (Q[j].death - Q[j].birth) / 2;
    return 0.0;
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, cost(i, perm[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n == 0 ? 0.0 : best;
}

}  // namespace oracle
