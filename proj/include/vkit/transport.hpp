#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "vkit/measure.hpp"
#include "vkit/metric.hpp"

namespace vkit {

namespace detail {

/// Transportation simplex (MODI / u-v method) on a dense m x n cost matrix.
/// The basis is kept as a spanning tree of exactly m + n - 1 cells, with
/// degenerate zero-flow cells where needed, so potentials are always well
/// defined. Returns the optimal flow matrix.
class TransportationSimplex {
 public:
  TransportationSimplex(std::vector<double> supply, std::vector<double> demand, std::vector<double> cost)
      : m_(supply.size()), n_(demand.size()), supply_(std::move(supply)), demand_(std::move(demand)),
        cost_(std::move(cost)) {}

  std::vector<std::vector<double>> solve() {
    northwest_corner();
    const std::size_t max_iterations = 50 * (m_ + n_) * (m_ + n_) + 1000;
    double scale = 0.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    const double tol = 1e-13 * std::max(1.0, scale);

    std::vector<double> u(m_), v(n_);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      compute_potentials(u, v);
      // Dantzig pricing first; fall back to Bland's first-improving rule if
      // degenerate pivots drag on.
      const bool bland = iter > max_iterations / 2;
      std::size_t enter_i = m_, enter_j = n_;
      double best = -tol;
      for (std::size_t i = 0; i < m_ && !(bland && enter_i < m_); ++i)
        for (std::size_t j = 0; j < n_; ++j) {
          if (is_basic_[i * n_ + j]) continue;
          const double reduced = cost_[i * n_ + j] - u[i] - v[j];
          if (reduced < best) {
            best = reduced;
            enter_i = i;
            enter_j = j;
            if (bland) break;
          }
        }
      if (enter_i == m_) break;
      pivot(enter_i, enter_j);
    }

    std::vector<std::vector<double>> flow(m_, std::vector<double>(n_, 0.0));
    for (const auto& cell : basis_) flow[cell.i][cell.j] = cell.flow;
    return flow;
  }

 private:
  struct Cell {
    std::size_t i, j;
    double flow;
  };

  void northwest_corner() {
    is_basic_.assign(m_ * n_, false);
    std::vector<double> s = supply_, d = demand_;
    std::size_t i = 0, j = 0;
    while (true) {
      const double f = std::max(0.0, std::min(s[i], d[j]));
      add_basic(i, j, f);
      s[i] -= f;
      d[j] -= f;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i == m_ - 1) {
        ++j;
      } else if (j == n_ - 1) {
        ++i;
      } else if (s[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void add_basic(std::size_t i, std::size_t j, double f) {
    basis_.push_back({i, j, f});
    is_basic_[i * n_ + j] = true;
  }

  // Rows are nodes 0..m-1, columns are nodes m..m+n-1.
  std::vector<std::vector<std::size_t>> tree_adjacency() const {
    std::vector<std::vector<std::size_t>> adj(m_ + n_);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      adj[basis_[k].i].push_back(k);
      adj[m_ + basis_[k].j].push_back(k);
    }
    return adj;
  }

  std::size_t other_end(std::size_t node, const Cell& c) const { return node < m_ ? m_ + c.j : c.i; }

  void compute_potentials(std::vector<double>& u, std::vector<double>& v) const {
    const auto adj = tree_adjacency();
    std::vector<bool> seen(m_ + n_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    u[0] = 0.0;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t k : adj[node]) {
        const Cell& c = basis_[k];
        const std::size_t next = other_end(node, c);
        if (seen[next]) continue;
        seen[next] = true;
        if (next >= m_) {
          v[c.j] = cost_[c.i * n_ + c.j] - u[c.i];
        } else {
          u[c.i] = cost_[c.i * n_ + c.j] - v[c.j];
        }
        stack.push_back(next);
      }
    }
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // Tree path from column ej back to row ei; together with the entering
    // cell it closes the unique cycle.
    const auto adj = tree_adjacency();
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent_cell(m_ + n_, none);
    std::vector<bool> seen(m_ + n_, false);
    std::vector<std::size_t> queue{ei};
    seen[ei] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      for (std::size_t k : adj[node]) {
        const std::size_t next = other_end(node, basis_[k]);
        if (seen[next]) continue;
        seen[next] = true;
        parent_cell[next] = k;
        queue.push_back(next);
      }
    }
    std::vector<std::size_t> path;  // basis indices, starting at column ej
    for (std::size_t node = m_ + ej; node != ei;) {
      const std::size_t k = parent_cell[node];
      path.push_back(k);
      node = other_end(node, basis_[k]);
    }
    // Cells at even positions of the path lose flow, odd positions gain.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = none;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const Cell& c = basis_[path[p]];
      if (c.flow < theta || (c.flow == theta && (c.i < basis_[leaving].i ||
                                                  (c.i == basis_[leaving].i && c.j < basis_[leaving].j)))) {
        theta = c.flow;
        leaving = path[p];
      }
    }
    for (std::size_t p = 0; p < path.size(); ++p) {
      Cell& c = basis_[path[p]];
      if (p % 2 == 0) {
        c.flow = (path[p] == leaving) ? 0.0 : c.flow - theta;
      } else {
        c.flow += theta;
      }
    }
    is_basic_[basis_[leaving].i * n_ + basis_[leaving].j] = false;
    basis_[leaving] = {ei, ej, theta};
    is_basic_[ei * n_ + ej] = true;
  }

  std::size_t m_, n_;
  std::vector<double> supply_, demand_, cost_;
  std::vector<Cell> basis_;
  std::vector<bool> is_basic_;
};

inline bool measure_less(const FiniteMeasure& a, const FiniteMeasure& b) {
  if (a.support() != b.support()) return a.support() < b.support();
  return a.weights() < b.weights();
}

}  // namespace detail

struct TransportResult {
  double distance;
  Coupling coupling;
};

/// Exact 1-Wasserstein distance between finitely supported measures on X,
/// with one optimal coupling (rows = support of mu, cols = support of nu).
/// The pair is solved in a canonical orientation, so swapping the arguments
/// returns the bitwise-identical distance and the transposed coupling.
inline TransportResult wasserstein(const FiniteMetricSpace& X, const FiniteMeasure& mu, const FiniteMeasure& nu) {
  mu.check_space(X);
  nu.check_space(X);
  if (mu == nu) {
    Coupling diag{mu.support(), nu.support(),
                  std::vector<std::vector<double>>(mu.support_size(), std::vector<double>(mu.support_size(), 0.0))};
    for (std::size_t i = 0; i < mu.support_size(); ++i) diag.mass[i][i] = mu.weights()[i];
    return {0.0, std::move(diag)};
  }
  if (detail::measure_less(nu, mu)) {
    auto swapped = wasserstein(X, nu, mu);
    return {swapped.distance, swapped.coupling.transposed()};
  }

  const std::size_t m = mu.support_size(), n = nu.support_size();
  std::vector<double> cost(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = X(mu.support()[i], nu.support()[j]);

  detail::TransportationSimplex solver(mu.weights(), nu.weights(), cost);
  Coupling c{mu.support(), nu.support(), solver.solve()};
  return {c.cost(X), std::move(c)};
}

inline double wasserstein_distance(const FiniteMetricSpace& X, const FiniteMeasure& mu, const FiniteMeasure& nu) {
  return wasserstein(X, mu, nu).distance;
}

}  // namespace vkit
