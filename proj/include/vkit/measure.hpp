#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vkit/error.hpp"
#include "vkit/metric.hpp"

namespace vkit {

/// Finitely supported probability measure sum_i a_i delta_{x_i} in its unique
/// representation: support sorted and distinct, every weight strictly
/// positive, total mass 1 within 1e-12.
class FiniteMeasure {
 public:
  static constexpr double kRenormalizeTolerance = 1e-9;
  static constexpr double kMassTolerance = 1e-12;

  FiniteMeasure() = default;

  /// Zero weights are pruned. Total mass off by at most 1e-9 is renormalized;
  /// anything further off is rejected.
  FiniteMeasure(std::vector<Index> support, std::vector<double> weights) {
    if (support.size() != weights.size())
      throw Error(ErrorKind::InvalidMeasure, "support and weights differ in length");
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    for (std::size_t k = 0; k < order.size(); ++k) {
      const Index x = support[order[k]];
      const double w = weights[order[k]];
      if (!std::isfinite(w) || w < 0.0)
        throw Error(ErrorKind::InvalidMeasure, "weight of point " + std::to_string(x) + " is not a nonnegative real", {x});
      if (k > 0 && support[order[k - 1]] == x)
        throw Error(ErrorKind::InvalidMeasure, "support point " + std::to_string(x) + " repeated", {x});
      if (w > 0.0) {
        support_.push_back(x);
        weights_.push_back(w);
      }
    }
    if (support_.empty()) throw Error(ErrorKind::InvalidMeasure, "measure has no mass");
    normalize();
  }

  static FiniteMeasure from_pairs(std::vector<std::pair<Index, double>> pairs) {
    std::vector<Index> s;
    std::vector<double> w;
    for (auto [x, a] : pairs) {
      s.push_back(x);
      w.push_back(a);
    }
    return FiniteMeasure(std::move(s), std::move(w));
  }

  const std::vector<Index>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t support_size() const { return support_.size(); }
  PointSet support_set() const { return PointSet(support_); }

  /// Weight of x (psi_x); zero off the support.
  double weight(Index x) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), x);
    if (it == support_.end() || *it != x) return 0.0;
    return weights_[static_cast<std::size_t>(it - support_.begin())];
  }

  double mass(const PointSet& U) const {
    double m = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i)
      if (U.contains(support_[i])) m += weights_[i];
    return m;
  }

  void check_space(const FiniteMetricSpace& X) const {
    if (!support_.empty() && support_.back() >= X.size())
      throw Error(ErrorKind::InvalidIndex, "measure support outside the space", {support_.back()});
  }

  friend bool operator==(const FiniteMeasure&, const FiniteMeasure&) = default;

  /// Builds from sorted, distinct support and weights that already sum to one
  /// up to rounding; zero weights are pruned and no renormalization happens
  /// unless the sum drifts by more than 1e-12.
  static FiniteMeasure from_sorted(std::vector<Index> support, std::vector<double> weights) {
    FiniteMeasure m;
    for (std::size_t i = 0; i < support.size(); ++i)
      if (weights[i] > 0.0) {
        m.support_.push_back(support[i]);
        m.weights_.push_back(weights[i]);
      }
    if (m.support_.empty()) throw Error(ErrorKind::InvalidMeasure, "measure has no mass");
    m.normalize();
    return m;
  }

 private:
  void normalize() {
    double total = 0.0;
    for (double w : weights_) total += w;
    if (std::abs(total - 1.0) <= kMassTolerance) return;
    if (std::abs(total - 1.0) > kRenormalizeTolerance)
      throw Error(ErrorKind::InvalidMeasure, "total mass " + std::to_string(total) + " is not 1");
    for (double& w : weights_) w /= total;
  }

  std::vector<Index> support_;
  std::vector<double> weights_;
};

inline FiniteMeasure dirac(Index x) { return FiniteMeasure({x}, {1.0}); }

/// (1 - t) mu + t nu on the union support. The endpoints return the inputs
/// exactly.
inline FiniteMeasure convex_combine(const FiniteMeasure& mu, const FiniteMeasure& nu, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::InvalidArgument, "combination parameter outside [0,1]");
  if (t == 0.0) return mu;
  if (t == 1.0) return nu;
  std::vector<Index> s;
  std::vector<double> w;
  const auto& sa = mu.support();
  const auto& sb = nu.support();
  std::size_t i = 0, j = 0;
  while (i < sa.size() || j < sb.size()) {
    if (j == sb.size() || (i < sa.size() && sa[i] < sb[j])) {
      s.push_back(sa[i]);
      w.push_back((1.0 - t) * mu.weights()[i]);
      ++i;
    } else if (i == sa.size() || sb[j] < sa[i]) {
      s.push_back(sb[j]);
      w.push_back(t * nu.weights()[j]);
      ++j;
    } else {
      s.push_back(sa[i]);
      w.push_back((1.0 - t) * mu.weights()[i] + t * nu.weights()[j]);
      ++i;
      ++j;
    }
  }
  return FiniteMeasure::from_sorted(std::move(s), std::move(w));
}

/// Convex combination sum_k coeffs[k] * measures[k]; coefficients must be
/// nonnegative and sum to one.
inline FiniteMeasure mix(std::span<const FiniteMeasure> measures, std::span<const double> coeffs) {
  std::vector<std::pair<Index, double>> acc;
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    const auto& m = measures[k];
    for (std::size_t i = 0; i < m.support_size(); ++i) acc.emplace_back(m.support()[i], coeffs[k] * m.weights()[i]);
  }
  std::stable_sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Index> s;
  std::vector<double> w;
  for (const auto& [x, a] : acc) {
    if (!s.empty() && s.back() == x) {
      w.back() += a;
    } else {
      s.push_back(x);
      w.push_back(a);
    }
  }
  return FiniteMeasure::from_sorted(std::move(s), std::move(w));
}

/// l1 distance between barycentric coordinate vectors; lies in [0, 2].
inline double barycentric_distance(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  double d = 0.0;
  const auto& sa = mu.support();
  const auto& sb = nu.support();
  std::size_t i = 0, j = 0;
  while (i < sa.size() || j < sb.size()) {
    if (j == sb.size() || (i < sa.size() && sa[i] < sb[j])) {
      d += mu.weights()[i++];
    } else if (i == sa.size() || sb[j] < sa[i]) {
      d += nu.weights()[j++];
    } else {
      d += std::abs(mu.weights()[i++] - nu.weights()[j++]);
    }
  }
  return d;
}

/// A transport plan: mass[i][j] moved from rows[i] (support of mu) to
/// cols[j] (support of nu).
struct Coupling {
  std::vector<Index> rows;
  std::vector<Index> cols;
  std::vector<std::vector<double>> mass;

  double cost(const FiniteMetricSpace& X) const {
    double c = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) c += mass[i][j] * X(rows[i], cols[j]);
    return c;
  }

  double off_diagonal_mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (rows[i] != cols[j]) m += mass[i][j];
    return m;
  }

  /// Largest marginal violation against (mu, nu).
  double marginal_error(const FiniteMeasure& mu, const FiniteMeasure& nu) const {
    double err = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (mass[i][j] < 0.0) err = std::max(err, -mass[i][j]);
        s += mass[i][j];
      }
      err = std::max(err, std::abs(s - mu.weight(rows[i])));
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) s += mass[i][j];
      err = std::max(err, std::abs(s - nu.weight(cols[j])));
    }
    return err;
  }

  Coupling transposed() const {
    Coupling t{cols, rows, std::vector<std::vector<double>>(cols.size(), std::vector<double>(rows.size()))};
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) t.mass[j][i] = mass[i][j];
    return t;
  }
};

/// Feasible coupling that keeps min(mu(x), nu(x)) in place at every x and
/// moves the surplus of mu onto the deficit of nu in northwest-corner order.
/// Its off-diagonal mass is d_m(mu, nu) / 2.
inline Coupling common_mass_coupling(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  Coupling c{mu.support(), nu.support(),
             std::vector<std::vector<double>>(mu.support_size(), std::vector<double>(nu.support_size(), 0.0))};
  std::vector<double> surplus(mu.support_size()), deficit(nu.support_size());
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const Index x = c.rows[i];
    const double keep = std::min(mu.weights()[i], nu.weight(x));
    surplus[i] = mu.weights()[i] - keep;
    if (keep > 0.0) {
      const auto j = static_cast<std::size_t>(std::lower_bound(c.cols.begin(), c.cols.end(), x) - c.cols.begin());
      c.mass[i][j] = keep;
    }
  }
  for (std::size_t j = 0; j < c.cols.size(); ++j)
    deficit[j] = nu.weights()[j] - std::min(nu.weights()[j], mu.weight(c.cols[j]));
  std::size_t i = 0, j = 0;
  while (i < surplus.size() && j < deficit.size()) {
    if (surplus[i] <= 0.0) {
      ++i;
      continue;
    }
    if (deficit[j] <= 0.0) {
      ++j;
      continue;
    }
    const double moved = std::min(surplus[i], deficit[j]);
    c.mass[i][j] += moved;
    surplus[i] -= moved;
    deficit[j] -= moved;
  }
  return c;
}

}  // namespace vkit
