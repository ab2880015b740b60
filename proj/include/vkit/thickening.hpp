#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vkit/error.hpp"
#include "vkit/measure.hpp"
#include "vkit/metric.hpp"
#include "vkit/transport.hpp"

namespace vkit {

/// supp(mu) is contained in U.
inline bool in_m_u(const FiniteMeasure& mu, const PointSet& U) {
  return std::all_of(mu.support().begin(), mu.support().end(), [&](Index x) { return U.contains(x); });
}

/// Mass concentration: mu(U) > p for every mu in A (strict, no epsilon).
inline bool has_mcp(std::span<const FiniteMeasure> A, double p, const PointSet& U) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "concentration threshold must lie in (0,1)");
  return std::all_of(A.begin(), A.end(), [&](const FiniteMeasure& mu) { return mu.mass(U) > p; });
}

/// Element {mu : mu(U) > p} of the thickened cover.
struct ThickenedElement {
  PointSet base;
  double p;

  bool contains(const FiniteMeasure& mu) const { return mu.mass(base) > p; }
};

/// Lipschitz cutoff phi: X -> [0,1], equal to 1 on the plateau, 0 exactly off
/// the support set.
struct BumpFunction {
  PointSet plateau;
  PointSet support;
  double lipschitz;
  std::vector<double> values;  // indexed by point

  double operator()(Index x) const { return values[x]; }
};

/// phi(x) = min(1, d(x, V'^C) / delta) with delta = d(V, V'^C), which is
/// 1/delta-Lipschitz, 1 on V and 0 exactly on V'^C (given X is a metric on
/// V'). When V' = X the function is constant 1 with L = 0.
inline BumpFunction build_bump(const FiniteMetricSpace& X, const PointSet& plateau, const PointSet& support) {
  for (Index x : support) X.check_index(x);
  if (!support.includes(plateau)) throw Error(ErrorKind::InvalidArgument, "plateau must be contained in the support set");
  const PointSet outside = support.complement(X.size());
  BumpFunction phi{plateau, support, 0.0, std::vector<double>(X.size(), 0.0)};
  if (outside.empty()) {
    std::fill(phi.values.begin(), phi.values.end(), 1.0);
    return phi;
  }
  // With an empty plateau the gap is taken from the support set itself.
  const double gap = X.set_distance(plateau.empty() ? support : plateau, outside);
  if (!(gap > 0.0))
    throw Error(ErrorKind::DegenerateGap, "plateau touches the complement of the support set");
  phi.lipschitz = std::isfinite(gap) ? 1.0 / gap : 0.0;
  for (Index x = 0; x < X.size(); ++x) {
    if (!support.contains(x)) continue;
    phi.values[x] = plateau.contains(x) ? 1.0 : std::min(1.0, distance_to_complement(X, support, x) / gap);
  }
  return phi;
}

namespace detail {

// Pumped weights a_i phi(x_i) / sum_j a_j phi(x_j), aligned with
// mu.support(). Returns false when phi is identically 1 on the support, in
// which case the pump is the identity and `out` is left untouched.
inline bool pumped_weights(const FiniteMeasure& mu, const BumpFunction& phi, std::vector<double>& out) {
  bool identity = true;
  double total = 0.0;
  for (std::size_t i = 0; i < mu.support_size(); ++i) {
    const double f = phi(mu.support()[i]);
    if (f != 1.0) identity = false;
    total += mu.weights()[i] * f;
  }
  if (identity) return false;
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroMass, "bump function vanishes on the support");
  out.resize(mu.support_size());
  for (std::size_t i = 0; i < mu.support_size(); ++i) out[i] = mu.weights()[i] * phi(mu.support()[i]) / total;
  return true;
}

}  // namespace detail

/// Pumping map: reweights mu by phi and renormalizes. Identity when phi is 1
/// on the whole support.
inline FiniteMeasure pump(const FiniteMeasure& mu, const BumpFunction& phi) {
  std::vector<double> w;
  if (!detail::pumped_weights(mu, phi, w)) return mu;
  return FiniteMeasure::from_sorted(mu.support(), std::move(w));
}

/// Barycentric coordinate of v in pump(mu, phi), evaluated straight from the
/// closed form psi_v(mu) phi(v) / sum_y psi_y(mu) phi(y).
inline double pump_coordinate(const FiniteMeasure& mu, const BumpFunction& phi, Index v) {
  std::vector<double> w;
  if (!detail::pumped_weights(mu, phi, w)) return mu.weight(v);
  const auto it = std::lower_bound(mu.support().begin(), mu.support().end(), v);
  if (it == mu.support().end() || *it != v) return 0.0;
  return w[static_cast<std::size_t>(it - mu.support().begin())];
}

/// Linear homotopy (1 - t) mu + t pump(mu, phi).
inline FiniteMeasure pump_homotopy(const FiniteMeasure& mu, const BumpFunction& phi, double t) {
  return convex_combine(mu, pump(mu, phi), t);
}

struct InnerSet {
  std::size_t index;  // i
  PointSet set;       // V_i = {x in U : d(x, U^C) > 1/i}
};

/// Smallest i >= 1 such that every mu in A has mu(V_i) > p. V_i only changes
/// at the integers floor(1/d(x, U^C)) + 1, so those are the only candidates
/// scanned.
inline InnerSet shrink_to_inner(const FiniteMetricSpace& X, std::span<const FiniteMeasure> A, double p,
                                const PointSet& U) {
  if (!has_mcp(A, p, U)) throw Error(ErrorKind::NoMCP, "measure set does not concentrate on U");
  struct Entry {
    Index x;
    std::size_t first;  // smallest i with 1/i < d(x, U^C)
  };
  std::vector<Entry> entries;
  for (Index x : U) {
    const double d = distance_to_complement(X, U, x);
    if (!(d > 0.0)) continue;
    std::size_t i = 1;
    if (std::isfinite(d) && !(1.0 < d)) {
      const double guess = std::floor(1.0 / d) + 1.0;
      if (guess > 1e15) continue;
      i = static_cast<std::size_t>(guess);
      while (!(1.0 / static_cast<double>(i) < d)) ++i;
      while (i > 1 && 1.0 / static_cast<double>(i - 1) < d) --i;
    }
    entries.push_back({x, i});
  }
  std::vector<std::size_t> candidates;
  for (const auto& e : entries) candidates.push_back(e.first);
  candidates.push_back(1);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (std::size_t i : candidates) {
    std::vector<Index> members;
    for (const auto& e : entries)
      if (e.first <= i) members.push_back(e.x);
    PointSet V(std::move(members));
    if (std::all_of(A.begin(), A.end(), [&](const FiniteMeasure& mu) { return mu.mass(V) > p; })) return {i, V};
  }
  // Only reachable when mass sits on points at distance 0 from U^C.
  throw Error(ErrorKind::NoMCP, "mass concentrates on points with zero distance to the complement");
}

struct MetricComparison {
  double barycentric;  // d_m
  double wasserstein;  // d_W
  double bound;        // diam(supp mu u supp nu) * d_m / 2
  bool holds;
};

/// Compares the two topologies on one pair: d_W <= diam(supp mu u supp nu) * d_m / 2
/// whenever the supports meet.
inline MetricComparison compare_metrics(const FiniteMetricSpace& X, const FiniteMeasure& mu, const FiniteMeasure& nu) {
  MetricComparison c{};
  c.barycentric = barycentric_distance(mu, nu);
  c.wasserstein = wasserstein_distance(X, mu, nu);
  const double diam = X.diameter(mu.support_set().unite(nu.support_set()));
  c.bound = 0.5 * diam * c.barycentric;
  c.holds = c.wasserstein <= c.bound + 1e-9;
  return c;
}

}  // namespace vkit
