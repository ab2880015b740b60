#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vkit/complex.hpp"
#include "vkit/fk.hpp"
#include "vkit/measure.hpp"
#include "vkit/metric.hpp"
#include "vkit/persistence.hpp"
#include "vkit/random.hpp"
#include "vkit/straighten.hpp"
#include "vkit/thickening.hpp"
#include "vkit/transport.hpp"

namespace vkit::verify {

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string first_failure;

  explicit SuiteResult(std::string n) : name(std::move(n)) {}

  bool passed() const { return failures == 0; }

  void check(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

namespace detail {

inline std::size_t pick(random::Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace detail

/// Symmetry (exact), triangle inequality (1e-9) and coupling marginals (1e-10).
inline SuiteResult wasserstein_metric(random::Rng& rng, std::size_t trials) {
  SuiteResult r("wasserstein_metric");
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const auto X = random::space(rng, detail::pick(rng, 2, 10));
    const auto a = random::measure(rng, X.size(), 6), b = random::measure(rng, X.size(), 6),
               c = random::measure(rng, X.size(), 6);
    const auto ab = wasserstein(X, a, b), ba = wasserstein(X, b, a);
    const double bc = wasserstein_distance(X, b, c), ac = wasserstein_distance(X, a, c);
    r.check(ab.distance == ba.distance, "asymmetric at trial " + std::to_string(t));
    r.check(ac <= ab.distance + bc + 1e-9, "triangle inequality at trial " + std::to_string(t));
    r.check(ab.coupling.marginal_error(a, b) <= 1e-10, "marginals at trial " + std::to_string(t));
  }
  return r;
}

inline SuiteResult isometric_embedding(random::Rng& rng, std::size_t trials) {
  SuiteResult r("isometric_embedding");
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const auto X = random::space(rng, detail::pick(rng, 2, 10));
    for (Index i = 0; i < X.size(); ++i)
      for (Index j = 0; j < X.size(); ++j)
        r.check(std::abs(wasserstein_distance(X, dirac(i), dirac(j)) - X(i, j)) <= 1e-12,
                "d_W(delta_x, delta_y) != d(x, y) at trial " + std::to_string(t));
  }
  return r;
}

inline SuiteResult comparison_bound(random::Rng& rng, std::size_t trials) {
  SuiteResult r("comparison_bound");
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const auto X = random::space(rng, detail::pick(rng, 2, 10));
    const auto a = random::measure(rng, X.size(), 5);
    auto support = random::subset(rng, X.size(), detail::pick(rng, 1, 5));
    support.push_back(a.support()[detail::pick(rng, 0, a.support_size() - 1)]);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const auto b = random::measure_on(rng, support);
    r.check(compare_metrics(X, a, b).holds, "bound violated at trial " + std::to_string(t));
  }
  return r;
}

inline SuiteResult pump_formula(random::Rng& rng, std::size_t trials) {
  SuiteResult r("pump_formula");
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const auto X = random::space(rng, detail::pick(rng, 3, 10));
    const auto mu = random::measure(rng, X.size(), 6);
    const PointSet support(random::subset(rng, X.size(), detail::pick(rng, 1, X.size())));
    PointSet plateau(random::subset(rng, X.size(), X.size()));
    plateau = plateau.intersect(support);
    if (!plateau.empty() && plateau.size() > 1) plateau = PointSet({*plateau.begin()});
    BumpFunction phi;
    try {
      phi = build_bump(X, plateau, support);
    } catch (const Error&) {
      continue;
    }
    if (mu.mass(support) <= 0.0) continue;
    const auto pumped = pump(mu, phi);
    for (Index v = 0; v < X.size(); ++v)
      r.check(pump_coordinate(mu, phi, v) == pumped.weight(v), "closed form differs at trial " + std::to_string(t));
    for (Index x : pumped.support())
      r.check(mu.weight(x) > 0.0 && phi(x) > 0.0, "support grew at trial " + std::to_string(t));
    if (in_m_u(mu, plateau)) r.check(pumped == mu, "plateau not fixed at trial " + std::to_string(t));
  }
  return r;
}

/// mu(U_1 n ... n U_k) > 1 - N(1 - p) for mu in every thickened U_i, k <= N.
inline SuiteResult mass_bound(random::Rng& rng, std::size_t trials) {
  SuiteResult r("mass_bound");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = detail::pick(rng, 3, 10);
    const std::size_t N = detail::pick(rng, 1, 6);
    const double p = 1.0 - (1.0 / static_cast<double>(N)) * (0.05 + 0.9 * u(rng));
    const auto mu = random::measure(rng, n, n);
    std::vector<PointSet> labels;
    for (std::size_t k = 0; k < detail::pick(rng, 1, N); ++k) {
      // Greedily grow a set until it carries more than p of the mass.
      auto order = random::subset(rng, n, n);
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<Index> items;
      for (Index x : order) {
        if (PointSet(items).empty() || mu.mass(PointSet(items)) <= p) items.push_back(x);
      }
      labels.emplace_back(items);
    }
    if (!std::all_of(labels.begin(), labels.end(), [&](const PointSet& U) { return mu.mass(U) > p; })) continue;
    ++r.trials;
    PointSet meet = labels[0];
    for (const auto& U : labels) meet = meet.intersect(U);
    r.check(mu.mass(meet) > 1.0 - static_cast<double>(N) * (1.0 - p), "bound violated at trial " + std::to_string(t));
  }
  return r;
}

inline SuiteResult fk_certificates(random::Rng& rng, std::size_t trials) {
  SuiteResult r("fk_certificates");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 3; ++n)
    for (int p = 1; p <= 2; ++p) {
      const FKTriangulation tri(n, p);
      std::uint64_t count = 0;
      tri.for_each_simplex([&](std::uint64_t, const FKSimplex&) { ++count; });
      r.check(count == factorial(n) * static_cast<std::uint64_t>(std::pow(p, n)), "simplex count");
      for (std::uint64_t k = 0; k < tri.vertex_count(); ++k)
        r.check(tri.vertex_star_size(tri.vertex_at(k)) <= star_bound(n), "star bound");
      for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        std::vector<double> y(static_cast<std::size_t>(n));
        for (auto& c : y) c = u(rng);
        const auto loc = tri.locate(y);
        const auto vs = loc.simplex.vertices();
        for (std::size_t i = 0; i < y.size(); ++i) {
          double back = 0.0;
          for (std::size_t k = 0; k < vs.size(); ++k) back += loc.barycentric[k] * vs[k][i] / p;
          r.check(std::abs(back - y[i]) <= 1e-10, "locate round trip");
        }
        r.check(std::all_of(loc.barycentric.begin(), loc.barycentric.end(), [](double w) { return w >= 0.0; }),
                "negative barycentric coordinate");
      }
    }
  return r;
}

/// compute_diagram against the independent Betti oracle at every midpoint
/// between consecutive critical values.
inline SuiteResult persistence_oracle(random::Rng& rng, std::size_t trials) {
  SuiteResult r("persistence_oracle");
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const auto X = random::space(rng, detail::pick(rng, 1, 7));
    const auto K = build_vr(X, kInf, 2);
    const auto D = compute_diagram(K, 1);
    std::vector<double> crit;
    for (const auto& s : K.simplices()) crit.push_back(s.value);
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
    crit.push_back(crit.back() + 1.0);
    for (std::size_t k = 0; k + 1 < crit.size(); ++k) {
      const double mid = 0.5 * (crit[k] + crit[k + 1]);
      for (int dim = 0; dim <= 1; ++dim)
        r.check(D.alive_at(mid, dim) == betti_at(K, mid, dim), "diagram vs betti at trial " + std::to_string(t));
    }
  }
  return r;
}

/// A simplex of value exactly r never belongs to the strict sublevel at r.
inline SuiteResult open_strictness(random::Rng& rng, std::size_t trials) {
  SuiteResult r("open_strictness");
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const auto X = random::space(rng, detail::pick(rng, 2, 7));
    const Index i = 0, j = 1;
    const double d = X(i, j);
    r.check(!is_simplex(build_vr(X, d, 1), {i, j}), "VR edge present at its own diameter");
    const auto cech = build_cech(X, kInf, 1);
    const double value = *cech.value({i, j});
    r.check(!is_simplex(build_cech(X, value, 1), {i, j}), "Cech edge present at its own value");
    r.check(is_simplex(build_vr(X, std::nextafter(d, kInf), 1), {i, j}), "VR edge missing just above diameter");
  }
  return r;
}

inline SuiteResult prism_idempotence(random::Rng& rng, std::size_t trials) {
  SuiteResult r("prism_retract");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    std::vector<double> x(detail::pick(rng, 2, 5));
    double total = 0.0;
    for (auto& c : x) total += (c = u(rng));
    for (auto& c : x) c /= total;
    if (u(rng) < 0.3) x[0] = 0.0;
    total = 0.0;
    for (double c : x) total += c;
    for (auto& c : x) c /= total;
    const auto once = prism_retract(x, u(rng));
    const auto twice = prism_retract(once.x, once.t);
    double diff = std::abs(once.t - twice.t);
    for (std::size_t k = 0; k < x.size(); ++k) diff = std::max(diff, std::abs(once.x[k] - twice.x[k]));
    r.check(diff <= 1e-12, "not idempotent at trial " + std::to_string(t));
    const bool on_target = once.t == 0.0 || std::any_of(once.x.begin(), once.x.end(), [](double c) { return c == 0.0; });
    r.check(on_target, "image outside the target at trial " + std::to_string(t));
  }
  return r;
}

inline SuiteResult convex_combination(random::Rng& rng, std::size_t trials) {
  SuiteResult r("convex_combine");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const std::size_t n = detail::pick(rng, 2, 10);
    const auto mu = random::measure(rng, n, 6), nu = random::measure(rng, n, 6);
    const double a = u(rng), b = u(rng);
    const auto twice = convex_combine(convex_combine(mu, nu, a), nu, b);
    const double keep = (1.0 - a) * (1.0 - b);
    for (Index x = 0; x < n; ++x)
      r.check(std::abs(twice.weight(x) - (keep * mu.weight(x) + (1.0 - keep) * nu.weight(x))) <= 1e-12,
              "associativity at trial " + std::to_string(t));
  }
  return r;
}

/// Every suite, in a fixed order.
inline std::vector<SuiteResult> run_all(std::uint64_t seed, std::size_t trials) {
  using Suite = std::function<SuiteResult(random::Rng&, std::size_t)>;
  const std::vector<Suite> suites{wasserstein_metric, isometric_embedding, comparison_bound, pump_formula,
                                  mass_bound,         fk_certificates,     persistence_oracle, open_strictness,
                                  prism_idempotence,  convex_combination};
  std::vector<SuiteResult> out;
  for (std::size_t k = 0; k < suites.size(); ++k) {
    random::Rng rng(seed + k);
    out.push_back(suites[k](rng, trials));
  }
  return out;
}

}  // namespace vkit::verify
