#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vkit/error.hpp"
#include "vkit/fk.hpp"
#include "vkit/measure.hpp"
#include "vkit/metric.hpp"
#include "vkit/parallel.hpp"
#include "vkit/thickening.hpp"

namespace vkit {

/// A map from the cube [0,1]^n into finitely supported measures, given by
/// pointwise evaluation. Must be safe to call concurrently.
using SourceMap = std::function<FiniteMeasure(std::span<const double>)>;

/// Mass threshold strictly inside (1 - 1/alpha(n), 1): 1 - 1/(2 alpha(n)).
inline double choose_p(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  return 1.0 - 1.0 / (2.0 * static_cast<double>(star_bound(n)));
}

inline std::vector<PointSet> enumerate_elements(const Cover& cov) {
  if (!cov.enumerable())
    throw Error(ErrorKind::UnsupportedCover, "straightening needs a cover with enumerable elements (ball or explicit)");
  std::vector<PointSet> out;
  for (CoverElementId id = 0; id < cov.element_count(); ++id) out.push_back(cov.element(id));
  return out;
}

/// Samples of a source map on the lattice of resolution p * depth: the FK
/// vertices at resolution p plus the barycentric lattice of depth `depth`
/// inside every n-simplex.
class SampledMap {
 public:
  SampledMap(FKTriangulation tri, int depth, std::vector<FiniteMeasure> samples)
      : tri_(tri), depth_(depth), grid_(tri.dimension(), tri.resolution() * depth), samples_(std::move(samples)) {
    if (samples_.size() != grid_.vertex_count())
      throw Error(ErrorKind::InvalidArgument, "sample count does not match the grid");
  }

  const FKTriangulation& triangulation() const { return tri_; }
  int depth() const { return depth_; }
  const FKTriangulation& grid() const { return grid_; }
  const std::vector<FiniteMeasure>& samples() const { return samples_; }

  const FiniteMeasure& sample(const Lattice& grid_point) const { return samples_[grid_.vertex_index(grid_point)]; }

  const FiniteMeasure& vertex_value(const Lattice& v) const {
    Lattice g = v;
    for (int& c : g) c *= depth_;
    return sample(g);
  }

  std::vector<FiniteMeasure> vertex_values() const {
    std::vector<FiniteMeasure> out(tri_.vertex_count());
    for (std::uint64_t k = 0; k < out.size(); ++k) out[k] = vertex_value(tri_.vertex_at(k));
    return out;
  }

 private:
  FKTriangulation tri_;
  int depth_;
  FKTriangulation grid_;
  std::vector<FiniteMeasure> samples_;
};

inline SampledMap sample_map(const SourceMap& f, int n, int p, int depth) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "sample depth must be >= 1");
  const FKTriangulation grid(n, p * depth);
  std::vector<FiniteMeasure> samples(grid.vertex_count());
  parallel_for(samples.size(), [&](std::size_t k) { samples[k] = f(grid.point(grid.vertex_at(k))); });
  return SampledMap(FKTriangulation(n, p), depth, std::move(samples));
}

/// Cover element per n-simplex, with the smallest sampled mass it receives.
struct Labeling {
  std::vector<CoverElementId> labels;
  std::vector<double> min_mass;

  CoverElementId operator[](std::uint64_t simplex) const { return labels[simplex]; }
};

/// Labels l(S_v) of the n-simplices containing v, sorted and distinct.
inline std::vector<CoverElementId> star_labels(const FKTriangulation& tri, const Labeling& lab, const Lattice& v) {
  std::vector<CoverElementId> out;
  for (const auto& s : tri.star(v)) out.push_back(lab[tri.simplex_index(s)]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// U_v: intersection of the star labels of v.
inline PointSet star_intersection(const FKTriangulation& tri, const Labeling& lab,
                                  const std::vector<PointSet>& elements, const Lattice& v) {
  const auto labels = star_labels(tri, lab, v);
  PointSet U = elements.at(labels.front());
  for (std::size_t k = 1; k < labels.size(); ++k) U = U.intersect(elements.at(labels[k]));
  return U;
}

/// Labels every n-simplex with a cover element U such that every sample of
/// the simplex has mu(U) > p. Elements that contain the full support of all
/// samples are preferred; ties go to the smallest id. Throws NoLabel with
/// the first unlabeled simplex.
inline Labeling label_simplices(const SampledMap& map, const std::vector<PointSet>& elements, double p) {
  const auto& grid = map.grid();
  const int n = grid.dimension();
  MembershipGrid contains(n, grid.resolution(), elements.size());
  MembershipGrid heavy(n, grid.resolution(), elements.size());
  for (std::uint64_t k = 0; k < grid.vertex_count(); ++k) {
    const auto& mu = map.samples()[k];
    for (std::size_t e = 0; e < elements.size(); ++e) {
      contains.set(k, e, in_m_u(mu, elements[e]));
      heavy.set(k, e, mu.mass(elements[e]) > p);
    }
  }
  const auto strict = common_elements(contains, map.triangulation().resolution());
  const auto loose = common_elements(heavy, map.triangulation().resolution());
  Labeling lab;
  lab.labels.resize(strict.size());
  lab.min_mass.resize(strict.size());
  const auto& tri = map.triangulation();
  for (std::uint64_t s = 0; s < strict.size(); ++s) {
    if (strict[s]) {
      lab.labels[s] = *strict[s];
    } else if (loose[s]) {
      lab.labels[s] = *loose[s];
    } else {
      throw Error(ErrorKind::NoLabel, "simplex " + std::to_string(s) + " lies in no thickened cover element",
                  {static_cast<std::size_t>(s)});
    }
    double least = 1.0;
    for (const auto& g : simplex_samples(tri.simplex_at(s), map.depth()))
      least = std::min(least, map.sample(g).mass(elements[lab.labels[s]]));
    lab.min_mass[s] = least;
  }
  return lab;
}

/// mu(intersection of labels), checked against 1 - N(1 - p). N defaults to the
/// number of labels.
inline double intersection_mass_bound(const FiniteMeasure& mu, std::span<const PointSet> labels, double p,
                                      std::size_t N = 0) {
  if (labels.empty()) throw Error(ErrorKind::InvalidArgument, "no labels given");
  if (N == 0) N = labels.size();
  if (N < labels.size()) throw Error(ErrorKind::InvalidArgument, "N is smaller than the number of labels");
  PointSet U = labels[0];
  for (std::size_t k = 1; k < labels.size(); ++k) U = U.intersect(labels[k]);
  const double mass = mu.mass(U);
  const double bound = 1.0 - static_cast<double>(N) * (1.0 - p);
  if (!(mass > bound))
    throw Error(ErrorKind::BoundViolated, "intersection mass " + std::to_string(mass) + " does not exceed " +
                                              std::to_string(bound));
  return mass;
}

inline constexpr std::array<double, 5> kDefaultTrackTimes{0.0, 0.25, 0.5, 0.75, 1.0};

struct VertexPump {
  FiniteMeasure value;
  std::vector<FiniteMeasure> track;
  std::vector<double> times;
  PointSet target;           // U_v
  double intersection_mass;  // mu_v(U_v)
  double bound;              // 1 - N (1 - p)
  double p_prime;            // min over the track and the star labels of mu_t(U)
  std::size_t inner_index;   // i from the inner shrink; 0 when unchanged
  bool unchanged;
};

/// Pumps the value at vertex v into U_v = intersection of l(S_v): the inner
/// set V' of U_v is found by shrink_to_inner at threshold q = 1 - N(1 - p),
/// a bump with zero set V'^C is built, and the pumped measure together with
/// the linear homotopy track is returned. Measures already supported in U_v
/// are returned unchanged.
inline VertexPump pump_vertex(const FiniteMetricSpace& X, const SampledMap& map, const Labeling& lab,
                              const std::vector<PointSet>& elements, const Lattice& v, double p,
                              std::span<const double> times = kDefaultTrackTimes) {
  const auto& tri = map.triangulation();
  const auto label_ids = star_labels(tri, lab, v);
  std::vector<PointSet> labels;
  for (auto id : label_ids) labels.push_back(elements.at(id));
  const FiniteMeasure& mu = map.vertex_value(v);

  VertexPump out{mu, {}, std::vector<double>(times.begin(), times.end()), labels[0], 0.0, 0.0, 1.0, 0, true};
  for (std::size_t k = 1; k < labels.size(); ++k) out.target = out.target.intersect(labels[k]);
  out.intersection_mass = mu.mass(out.target);
  out.bound = 1.0 - static_cast<double>(labels.size()) * (1.0 - p);
  if (!(out.intersection_mass > 0.0))
    throw Error(ErrorKind::ZeroMass, "vertex measure has no mass on the star intersection",
                {static_cast<std::size_t>(tri.vertex_index(v))});

  std::optional<BumpFunction> phi;
  if (!in_m_u(mu, out.target)) {
    const double q = (out.bound > 0.0 && out.bound < out.intersection_mass) ? out.bound : out.intersection_mass / 2.0;
    const std::array<FiniteMeasure, 1> A{mu};
    const auto inner = shrink_to_inner(X, A, q, out.target);
    phi = build_bump(X, PointSet{}, inner.set);
    out.value = pump(mu, *phi);
    out.inner_index = inner.index;
    out.unchanged = false;
  }
  for (double t : times) {
    FiniteMeasure mt = phi ? pump_homotopy(mu, *phi, t) : mu;
    for (const auto& U : labels) out.p_prime = std::min(out.p_prime, mt.mass(U));
    out.track.push_back(std::move(mt));
  }
  return out;
}

/// Piecewise-linear map on an FK triangulation: the value at sum x_i v_i is
/// sum x_i value(v_i).
class SimplexwiseAffineMap {
 public:
  SimplexwiseAffineMap(FKTriangulation tri, std::vector<FiniteMeasure> vertex_values)
      : tri_(tri), values_(std::move(vertex_values)) {
    if (values_.size() != tri_.vertex_count())
      throw Error(ErrorKind::InvalidArgument, "one value per triangulation vertex is required");
  }

  const FKTriangulation& triangulation() const { return tri_; }
  const std::vector<FiniteMeasure>& vertex_values() const { return values_; }
  const FiniteMeasure& vertex_value(const Lattice& v) const { return values_[tri_.vertex_index(v)]; }

  FiniteMeasure evaluate_in(const FKSimplex& s, std::span<const double> barycentric) const {
    std::vector<FiniteMeasure> corner;
    for (const auto& v : s.vertices()) corner.push_back(vertex_value(v));
    return mix(corner, barycentric);
  }

  FiniteMeasure evaluate(std::span<const double> y) const {
    const auto loc = tri_.locate(y);
    return evaluate_in(loc.simplex, loc.barycentric);
  }

  SourceMap as_source() const {
    return [self = *this](std::span<const double> y) { return self.evaluate(y); };
  }

 private:
  FKTriangulation tri_;
  std::vector<FiniteMeasure> values_;
};

/// Union of the supports of the vertex values of one n-simplex.
inline PointSet simplex_support(const FKTriangulation& tri, const std::vector<FiniteMeasure>& values,
                                const FKSimplex& s) {
  PointSet out;
  for (const auto& v : s.vertices()) out = out.unite(values[tri.vertex_index(v)].support_set());
  return out;
}

/// Simplexwise linearization of the vertex values. Every n-simplex must have
/// the union of its vertex supports inside its label (hence a simplex of the
/// Vietoris complex); otherwise NotSubordinate is thrown with the simplex
/// index followed by the offending points.
inline SimplexwiseAffineMap linearize(const FKTriangulation& tri, std::vector<FiniteMeasure> values,
                                      const Labeling& lab, const std::vector<PointSet>& elements) {
  for (std::uint64_t k = 0; k < tri.simplex_count(); ++k) {
    const auto support = simplex_support(tri, values, tri.simplex_at(k));
    const auto& U = elements.at(lab[k]);
    if (!U.includes(support)) {
      std::vector<std::size_t> payload{static_cast<std::size_t>(k)};
      for (Index x : support)
        if (!U.contains(x)) payload.push_back(x);
      throw Error(ErrorKind::NotSubordinate, "simplex " + std::to_string(k) + " is not subordinate to its label",
                  payload);
    }
  }
  return SimplexwiseAffineMap(tri, std::move(values));
}

// ---------------------------------------------------------------------------
// Certification log

struct CheckRecord {
  std::string stage;
  std::uint64_t id;
  double quantity;
  double threshold;
  bool pass;
};

class CertificationLog {
 public:
  void add(std::string stage, std::uint64_t id, double quantity, double threshold, bool pass) {
    records_.push_back({std::move(stage), id, quantity, threshold, pass});
  }

  const std::vector<CheckRecord>& records() const { return records_; }
  std::size_t passed() const {
    return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](auto& r) { return r.pass; }));
  }
  std::size_t failed() const { return records_.size() - passed(); }

  const CheckRecord* first_failure() const {
    for (const auto& r : records_)
      if (!r.pass) return &r;
    return nullptr;
  }

  std::vector<CheckRecord> stage(const std::string& name) const {
    std::vector<CheckRecord> out;
    for (const auto& r : records_)
      if (r.stage == name) out.push_back(r);
    return out;
  }

  /// JSON lines, one record per check.
  void write_jsonl(std::ostream& out) const {
    for (const auto& r : records_) {
      nlohmann::ordered_json j;
      j["stage"] = r.stage;
      j["id"] = r.id;
      j["quantity"] = r.quantity;
      j["threshold"] = r.threshold;
      j["pass"] = r.pass;
      out << j.dump() << '\n';
    }
  }

 private:
  std::vector<CheckRecord> records_;
};

// ---------------------------------------------------------------------------
// Pipeline

struct StraightenOptions {
  int depth = 3;                     // barycentric sample depth per simplex
  int p_max = 1 << 10;               // coarsest-first search p = 1, 2, 4, ..., p_max
  std::optional<int> resolution;     // fixed resolution, skipping the search
  std::optional<double> p_mass;      // defaults to choose_p(n)
  std::uint64_t sample_budget = 4'000'000;  // grid points per tested resolution
  std::vector<double> times{kDefaultTrackTimes.begin(), kDefaultTrackTimes.end()};
};

struct StraightenResult {
  bool ok = false;
  std::string failed_stage;
  std::string message;
  double p_mass = 0.0;
  int resolution = 0;
  std::optional<SampledMap> sampled;
  std::optional<Labeling> labeling;
  std::vector<VertexPump> pumps;
  std::optional<SimplexwiseAffineMap> map;
  CertificationLog log;
};

/// choose_p -> resolution search (sampled Lebesgue estimate) -> FK
/// triangulation -> labels -> vertex pumps -> linearization, with every
/// membership check recorded in the log. Stage failures are reported in the
/// result rather than thrown.
inline StraightenResult straighten(const FiniteMetricSpace& X, const Cover& cov, const SourceMap& f, int n,
                                   const StraightenOptions& opt = {}) {
  StraightenResult res;
  auto fail = [&](std::string stage, std::string message) {
    res.ok = false;
    res.failed_stage = std::move(stage);
    res.message = std::move(message);
    return res;
  };

  res.p_mass = opt.p_mass.value_or(choose_p(n));
  const double p = res.p_mass;
  const double lower = 1.0 - 1.0 / static_cast<double>(star_bound(n));
  res.log.add("choose_p", 0, p, lower, p > lower && p < 1.0);
  if (!(p > lower && p < 1.0)) return fail("choose_p", "mass threshold outside (1 - 1/alpha(n), 1)");

  std::vector<PointSet> elements;
  try {
    elements = enumerate_elements(cov);
  } catch (const Error& e) {
    return fail("cover", e.what());
  }

  // Resolution search, coarsest first.
  std::vector<int> candidates;
  if (opt.resolution) {
    candidates.push_back(*opt.resolution);
  } else {
    for (int q = 1; q <= opt.p_max; q *= 2) candidates.push_back(q);
  }
  std::string last_error = "no resolution tested";
  for (int q : candidates) {
    double points = 1.0;
    for (int i = 0; i < n; ++i) points *= static_cast<double>(q * opt.depth + 1);
    if (points > static_cast<double>(opt.sample_budget)) {
      last_error += " (sample budget reached at resolution " + std::to_string(q) + ")";
      break;
    }
    try {
      auto sampled = sample_map(f, n, q, opt.depth);
      auto lab = label_simplices(sampled, elements, p);
      res.sampled.emplace(std::move(sampled));
      res.labeling.emplace(std::move(lab));
      res.resolution = q;
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoLabel) return fail("sample", e.what());
      last_error = e.what();
    }
  }
  if (!res.labeling) {
    res.log.add("lebesgue", 0, 0.0, 0.0, false);
    return fail("label", last_error);
  }
  const auto& tri = res.sampled->triangulation();
  const auto& lab = *res.labeling;
  res.log.add("lebesgue", static_cast<std::uint64_t>(res.resolution), tri.simplex_diameter(), 0.0, true);
  for (std::uint64_t s = 0; s < lab.labels.size(); ++s) res.log.add("label", s, lab.min_mass[s], p, lab.min_mass[s] > p);

  // 0-skeleton pumps.
  const std::uint64_t vertex_count = tri.vertex_count();
  res.pumps.resize(vertex_count, VertexPump{FiniteMeasure(), {}, {}, {}, 0, 0, 0, 0, true});
  try {
    parallel_for(vertex_count, [&](std::size_t k) {
      res.pumps[k] = pump_vertex(X, *res.sampled, lab, elements, tri.vertex_at(k), p, opt.times);
    });
  } catch (const Error& e) {
    return fail("pump", e.what());
  }
  for (std::uint64_t k = 0; k < vertex_count; ++k) {
    const auto& vp = res.pumps[k];
    res.log.add("mass_bound", k, vp.intersection_mass, vp.bound, vp.intersection_mass > vp.bound);
  }
  for (std::uint64_t k = 0; k < vertex_count; ++k) {
    const auto& vp = res.pumps[k];
    res.log.add("pump", k, vp.value.mass(vp.target), 1.0, in_m_u(vp.value, vp.target));
  }
  for (std::uint64_t k = 0; k < vertex_count; ++k) {
    const auto& vp = res.pumps[k];
    bool pass = vp.p_prime > p;
    for (const auto& mt : vp.track) pass = pass && res.sampled->vertex_value(tri.vertex_at(k)).support_set().includes(mt.support_set());
    res.log.add("track_vertex", k, vp.p_prime, p, pass);
  }
  // Boundary vertices that needed no change must come out untouched.
  for (std::uint64_t k = 0; k < vertex_count; ++k) {
    const auto v = tri.vertex_at(k);
    const auto& original = res.sampled->vertex_value(v);
    if (!tri.on_boundary(v) || !in_m_u(original, res.pumps[k].target)) continue;
    const double moved = barycentric_distance(original, res.pumps[k].value);
    res.log.add("boundary_fixed", k, moved, 0.0, original == res.pumps[k].value);
  }

  std::vector<FiniteMeasure> values;
  values.reserve(vertex_count);
  for (const auto& vp : res.pumps) values.push_back(vp.value);
  try {
    res.map.emplace(linearize(tri, values, lab, elements));
  } catch (const Error& e) {
    return fail("certificate", e.what());
  }
  for (std::uint64_t s = 0; s < tri.simplex_count(); ++s) {
    const auto support = simplex_support(tri, values, tri.simplex_at(s));
    const auto& U = elements[lab[s]];
    const auto outside = support.size() - support.intersect(U).size();
    res.log.add("certificate", s, static_cast<double>(outside), 0.0, outside == 0);
  }

  // Higher skeleta at sample scale: the straight-line homotopy between the
  // source samples of each n-simplex and the linearized map must stay inside
  // the thickened label.
  const int depth = res.sampled->depth();
  for (std::uint64_t s = 0; s < tri.simplex_count(); ++s) {
    const auto simplex = tri.simplex_at(s);
    const auto& U = elements[lab[s]];
    double least = 1.0;
    for (const auto& g : simplex_samples(simplex, depth)) {
      // Barycentric weights of grid point g inside the simplex.
      std::vector<double> w(static_cast<std::size_t>(n) + 1);
      std::vector<double> u(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        u[static_cast<std::size_t>(i)] =
            static_cast<double>(g[static_cast<std::size_t>(i)] - simplex.base[static_cast<std::size_t>(i)] * depth) / depth;
      w[0] = 1.0 - u[static_cast<std::size_t>(simplex.perm[0])];
      for (int k = 1; k < n; ++k)
        w[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(simplex.perm[k - 1])] - u[static_cast<std::size_t>(simplex.perm[k])];
      w[static_cast<std::size_t>(n)] = u[static_cast<std::size_t>(simplex.perm[n - 1])];
      const auto straight = res.map->evaluate_in(simplex, w);
      const auto& source = res.sampled->sample(g);
      for (double t : opt.times) least = std::min(least, convex_combine(source, straight, t).mass(U));
    }
    res.log.add("track_simplex", s, least, p, least > p);
  }

  if (const auto* bad = res.log.first_failure()) return fail(bad->stage, "check failed for id " + std::to_string(bad->id));
  res.ok = true;
  return res;
}

// ---------------------------------------------------------------------------
// Prism retraction

struct PrismPoint {
  std::vector<double> x;  // barycentric coordinates in the simplex
  double t;
};

/// Retraction of simplex x [0,1] onto simplex x {0} u boundary x [0,1] by
/// central projection from (barycenter, 2). Points of the target are fixed
/// and the barycentric support never grows.
inline PrismPoint prism_retract(std::span<const double> x, double t) {
  if (x.empty()) throw Error(ErrorKind::InvalidArgument, "empty barycentric point");
  double total = 0.0;
  for (double c : x) {
    if (!(c >= 0.0)) throw Error(ErrorKind::OutOfDomain, "negative barycentric coordinate");
    total += c;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorKind::OutOfDomain, "barycentric coordinates must sum to 1");
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::OutOfDomain, "time outside [0,1]");

  const double b = 1.0 / static_cast<double>(x.size());
  // Ray q(s) = P + s ((x, t) - P), s >= 1, P = (barycenter, 2). The first
  // face hit is either the bottom (s = 2 / (2 - t)) or a side face where a
  // barycentric coordinate reaches 0.
  const bool on_side = std::any_of(x.begin(), x.end(), [](double c) { return c == 0.0; });
  PrismPoint out{std::vector<double>(x.begin(), x.end()), t};
  if (t == 0.0 || on_side) return out;
  double s = 2.0 / (2.0 - t);
  bool bottom = true;
  for (double c : x)
    if (c < b && b / (b - c) <= s) {
      s = b / (b - c);
      bottom = false;
    }
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.x[i] = (!bottom && x[i] < b && b / (b - x[i]) == s) ? 0.0 : std::max(0.0, b + s * (x[i] - b));
  }
  out.t = bottom ? 0.0 : std::clamp(2.0 + s * (t - 2.0), 0.0, 1.0);
  return out;
}

}  // namespace vkit
