#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vkit/error.hpp"

namespace vkit {

using Index = std::size_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sorted set of point indices. Small and cheap to copy; all set algebra is
/// done with the std:: sorted-range algorithms.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::initializer_list<Index> items) : PointSet(std::vector<Index>(items)) {}
  explicit PointSet(std::vector<Index> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  static PointSet all(std::size_t n) {
    PointSet s;
    s.items_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.items_[i] = i;
    return s;
  }

  bool contains(Index i) const { return std::binary_search(items_.begin(), items_.end(), i); }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<Index>& items() const { return items_; }

  bool includes(const PointSet& other) const {
    return std::includes(items_.begin(), items_.end(), other.items_.begin(), other.items_.end());
  }

  PointSet intersect(const PointSet& other) const {
    PointSet out;
    std::set_intersection(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                          std::back_inserter(out.items_));
    return out;
  }

  PointSet unite(const PointSet& other) const {
    PointSet out;
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out.items_));
    return out;
  }

  /// Complement relative to {0, ..., n-1}.
  PointSet complement(std::size_t n) const {
    PointSet out;
    std::size_t k = 0;
    for (Index i = 0; i < n; ++i) {
      if (k < items_.size() && items_[k] == i) {
        ++k;
      } else {
        out.items_.push_back(i);
      }
    }
    return out;
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Index> items_;
};

/// A finite (pseudo)metric space: a validated symmetric distance matrix with
/// optional Euclidean coordinates for each point.
class FiniteMetricSpace {
 public:
  std::size_t size() const { return n_; }
  double operator()(Index i, Index j) const { return dist_[i * n_ + j]; }
  double distance(Index i, Index j) const { return dist_[i * n_ + j]; }

  /// True when some pair of distinct points is at distance zero.
  bool is_pseudometric() const { return pseudometric_; }

  const std::vector<std::vector<double>>& coordinates() const { return coords_; }
  bool has_coordinates() const { return !coords_.empty(); }

  double diameter(const PointSet& s) const {
    double d = 0.0;
    for (auto i = s.begin(); i != s.end(); ++i)
      for (auto j = std::next(i); j != s.end(); ++j) d = std::max(d, distance(*i, *j));
    return d;
  }

  /// Distance between two sets, with the convention d(A, {}) = +inf.
  double set_distance(const PointSet& a, const PointSet& b) const {
    double d = kInf;
    for (Index i : a)
      for (Index j : b) d = std::min(d, distance(i, j));
    return d;
  }

  void check_index(Index i) const {
    if (i >= n_) throw Error(ErrorKind::InvalidIndex, "point index " + std::to_string(i) + " out of range", {i});
  }

 private:
  friend FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& dist);
  friend FiniteMetricSpace metric_from_points(const std::vector<std::vector<double>>& points);

  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<std::vector<double>> coords_;
  bool pseudometric_ = false;
};

namespace detail {

// Relative slack for the triangle inequality. Distances computed from
// coordinates of collinear points can overshoot the exact sum by one ulp.
inline constexpr double kTriangleSlack = 1e-12;

}  // namespace detail

/// Validates the metric axioms and builds a space. Throws Error with
/// kind NonSquare / NonFinite / NonzeroDiagonal / NegativeDistance /
/// NonSymmetric / TriangleViolation describing the first violated axiom.
/// For TriangleViolation the payload (i, j, k) means d(i,j) > d(i,k) + d(k,j).
inline FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& dist) {
  const std::size_t n = dist.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n)
      throw Error(ErrorKind::NonSquare, "row " + std::to_string(i) + " has " + std::to_string(dist[i].size()) +
                                            " entries, expected " + std::to_string(n),
                  {i});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(dist[i][j]))
        throw Error(ErrorKind::NonFinite, "entry (" + std::to_string(i) + "," + std::to_string(j) + ")", {i, j});
  for (std::size_t i = 0; i < n; ++i)
    if (dist[i][i] != 0.0)
      throw Error(ErrorKind::NonzeroDiagonal, "d(" + std::to_string(i) + "," + std::to_string(i) + ") != 0", {i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dist[i][j] < 0.0)
        throw Error(ErrorKind::NegativeDistance, "d(" + std::to_string(i) + "," + std::to_string(j) + ") < 0",
                    {i, j});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist[i][j] != dist[j][i])
        throw Error(ErrorKind::NonSymmetric, "d(" + std::to_string(i) + "," + std::to_string(j) + ") != d(" +
                                                 std::to_string(j) + "," + std::to_string(i) + ")",
                    {i, j});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double via = dist[i][k] + dist[k][j];
        if (dist[i][j] > via + detail::kTriangleSlack * std::max(1.0, via))
          throw Error(ErrorKind::TriangleViolation,
                      "d(" + std::to_string(i) + "," + std::to_string(j) + ") > d(" + std::to_string(i) + "," +
                          std::to_string(k) + ") + d(" + std::to_string(k) + "," + std::to_string(j) + ")",
                      {i, j, k});
      }

  FiniteMetricSpace space;
  space.n_ = n;
  space.dist_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      space.dist_[i * n + j] = dist[i][j];
      if (i != j && dist[i][j] == 0.0) space.pseudometric_ = true;
    }
  return space;
}

/// Euclidean metric on a point cloud. All rows must share one dimension.
inline FiniteMetricSpace metric_from_points(const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  const std::size_t d = n ? points[0].size() : 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != d)
      throw Error(ErrorKind::Parse, "point " + std::to_string(i) + " has dimension " +
                                        std::to_string(points[i].size()) + ", expected " + std::to_string(d),
                  {i});
    for (double c : points[i])
      if (!std::isfinite(c)) throw Error(ErrorKind::NonFinite, "coordinate of point " + std::to_string(i), {i});
  }
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = points[i][c] - points[j][c];
        s += diff * diff;
      }
      dist[i][j] = dist[j][i] = std::sqrt(s);
    }
  FiniteMetricSpace space = validate_metric(dist);
  space.coords_ = points;
  return space;
}

/// min over y not in U of d(x, y); +inf when U = X.
inline double distance_to_complement(const FiniteMetricSpace& X, const PointSet& U, Index x) {
  X.check_index(x);
  double d = kInf;
  for (Index y = 0; y < X.size(); ++y)
    if (!U.contains(y)) d = std::min(d, X(x, y));
  return d;
}

// ---------------------------------------------------------------------------
// Covers

struct DiameterCover {
  double r;
};
struct BallCover {
  double r;
};
struct ExplicitCover {
  std::vector<PointSet> elements;
};

using CoverElementId = std::size_t;

/// Identifier returned for the synthetic witness element of a DiameterCover.
inline constexpr CoverElementId kDiameterWitness = std::numeric_limits<CoverElementId>::max();

/// A uniformly bounded cover of a finite metric space. Diameter covers are
/// never enumerated; they only answer membership queries. Ball covers have
/// one element per centre z, with id z.
class Cover {
 public:
  using Kind = std::variant<DiameterCover, BallCover, ExplicitCover>;

  Cover(const FiniteMetricSpace& X, Kind kind) : space_(&X), kind_(std::move(kind)) {
    if (auto* ex = std::get_if<ExplicitCover>(&kind_)) {
      std::vector<bool> seen(X.size(), false);
      for (const auto& e : ex->elements)
        for (Index i : e) {
          X.check_index(i);
          seen[i] = true;
        }
      for (Index i = 0; i < X.size(); ++i)
        if (!seen[i]) throw Error(ErrorKind::UncoveredPoint, "point " + std::to_string(i) + " lies in no element", {i});
      bound_ = 0.0;
      for (const auto& e : ex->elements) bound_ = std::max(bound_, X.diameter(e));
    } else if (auto* dc = std::get_if<DiameterCover>(&kind_)) {
      if (!(dc->r > 0.0)) throw Error(ErrorKind::InvalidArgument, "diameter cover needs r > 0");
      bound_ = dc->r;
    } else {
      const double r = std::get<BallCover>(kind_).r;
      if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "ball cover needs r > 0");
      bound_ = std::isfinite(r) ? 0.0 : kInf;
      if (std::isfinite(r))
        for (Index z = 0; z < X.size(); ++z) bound_ = std::max(bound_, X.diameter(ball(z, r)));
    }
  }

  static Cover diameter(const FiniteMetricSpace& X, double r) { return Cover(X, DiameterCover{r}); }
  static Cover balls(const FiniteMetricSpace& X, double r) { return Cover(X, BallCover{r}); }
  static Cover explicit_sets(const FiniteMetricSpace& X, std::vector<PointSet> elements) {
    return Cover(X, ExplicitCover{std::move(elements)});
  }

  const FiniteMetricSpace& space() const { return *space_; }
  const Kind& kind() const { return kind_; }

  /// Supremum of element diameters (D); +inf when the parameter is infinite.
  double bound() const { return bound_; }

  bool enumerable() const { return !std::holds_alternative<DiameterCover>(kind_); }

  std::size_t element_count() const {
    if (auto* ex = std::get_if<ExplicitCover>(&kind_)) return ex->elements.size();
    if (std::holds_alternative<BallCover>(kind_)) return space_->size();
    throw Error(ErrorKind::UnsupportedCover, "diameter cover elements are not enumerable");
  }

  PointSet element(CoverElementId id) const {
    if (auto* ex = std::get_if<ExplicitCover>(&kind_)) {
      if (id >= ex->elements.size()) throw Error(ErrorKind::InvalidIndex, "cover element id", {id});
      return ex->elements[id];
    }
    if (auto* bc = std::get_if<BallCover>(&kind_)) {
      space_->check_index(id);
      return ball(id, bc->r);
    }
    throw Error(ErrorKind::UnsupportedCover, "diameter cover elements are not enumerable");
  }

 private:
  PointSet ball(Index z, double r) const {
    std::vector<Index> items;
    for (Index x = 0; x < space_->size(); ++x)
      if (space_->distance(z, x) < r) items.push_back(x);
    return PointSet(std::move(items));
  }

  const FiniteMetricSpace* space_;
  Kind kind_;
  double bound_ = 0.0;
};

/// All cover elements containing S. Membership is strict for the metric
/// covers: diam(S) < r for DiameterCover, max_{x in S} d(z, x) < r for the
/// ball centred at z.
inline std::vector<CoverElementId> cover_elements_containing(const Cover& cov, const PointSet& S) {
  if (S.empty()) throw Error(ErrorKind::EmptySet, "query set is empty");
  const auto& X = cov.space();
  for (Index i : S) X.check_index(i);
  std::vector<CoverElementId> out;
  if (auto* dc = std::get_if<DiameterCover>(&cov.kind())) {
    if (X.diameter(S) < dc->r) out.push_back(kDiameterWitness);
  } else if (auto* bc = std::get_if<BallCover>(&cov.kind())) {
    for (Index z = 0; z < X.size(); ++z) {
      double reach = 0.0;
      for (Index x : S) reach = std::max(reach, X(z, x));
      if (reach < bc->r) out.push_back(z);
    }
  } else {
    const auto& elements = std::get<ExplicitCover>(cov.kind()).elements;
    for (CoverElementId id = 0; id < elements.size(); ++id)
      if (elements[id].includes(S)) out.push_back(id);
  }
  return out;
}

}  // namespace vkit
