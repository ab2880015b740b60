#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "vkit/error.hpp"
#include "vkit/metric.hpp"

namespace vkit {

using Simplex = std::vector<Index>;  // sorted vertex indices

struct FilteredSimplex {
  Simplex vertices;
  double value;

  int dimension() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Abstract simplicial complex with an entry value per simplex. A simplex
/// belongs to the strict sublevel at r iff its value is < r. Simplices are
/// kept in lexicographic order of their vertex arrays.
class FilteredComplex {
 public:
  FilteredComplex() = default;

  /// Builds from an arbitrary list; sorts vertex arrays, drops duplicates
  /// (keeping the smallest value) and orders lexicographically. Does not
  /// close under faces; see is_face_closed().
  FilteredComplex(std::size_t vertex_count, int k_max, std::vector<FilteredSimplex> simplices)
      : vertex_count_(vertex_count), k_max_(k_max) {
    std::map<Simplex, double> unique;
    for (auto& s : simplices) {
      std::sort(s.vertices.begin(), s.vertices.end());
      auto [it, inserted] = unique.emplace(s.vertices, s.value);
      if (!inserted) it->second = std::min(it->second, s.value);
    }
    simplices_.reserve(unique.size());
    for (auto& [v, value] : unique) simplices_.push_back({v, value});
  }

  std::size_t vertex_count() const { return vertex_count_; }
  int k_max() const { return k_max_; }
  std::size_t size() const { return simplices_.size(); }
  bool empty() const { return simplices_.empty(); }
  const std::vector<FilteredSimplex>& simplices() const { return simplices_; }

  std::size_t count(int dim) const {
    return static_cast<std::size_t>(std::count_if(simplices_.begin(), simplices_.end(),
                                                  [dim](const auto& s) { return s.dimension() == dim; }));
  }

  int dimension() const {
    int d = -1;
    for (const auto& s : simplices_) d = std::max(d, s.dimension());
    return d;
  }

  /// Position of S in simplices(), or size() if absent.
  std::size_t find(const Simplex& S) const {
    auto it = std::lower_bound(simplices_.begin(), simplices_.end(), S,
                               [](const FilteredSimplex& a, const Simplex& b) { return a.vertices < b; });
    if (it == simplices_.end() || it->vertices != S) return simplices_.size();
    return static_cast<std::size_t>(it - simplices_.begin());
  }

  std::optional<double> value(const Simplex& S) const {
    const auto pos = find(S);
    if (pos == simplices_.size()) return std::nullopt;
    return simplices_[pos].value;
  }

  /// Every codimension-1 face present with value <= the coface's value.
  bool is_face_closed() const {
    for (const auto& s : simplices_) {
      if (s.vertices.size() < 2) continue;
      for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
        Simplex face;
        for (std::size_t k = 0; k < s.vertices.size(); ++k)
          if (k != drop) face.push_back(s.vertices[k]);
        auto v = value(face);
        if (!v || *v > s.value) return false;
      }
    }
    return true;
  }

  /// Text export, one simplex per line: "v0 v1 ... vk ; value".
  void write(std::ostream& out) const {
    auto old_precision = out.precision(17);
    for (const auto& s : simplices_) {
      for (std::size_t k = 0; k < s.vertices.size(); ++k) out << (k ? " " : "") << s.vertices[k];
      out << " ; " << s.value << '\n';
    }
    out.precision(old_precision);
  }

 private:
  std::size_t vertex_count_ = 0;
  int k_max_ = 0;
  std::vector<FilteredSimplex> simplices_;
};

/// Membership test; the empty set is a simplex of every complex.
inline bool is_simplex(const FilteredComplex& K, Simplex S) {
  if (S.empty()) return true;
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  return K.find(S) != K.size();
}

namespace detail {

// Depth-first extension in increasing vertex order. `admit(sigma, v, value)`
// decides whether sigma + {v} is a simplex and sets its value; every simplex
// is reached through its prefixes, which are faces, so this enumerates any
// face-closed family exactly once.
template <class Admit>
void extend_simplices(std::size_t n, int k_max, Simplex& sigma, Admit& admit, std::vector<FilteredSimplex>& out) {
  if (static_cast<int>(sigma.size()) > k_max) return;
  const Index start = sigma.empty() ? 0 : sigma.back() + 1;
  for (Index v = start; v < n; ++v) {
    double value = 0.0;
    if (!admit(sigma, v, value)) continue;
    sigma.push_back(v);
    out.push_back({sigma, value});
    extend_simplices(n, k_max, sigma, admit, out);
    sigma.pop_back();
  }
}

inline void check_k_max(int k_max) {
  if (k_max < 0) throw Error(ErrorKind::InvalidArgument, "k_max must be >= 0");
}

}  // namespace detail

/// Open Vietoris-Rips complex: simplices of at most k_max + 1 vertices with
/// diameter < r, valued by their diameter. r may be +inf for the full
/// k_max-skeleton filtration.
inline FilteredComplex build_vr(const FiniteMetricSpace& X, double r, int k_max) {
  detail::check_k_max(k_max);
  std::vector<FilteredSimplex> out;
  if (r > 0.0) {
    // The value of sigma + v is max(diam sigma, max_u d(u, v)); the prefix
    // diameters are tracked per depth.
    Simplex sigma;
    struct Frame {
      const FiniteMetricSpace& X;
      double r;
      std::vector<double> diam;
      bool operator()(const Simplex& s, Index v, double& value) {
        double d = s.empty() ? 0.0 : diam[s.size() - 1];
        for (Index u : s) {
          d = std::max(d, X(u, v));
          if (!(d < r)) return false;
        }
        value = d;
        diam.resize(s.size() + 1);
        diam[s.size()] = d;
        return true;
      }
    } frame{X, r, {}};
    detail::extend_simplices(X.size(), k_max, sigma, frame, out);
  }
  return FilteredComplex(X.size(), k_max, std::move(out));
}

/// Intrinsic Cech complex: sigma is included iff some z in X has
/// max_{x in sigma} d(z, x) < r; the value is min_z max_x d(z, x).
inline FilteredComplex build_cech(const FiniteMetricSpace& X, double r, int k_max) {
  detail::check_k_max(k_max);
  std::vector<FilteredSimplex> out;
  if (r > 0.0) {
    // reach[z] of the current prefix, per depth.
    std::vector<std::vector<double>> reach;
    auto admit = [&](const Simplex& sigma, Index v, double& value) {
      const std::size_t depth = sigma.size();
      reach.resize(depth + 1);
      auto& cur = reach[depth];
      cur.assign(X.size(), 0.0);
      double best = kInf;
      for (Index z = 0; z < X.size(); ++z) {
        const double prev = depth ? reach[depth - 1][z] : 0.0;
        cur[z] = std::max(prev, X(z, v));
        best = std::min(best, cur[z]);
      }
      if (!(best < r)) return false;
      value = best;
      return true;
    };
    Simplex sigma;
    detail::extend_simplices(X.size(), k_max, sigma, admit, out);
  }
  return FilteredComplex(X.size(), k_max, std::move(out));
}

/// Vietoris complex of a cover: sigma is included iff it lies in some cover
/// element. All values are 0.
inline FilteredComplex build_vietoris(const FiniteMetricSpace& X, const Cover& cov, int k_max) {
  detail::check_k_max(k_max);
  if (!std::isfinite(cov.bound())) throw Error(ErrorKind::UnboundedCover, "cover has no finite diameter bound");
  std::vector<FilteredSimplex> out;
  if (auto* dc = std::get_if<DiameterCover>(&cov.kind())) {
    const auto vr = build_vr(X, dc->r, k_max);
    for (const auto& s : vr.simplices()) out.push_back({s.vertices, 0.0});
  } else {
    std::vector<PointSet> elements;
    for (CoverElementId id = 0; id < cov.element_count(); ++id) elements.push_back(cov.element(id));
    // Candidate elements still containing the prefix, per depth.
    std::vector<std::vector<std::size_t>> alive;
    auto admit = [&](const Simplex& sigma, Index v, double& value) {
      const std::size_t depth = sigma.size();
      alive.resize(depth + 1);
      auto& cur = alive[depth];
      cur.clear();
      if (depth == 0) {
        for (std::size_t e = 0; e < elements.size(); ++e)
          if (elements[e].contains(v)) cur.push_back(e);
      } else {
        for (std::size_t e : alive[depth - 1])
          if (elements[e].contains(v)) cur.push_back(e);
      }
      value = 0.0;
      return !cur.empty();
    };
    Simplex sigma;
    detail::extend_simplices(X.size(), k_max, sigma, admit, out);
  }
  return FilteredComplex(X.size(), k_max, std::move(out));
}

}  // namespace vkit
