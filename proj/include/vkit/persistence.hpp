#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <vector>

#include "vkit/complex.hpp"
#include "vkit/error.hpp"

namespace vkit {

struct Interval {
  int dim;
  double birth;
  double death;  // +inf for essential classes

  bool essential() const { return std::isinf(death); }
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Multiset of intervals kept sorted by (dim, birth, death), so equality of
/// diagrams is order-insensitive by construction.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  explicit PersistenceDiagram(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (const auto& iv : intervals_)
      if (iv.dim < 0 || !(iv.birth <= iv.death)) throw Error(ErrorKind::InvalidArgument, "malformed interval");
    std::sort(intervals_.begin(), intervals_.end());
  }

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }

  std::vector<Interval> in_dimension(int dim) const {
    std::vector<Interval> out;
    for (const auto& iv : intervals_)
      if (iv.dim == dim) out.push_back(iv);
    return out;
  }

  int max_dimension() const { return intervals_.empty() ? -1 : intervals_.back().dim; }

  /// Number of intervals alive at threshold r under the open convention:
  /// an interval (b, d) is populated for b < r <= d.
  std::size_t alive_at(double r, int dim) const {
    return static_cast<std::size_t>(std::count_if(intervals_.begin(), intervals_.end(), [&](const Interval& iv) {
      return iv.dim == dim && iv.birth < r && r <= iv.death;
    }));
  }

  /// CSV "dim,birth,death" with "inf" for essential classes.
  void write_csv(std::ostream& out) const {
    auto old_precision = out.precision(17);
    out << "dim,birth,death\n";
    for (const auto& iv : intervals_) {
      out << iv.dim << ',' << iv.birth << ',';
      if (iv.essential()) {
        out << "inf";
      } else {
        out << iv.death;
      }
      out << '\n';
    }
    out.precision(old_precision);
  }

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Z/2 boundary matrix with columns in filtration order (value, then
/// dimension, then lexicographic); column j lists the positions of the
/// codimension-1 faces of simplex j, ascending.
struct BoundaryMatrix {
  std::vector<std::size_t> order;  // filtration position -> index into K.simplices()
  std::vector<std::vector<std::size_t>> columns;

  explicit BoundaryMatrix(const FilteredComplex& K) {
    const auto& s = K.simplices();
    order.resize(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (s[a].value != s[b].value) return s[a].value < s[b].value;
      return s[a].vertices.size() < s[b].vertices.size();
    });
    std::vector<std::size_t> position(s.size());
    for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k;
    columns.resize(s.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto& v = s[order[k]].vertices;
      if (v.size() < 2) continue;
      for (std::size_t drop = 0; drop < v.size(); ++drop) {
        Simplex face;
        for (std::size_t t = 0; t < v.size(); ++t)
          if (t != drop) face.push_back(v[t]);
        const auto f = K.find(face);
        if (f == K.size()) throw Error(ErrorKind::InvalidArgument, "complex is not closed under faces");
        columns[k].push_back(position[f]);
      }
      std::sort(columns[k].begin(), columns[k].end());
    }
  }
};

/// Barcode over Z/2 by standard column reduction. Dimensions 0..max_dim are
/// reported; zero-length intervals are dropped.
inline PersistenceDiagram compute_diagram(const FilteredComplex& K, int max_dim) {
  if (max_dim < 0) throw Error(ErrorKind::InvalidArgument, "max_dim must be >= 0");
  if (K.k_max() < max_dim + 1)
    throw Error(ErrorKind::SkeletonTooShallow, "complex needs its " + std::to_string(max_dim + 1) + "-skeleton");
  BoundaryMatrix D(K);
  const auto& s = K.simplices();
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> pivot_owner(D.columns.size(), none);
  std::vector<bool> paired(D.columns.size(), false);
  std::vector<Interval> out;
  std::vector<std::size_t> scratch;
  for (std::size_t j = 0; j < D.columns.size(); ++j) {
    auto& col = D.columns[j];
    while (!col.empty() && pivot_owner[col.back()] != none) {
      const auto& other = D.columns[pivot_owner[col.back()]];
      scratch.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(scratch));
      col.swap(scratch);
    }
    if (col.empty()) continue;
    const std::size_t low = col.back();
    pivot_owner[low] = j;
    paired[low] = paired[j] = true;
    const auto& born = s[D.order[low]];
    const double death = s[D.order[j]].value;
    if (born.dimension() <= max_dim && born.value < death) out.push_back({born.dimension(), born.value, death});
  }
  for (std::size_t j = 0; j < D.columns.size(); ++j) {
    if (paired[j]) continue;
    const auto& sj = s[D.order[j]];
    if (sj.dimension() <= max_dim) out.push_back({sj.dimension(), sj.value, kInf});
  }
  return PersistenceDiagram(std::move(out));
}

// ---------------------------------------------------------------------------
// Independent linear-algebra route: ranks over GF(2) by Gaussian elimination.

namespace detail {

using BitRow = std::vector<std::uint64_t>;

inline void flip(BitRow& row, std::size_t bit) { row[bit / 64] ^= std::uint64_t{1} << (bit % 64); }
inline bool test(const BitRow& row, std::size_t bit) { return (row[bit / 64] >> (bit % 64)) & 1U; }

inline std::size_t gf2_rank(std::vector<BitRow> rows, std::size_t width) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !test(rows[pivot], col)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && test(rows[r], col))
        for (std::size_t w = 0; w < rows[r].size(); ++w) rows[r][w] ^= rows[rank][w];
    ++rank;
  }
  return rank;
}

struct Sublevel {
  // Simplices of each dimension with value < r, as positions in K.
  std::map<int, std::vector<std::size_t>> by_dim;
};

inline Sublevel sublevel(const FilteredComplex& K, double r) {
  Sublevel out;
  const auto& s = K.simplices();
  for (std::size_t k = 0; k < s.size(); ++k)
    if (s[k].value < r) out.by_dim[s[k].dimension()].push_back(k);
  return out;
}

// Boundary map C_dim -> C_{dim-1} as one bit row per dim-simplex, with bits
// indexed by position within `faces`.
inline std::vector<BitRow> boundary_rows(const FilteredComplex& K, const std::vector<std::size_t>& simplices,
                                         const std::vector<std::size_t>& faces) {
  std::map<std::size_t, std::size_t> face_pos;
  for (std::size_t k = 0; k < faces.size(); ++k) face_pos[faces[k]] = k;
  const std::size_t words = (faces.size() + 63) / 64 + 1;
  std::vector<BitRow> rows;
  for (std::size_t idx : simplices) {
    BitRow row(words, 0);
    const auto& v = K.simplices()[idx].vertices;
    if (v.size() >= 2)
      for (std::size_t drop = 0; drop < v.size(); ++drop) {
        Simplex face;
        for (std::size_t t = 0; t < v.size(); ++t)
          if (t != drop) face.push_back(v[t]);
        flip(row, face_pos.at(K.find(face)));
      }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const std::vector<std::size_t>& cells(const Sublevel& L, int dim) {
  static const std::vector<std::size_t> empty;
  auto it = L.by_dim.find(dim);
  return it == L.by_dim.end() ? empty : it->second;
}

}  // namespace detail

/// Betti number of the strict sublevel complex {sigma : value(sigma) < r}
/// over Z/2, computed as dim C_d - rank d_d - rank d_{d+1}.
inline std::size_t betti_at(const FilteredComplex& K, double r, int dim) {
  if (dim < 0) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 0");
  const auto L = detail::sublevel(K, r);
  const auto& cd = detail::cells(L, dim);
  if (cd.empty()) return 0;
  std::size_t rank_d = 0;
  if (dim > 0) {
    const auto& faces = detail::cells(L, dim - 1);
    rank_d = detail::gf2_rank(detail::boundary_rows(K, cd, faces), faces.size());
  }
  const auto& cofaces = detail::cells(L, dim + 1);
  const std::size_t rank_up = detail::gf2_rank(detail::boundary_rows(K, cofaces, cd), cd.size());
  return cd.size() - rank_d - rank_up;
}

/// Rank of the map H_dim(K_{<r1}) -> H_dim(K_{<r2}) induced by inclusion,
/// for r1 <= r2: rank[B(r2) | Z(r1)] - rank B(r2).
inline std::size_t persistent_betti(const FilteredComplex& K, double r1, double r2, int dim) {
  if (r1 > r2) throw Error(ErrorKind::InvalidArgument, "thresholds must satisfy r1 <= r2");
  const auto L1 = detail::sublevel(K, r1);
  const auto L2 = detail::sublevel(K, r2);
  const auto& small = detail::cells(L1, dim);
  const auto& big = detail::cells(L2, dim);
  if (small.empty()) return 0;

  // Cycle space of K_{<r1}: kernel of the boundary on `small`, via
  // elimination on the augmented rows [boundary | identity].
  std::vector<detail::BitRow> cycles;
  {
    const auto& faces = detail::cells(L1, dim - 1);
    auto rows = dim > 0 ? detail::boundary_rows(K, small, faces)
                        : std::vector<detail::BitRow>(small.size(), detail::BitRow(1, 0));
    const std::size_t fw = dim > 0 ? faces.size() : 0;
    const std::size_t words = (fw + small.size() + 63) / 64 + 1;
    std::vector<detail::BitRow> aug(small.size(), detail::BitRow(words, 0));
    for (std::size_t k = 0; k < small.size(); ++k) {
      for (std::size_t b = 0; b < fw; ++b)
        if (detail::test(rows[k], b)) detail::flip(aug[k], b);
      detail::flip(aug[k], fw + k);
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < fw && rank < aug.size(); ++col) {
      std::size_t pivot = rank;
      while (pivot < aug.size() && !detail::test(aug[pivot], col)) ++pivot;
      if (pivot == aug.size()) continue;
      std::swap(aug[pivot], aug[rank]);
      for (std::size_t r = 0; r < aug.size(); ++r)
        if (r != rank && detail::test(aug[r], col))
          for (std::size_t w = 0; w < words; ++w) aug[r][w] ^= aug[rank][w];
      ++rank;
    }
    // Rows past the rank have zero boundary part; their identity part is a cycle.
    std::map<std::size_t, std::size_t> big_pos;
    for (std::size_t k = 0; k < big.size(); ++k) big_pos[big[k]] = k;
    for (std::size_t r = rank; r < aug.size(); ++r) {
      detail::BitRow cyc((big.size() + 63) / 64 + 1, 0);
      for (std::size_t k = 0; k < small.size(); ++k)
        if (detail::test(aug[r], fw + k)) detail::flip(cyc, big_pos.at(small[k]));
      cycles.push_back(std::move(cyc));
    }
  }
  auto boundaries = detail::boundary_rows(K, detail::cells(L2, dim + 1), big);
  const std::size_t rank_b = detail::gf2_rank(boundaries, big.size());
  boundaries.insert(boundaries.end(), cycles.begin(), cycles.end());
  return detail::gf2_rank(std::move(boundaries), big.size()) - rank_b;
}

// ---------------------------------------------------------------------------
// Bottleneck distance

namespace detail {

// Kuhn's augmenting-path matching on a dense bipartite graph.
inline bool has_perfect_matching(const std::vector<std::vector<bool>>& adj) {
  const std::size_t n = adj.size();
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> match_right(n, none);
  std::vector<bool> visited;
  auto augment = [&](auto&& self, std::size_t u) -> bool {
    for (std::size_t v = 0; v < n; ++v) {
      if (!adj[u][v] || visited[v]) continue;
      visited[v] = true;
      if (match_right[v] == none || self(self, match_right[v])) {
        match_right[v] = u;
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    visited.assign(n, false);
    if (!augment(augment, u)) return false;
  }
  return true;
}

inline double linf(const Interval& a, const Interval& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double to_diagonal(const Interval& a) { return (a.death - a.birth) / 2.0; }

inline double bottleneck_finite(const std::vector<Interval>& P, const std::vector<Interval>& Q) {
  const std::size_t m = P.size(), n = Q.size();
  std::vector<double> candidates{0.0};
  for (const auto& p : P) candidates.push_back(to_diagonal(p));
  for (const auto& q : Q) candidates.push_back(to_diagonal(q));
  for (const auto& p : P)
    for (const auto& q : Q) candidates.push_back(linf(p, q));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Left: P then diagonal copies of Q. Right: Q then diagonal copies of P.
  auto feasible = [&](double eps) {
    std::vector<std::vector<bool>> adj(m + n, std::vector<bool>(m + n, false));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) adj[i][j] = linf(P[i], Q[j]) <= eps;
      adj[i][n + i] = to_diagonal(P[i]) <= eps;
    }
    for (std::size_t j = 0; j < n; ++j) {
      adj[m + j][j] = to_diagonal(Q[j]) <= eps;
      for (std::size_t i = 0; i < m; ++i) adj[m + j][n + i] = true;
    }
    return has_perfect_matching(adj);
  };
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

}  // namespace detail

/// Exact bottleneck distance, dimension by dimension, with points allowed to
/// match the diagonal. Essential classes match only essential classes of the
/// same dimension; a count mismatch gives +inf.
inline double diagram_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  double result = 0.0;
  const int top = std::max(a.max_dimension(), b.max_dimension());
  for (int dim = 0; dim <= top; ++dim) {
    std::vector<Interval> pf, qf;
    std::vector<double> pe, qe;
    for (const auto& iv : a.in_dimension(dim)) (iv.essential() ? pe.push_back(iv.birth) : pf.push_back(iv));
    for (const auto& iv : b.in_dimension(dim)) (iv.essential() ? qe.push_back(iv.birth) : qf.push_back(iv));
    if (pe.size() != qe.size()) return kInf;
    std::sort(pe.begin(), pe.end());
    std::sort(qe.begin(), qe.end());
    for (std::size_t k = 0; k < pe.size(); ++k) result = std::max(result, std::abs(pe[k] - qe[k]));
    result = std::max(result, detail::bottleneck_finite(pf, qf));
  }
  return result;
}

}  // namespace vkit
