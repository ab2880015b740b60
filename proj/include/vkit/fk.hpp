#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vkit/error.hpp"

namespace vkit {

using Lattice = std::vector<int>;

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

/// Bound 2^n * n! on the number of n-simplices sharing a vertex.
inline std::uint64_t star_bound(int n) { return (std::uint64_t{1} << n) * factorial(n); }

/// sigma(x, pi): v_0 = x, v_i = v_{i-1} + e_{pi(i)}; axes are 0-based.
struct FKSimplex {
  Lattice base;
  std::vector<int> perm;

  std::vector<Lattice> vertices() const {
    std::vector<Lattice> out{base};
    for (int axis : perm) {
      Lattice next = out.back();
      ++next[static_cast<std::size_t>(axis)];
      out.push_back(std::move(next));
    }
    return out;
  }

  friend bool operator==(const FKSimplex&, const FKSimplex&) = default;
  friend auto operator<=>(const FKSimplex&, const FKSimplex&) = default;
};

struct Location {
  FKSimplex simplex;
  std::vector<double> barycentric;  // weight of v_0 ... v_n
};

/// Freudenthal-Kuhn triangulation of [0,1]^n at resolution p (p cells per
/// axis). Nothing is stored: simplices are generated on demand and indexed
/// by (base in lexicographic order) * n! + (lexicographic rank of the
/// permutation).
class FKTriangulation {
 public:
  FKTriangulation(int n, int p) : n_(n), p_(p) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
    if (p < 1) throw Error(ErrorKind::InvalidArgument, "resolution must be >= 1");
  }

  int dimension() const { return n_; }
  int resolution() const { return p_; }

  std::uint64_t cell_count() const { return ipow(p_, n_); }
  std::uint64_t simplex_count() const { return factorial(n_) * cell_count(); }
  std::uint64_t vertex_count() const { return ipow(p_ + 1, n_); }

  /// Diameter of every simplex: its longest edge v_0 -> v_n.
  double simplex_diameter() const { return std::sqrt(static_cast<double>(n_)) / p_; }

  std::vector<double> point(const Lattice& v) const {
    std::vector<double> y(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) y[i] = static_cast<double>(v[i]) / p_;
    return y;
  }

  std::uint64_t vertex_index(const Lattice& v) const { return linear(v, p_ + 1); }
  Lattice vertex_at(std::uint64_t index) const { return unlinear(index, p_ + 1); }

  bool on_boundary(const Lattice& v) const {
    return std::any_of(v.begin(), v.end(), [&](int c) { return c == 0 || c == p_; });
  }

  std::uint64_t simplex_index(const FKSimplex& s) const {
    return linear(s.base, p_) * factorial(n_) + permutation_rank(s.perm);
  }

  FKSimplex simplex_at(std::uint64_t index) const {
    const std::uint64_t nf = factorial(n_);
    return {unlinear(index / nf, p_), permutation_unrank(index % nf)};
  }

  /// Calls fn(index, simplex) for every n-simplex in index order.
  template <class Fn>
  void for_each_simplex(Fn&& fn) const {
    const std::uint64_t total = simplex_count();
    for (std::uint64_t k = 0; k < total; ++k) fn(k, simplex_at(k));
  }

  /// Point location. Among the simplices containing y the lexicographically
  /// smallest (base, perm) is returned: bases round integral coordinates
  /// down, and ties in the fractional parts keep the smaller axis first.
  Location locate(std::span<const double> y) const {
    if (y.size() != static_cast<std::size_t>(n_))
      throw Error(ErrorKind::OutOfDomain, "point has dimension " + std::to_string(y.size()));
    Lattice base(static_cast<std::size_t>(n_));
    std::vector<double> frac(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!(y[i] >= 0.0 && y[i] <= 1.0)) throw Error(ErrorKind::OutOfDomain, "coordinate outside [0,1]", {i});
      const double z = y[i] * p_;
      double b = std::floor(z);
      if (b == z && b > 0.0) b -= 1.0;
      b = std::min(b, static_cast<double>(p_ - 1));
      base[i] = static_cast<int>(b);
      frac[i] = std::clamp(z - b, 0.0, 1.0);
    }
    std::vector<int> perm(static_cast<std::size_t>(n_));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return frac[a] > frac[b]; });
    Location loc{{std::move(base), perm}, std::vector<double>(static_cast<std::size_t>(n_) + 1)};
    auto& w = loc.barycentric;
    w[0] = 1.0 - frac[perm[0]];
    for (int k = 1; k < n_; ++k) w[k] = frac[perm[k - 1]] - frac[perm[k]];
    w[n_] = frac[perm[n_ - 1]];
    return loc;
  }

  /// All n-simplices having v as a vertex, in index order.
  std::vector<FKSimplex> star(const Lattice& v) const {
    std::vector<FKSimplex> out;
    const int corners = 1 << n_;
    for (int mask = 0; mask < corners; ++mask) {
      Lattice base = v;
      std::vector<int> up, down;  // axes where v sits at the top / bottom of the cell
      bool valid = true;
      for (int i = 0; i < n_; ++i) {
        if (mask & (1 << i)) {
          base[i] -= 1;
          up.push_back(i);
        } else {
          down.push_back(i);
        }
        if (base[i] < 0 || base[i] > p_ - 1) valid = false;
      }
      if (!valid) continue;
      // v = base + sum of the first |up| axes of the path, so pi lists the
      // `up` axes first in any order, then the `down` axes in any order.
      do {
        do {
          std::vector<int> perm = up;
          perm.insert(perm.end(), down.begin(), down.end());
          out.push_back({base, std::move(perm)});
        } while (std::next_permutation(down.begin(), down.end()));
      } while (std::next_permutation(up.begin(), up.end()));
    }
    std::sort(out.begin(), out.end(),
              [&](const FKSimplex& a, const FKSimplex& b) { return simplex_index(a) < simplex_index(b); });
    return out;
  }

  std::size_t vertex_star_size(const Lattice& v) const { return star(v).size(); }

 private:
  static std::uint64_t ipow(int base, int exp) {
    std::uint64_t r = 1;
    for (int k = 0; k < exp; ++k) r *= static_cast<std::uint64_t>(base);
    return r;
  }

  std::uint64_t linear(const Lattice& v, int radix) const {
    std::uint64_t idx = 0;
    for (int c : v) {
      if (c < 0 || c >= radix) throw Error(ErrorKind::OutOfDomain, "lattice coordinate out of range");
      idx = idx * static_cast<std::uint64_t>(radix) + static_cast<std::uint64_t>(c);
    }
    return idx;
  }

  Lattice unlinear(std::uint64_t idx, int radix) const {
    Lattice v(static_cast<std::size_t>(n_));
    for (int i = n_ - 1; i >= 0; --i) {
      v[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::uint64_t>(radix));
      idx /= static_cast<std::uint64_t>(radix);
    }
    return v;
  }

  std::uint64_t permutation_rank(const std::vector<int>& perm) const {
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      std::uint64_t smaller = 0;
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[j] < perm[i]) ++smaller;
      rank += smaller * factorial(static_cast<int>(perm.size() - i - 1));
    }
    return rank;
  }

  std::vector<int> permutation_unrank(std::uint64_t rank) const {
    std::vector<int> pool(static_cast<std::size_t>(n_));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> perm;
    for (int i = n_ - 1; i >= 0; --i) {
      const std::uint64_t f = factorial(i);
      const auto k = static_cast<std::size_t>(rank / f);
      rank %= f;
      perm.push_back(pool[k]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return perm;
  }

  int n_;
  int p_;
};

// ---------------------------------------------------------------------------
// Subordination and the sampled Lebesgue estimate

/// Cover-membership bitsets sampled on the lattice (1/g){0..g}^n, points in
/// lexicographic order.
class MembershipGrid {
 public:
  MembershipGrid(int n, int resolution, std::size_t element_count)
      : n_(n), resolution_(resolution), elements_(element_count) {
    if (n < 1 || resolution < 1) throw Error(ErrorKind::InvalidArgument, "grid needs n >= 1 and resolution >= 1");
    std::uint64_t points = 1;
    for (int i = 0; i < n; ++i) points *= static_cast<std::uint64_t>(resolution + 1);
    points_ = points;
    bits_.assign(points * element_count, 0);
  }

  /// Fills the grid from `member(point, element) -> bool`.
  template <class Member>
  static MembershipGrid sample(int n, int resolution, std::size_t element_count, Member&& member) {
    MembershipGrid grid(n, resolution, element_count);
    const FKTriangulation lattice(n, resolution);
    for (std::uint64_t k = 0; k < grid.points_; ++k) {
      const auto y = lattice.point(lattice.vertex_at(k));
      for (std::size_t e = 0; e < element_count; ++e) grid.set(k, e, member(y, e));
    }
    return grid;
  }

  int dimension() const { return n_; }
  int resolution() const { return resolution_; }
  std::size_t element_count() const { return elements_; }
  std::uint64_t point_count() const { return points_; }

  bool get(std::uint64_t point, std::size_t element) const { return bits_[point * elements_ + element] != 0; }
  void set(std::uint64_t point, std::size_t element, bool value) { bits_[point * elements_ + element] = value; }

  std::uint64_t index(const Lattice& g) const {
    std::uint64_t idx = 0;
    for (int c : g) idx = idx * static_cast<std::uint64_t>(resolution_ + 1) + static_cast<std::uint64_t>(c);
    return idx;
  }

 private:
  int n_;
  int resolution_;
  std::size_t elements_;
  std::uint64_t points_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Grid points (in grid lattice coordinates) lying in the closed simplex s
/// of a triangulation at resolution p, for a grid at resolution p * depth:
/// the barycentric lattice sum_k (c_k / depth) v_k.
inline std::vector<Lattice> simplex_samples(const FKSimplex& s, int depth) {
  const std::size_t n = s.base.size();
  std::vector<Lattice> out;
  std::vector<int> c(n + 1, 0);  // composition of depth into n + 1 parts
  auto emit = [&] {
    Lattice g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = s.base[i] * depth;
    // Axis perm[j] is advanced by every vertex v_k with k > j.
    int tail = 0;
    for (std::size_t j = n; j-- > 0;) {
      tail += c[j + 1];
      g[static_cast<std::size_t>(s.perm[j])] += tail;
    }
    out.push_back(std::move(g));
  };
  // Enumerate compositions recursively.
  auto rec = [&](auto&& self, std::size_t k, int left) -> void {
    if (k == n) {
      c[n] = left;
      emit();
      return;
    }
    for (int a = left; a >= 0; --a) {
      c[k] = a;
      self(self, k + 1, left - a);
    }
  };
  rec(rec, 0, depth);
  return out;
}

/// Smallest cover element containing every grid sample of each n-simplex of
/// the triangulation at resolution p, or nullopt for simplices without one.
/// The grid resolution must be a multiple of p.
inline std::vector<std::optional<std::size_t>> common_elements(const MembershipGrid& grid, int p) {
  if (p < 1 || grid.resolution() % p != 0)
    throw Error(ErrorKind::InvalidArgument, "grid resolution must be a multiple of the triangulation resolution");
  const FKTriangulation tri(grid.dimension(), p);
  const int depth = grid.resolution() / p;
  std::vector<std::optional<std::size_t>> out(tri.simplex_count());
  tri.for_each_simplex([&](std::uint64_t idx, const FKSimplex& s) {
    std::vector<bool> alive(grid.element_count(), true);
    for (const auto& g : simplex_samples(s, depth)) {
      const auto k = grid.index(g);
      for (std::size_t e = 0; e < alive.size(); ++e)
        if (alive[e] && !grid.get(k, e)) alive[e] = false;
    }
    for (std::size_t e = 0; e < alive.size(); ++e)
      if (alive[e]) {
        out[idx] = e;
        break;
      }
  });
  return out;
}

/// True iff every n-simplex is assigned a valid element id.
inline bool subordinate_to(const FKTriangulation& tri, std::span<const std::optional<std::size_t>> assignment,
                           std::size_t element_count) {
  if (assignment.size() != tri.simplex_count()) return false;
  return std::all_of(assignment.begin(), assignment.end(),
                     [&](const auto& a) { return a.has_value() && *a < element_count; });
}

struct LebesgueEstimate {
  double epsilon;  // sqrt(n) / p, or 0 when no tested resolution works
  int resolution;  // p, or 0
};

/// Tests p = 1, 2, 4, ... (up to p_max and the grid resolution, p dividing it)
/// and returns the first resolution at which every FK simplex has all of its
/// grid samples inside a common cover element.
inline LebesgueEstimate estimate_lebesgue(const MembershipGrid& grid, int p_max = 1 << 10) {
  if (grid.resolution() < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 2");
  for (int p = 1; p <= p_max && p <= grid.resolution(); p *= 2) {
    if (grid.resolution() % p != 0) break;
    const FKTriangulation tri(grid.dimension(), p);
    const auto labels = common_elements(grid, p);
    if (subordinate_to(tri, labels, grid.element_count()))
      return {std::sqrt(static_cast<double>(grid.dimension())) / p, p};
  }
  return {0.0, 0};
}

}  // namespace vkit
