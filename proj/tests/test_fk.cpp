#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"
#include "vkit/fk.hpp"
#include "vkit/random.hpp"

using namespace vkit;

namespace {

std::vector<double> reconstruct(const FKTriangulation& tri, const Location& loc) {
  const auto vs = loc.simplex.vertices();
  std::vector<double> y(static_cast<std::size_t>(tri.dimension()), 0.0);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const auto pt = tri.point(vs[k]);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += loc.barycentric[k] * pt[i];
  }
  return y;
}

}  // namespace

TEST_CASE("build_fk examples") {
  const FKTriangulation seg(1, 2);
  CHECK(seg.simplex_count() == 2);
  CHECK(seg.simplex_at(0).vertices() == std::vector<Lattice>{{0}, {1}});
  CHECK(seg.simplex_at(1).vertices() == std::vector<Lattice>{{1}, {2}});

  const FKTriangulation sq(2, 1);
  REQUIRE(sq.simplex_count() == 2);
  CHECK(sq.simplex_at(0).vertices() == std::vector<Lattice>{{0, 0}, {1, 0}, {1, 1}});
  CHECK(sq.simplex_at(1).vertices() == std::vector<Lattice>{{0, 0}, {0, 1}, {1, 1}});

  CHECK(FKTriangulation(3, 2).simplex_count() == 48);
  CHECK(FKTriangulation(3, 2).vertex_count() == 27);
  CHECK_THROWS_AS(FKTriangulation(0, 1), Error);
  CHECK_THROWS_AS(FKTriangulation(1, 0), Error);
}

TEST_CASE("simplex indexing round-trips") {
  for (int n = 1; n <= 4; ++n)
    for (int p = 1; p <= 3; ++p) {
      const FKTriangulation tri(n, p);
      tri.for_each_simplex([&](std::uint64_t k, const FKSimplex& s) { CHECK(tri.simplex_index(s) == k); });
      for (std::uint64_t k = 0; k < tri.vertex_count(); ++k) CHECK(tri.vertex_index(tri.vertex_at(k)) == k);
    }
}

TEST_CASE("triangulation matches direct enumeration") {
  for (int n = 1; n <= 4; ++n)
    for (int p = 1; p <= 3; ++p) {
      const FKTriangulation tri(n, p);
      const auto raw = oracle::fk_all(n, p);
      CHECK(raw.size() == tri.simplex_count());
      std::set<std::vector<std::vector<int>>> expect, got;
      for (const auto& s : raw) expect.insert(s.vertices);
      tri.for_each_simplex([&](std::uint64_t, const FKSimplex& s) { got.insert(s.vertices()); });
      CHECK(got == expect);

      double total = 0.0;
      for (const auto& s : raw) {
        total += oracle::volume(s, p);
        double diam = 0.0;
        for (const auto& a : s.vertices)
          for (const auto& b : s.vertices) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) d2 += std::pow(static_cast<double>(a[i] - b[i]) / p, 2);
            diam = std::max(diam, std::sqrt(d2));
          }
        CHECK(std::abs(diam - tri.simplex_diameter()) <= 1e-12);
      }
      CHECK(std::abs(total - 1.0) <= 1e-9);

      // Stars against a scan over all simplices.
      std::size_t max_star = 0;
      for (std::uint64_t k = 0; k < tri.vertex_count(); ++k) {
        const auto v = tri.vertex_at(k);
        std::size_t count = 0;
        for (const auto& s : raw) count += std::find(s.vertices.begin(), s.vertices.end(), v) != s.vertices.end();
        CHECK(tri.vertex_star_size(v) == count);
        for (const auto& s : tri.star(v)) {
          const auto vs = s.vertices();
          CHECK(std::find(vs.begin(), vs.end(), v) != vs.end());
        }
        max_star = std::max(max_star, count);
      }
      CHECK(max_star <= star_bound(n));
    }
}

TEST_CASE("facets are shared by two simplices inside and one on the boundary") {
  for (int n = 1; n <= 3; ++n)
    for (int p = 1; p <= 3; ++p) {
      std::map<std::vector<std::vector<int>>, int> facets;
      for (const auto& s : oracle::fk_all(n, p))
        for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
          auto f = s.vertices;
          f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
          std::sort(f.begin(), f.end());
          ++facets[f];
        }
      for (const auto& [f, count] : facets) {
        // A facet lies in the cube boundary iff some coordinate is constant 0 or p on it.
        bool boundary = false;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
          const bool all0 = std::all_of(f.begin(), f.end(), [&](const auto& v) { return v[i] == 0; });
          const bool allp = std::all_of(f.begin(), f.end(), [&](const auto& v) { return v[i] == p; });
          boundary = boundary || all0 || allp;
        }
        CHECK(count == (boundary ? 1 : 2));
      }
    }
}

TEST_CASE("vertex_star_size examples") {
  CHECK(FKTriangulation(2, 2).vertex_star_size({1, 1}) == 6);
  CHECK(FKTriangulation(1, 2).vertex_star_size({1}) == 2);
  CHECK(FKTriangulation(2, 2).vertex_star_size({0, 0}) == 2);
  CHECK(FKTriangulation(3, 2).vertex_star_size({0, 0, 0}) == 6);
}

TEST_CASE("locate examples") {
  const FKTriangulation tri(2, 1);
  const std::vector<double> y{0.3, 0.7};
  const auto loc = tri.locate(y);
  CHECK(loc.simplex.vertices() == std::vector<Lattice>{{0, 0}, {0, 1}, {1, 1}});
  for (double w : loc.barycentric) CHECK(w >= 0.0);
  const auto back = reconstruct(tri, loc);
  CHECK(std::abs(back[0] - 0.3) <= 1e-15);
  CHECK(std::abs(back[1] - 0.7) <= 1e-15);

  const std::vector<double> origin{0.0, 0.0};
  CHECK(tri.locate(origin).barycentric[0] == 1.0);

  // Barycentres come back with equal weights.
  for (int n = 1; n <= 4; ++n) {
    const FKTriangulation t(n, 3);
    t.for_each_simplex([&](std::uint64_t, const FKSimplex& s) {
      std::vector<double> c(static_cast<std::size_t>(n), 0.0);
      for (const auto& v : s.vertices())
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += t.point(v)[i] / (n + 1);
      const auto l = t.locate(c);
      CHECK(l.simplex == s);
      for (double w : l.barycentric) CHECK(std::abs(w - 1.0 / (n + 1)) <= 1e-12);
    });
  }

  const std::vector<double> outside{1.2, 0.5};
  CHECK_THROWS_AS(tri.locate(outside), Error);
  const std::vector<double> short_point{0.5};
  CHECK_THROWS_AS(tri.locate(short_point), Error);
}

TEST_CASE("locate picks the lexicographically smallest simplex on ties") {
  for (int n = 1; n <= 3; ++n)
    for (int p = 1; p <= 3; ++p) {
      const FKTriangulation tri(n, p);
      // Every grid point at resolution 2p; brute-force the containing simplices.
      const FKTriangulation fine(n, 2 * p);
      for (std::uint64_t k = 0; k < fine.vertex_count(); ++k) {
        const auto y = fine.point(fine.vertex_at(k));
        const auto loc = tri.locate(y);
        const auto back = reconstruct(tri, loc);
        for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(back[i] - y[i]) <= 1e-12);
        std::optional<FKSimplex> best;
        tri.for_each_simplex([&](std::uint64_t, const FKSimplex& s) {
          // y in s iff base <= p y <= base + 1 and fractional parts ordered along perm.
          std::vector<double> u(y.size());
          for (std::size_t i = 0; i < y.size(); ++i) u[i] = y[i] * p - s.base[i];
          bool in = std::all_of(u.begin(), u.end(), [](double c) { return c >= -1e-12 && c <= 1 + 1e-12; });
          for (std::size_t j = 0; in && j + 1 < s.perm.size(); ++j)
            in = u[static_cast<std::size_t>(s.perm[j])] >= u[static_cast<std::size_t>(s.perm[j + 1])] - 1e-12;
          if (in && !best) best = s;
        });
        REQUIRE(best);
        CHECK(loc.simplex == *best);
      }
    }
}

TEST_CASE("locate round-trip on random points") {
  random::Rng rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 4; ++n)
    for (int p = 1; p <= 5; ++p) {
      const FKTriangulation tri(n, p);
      for (int k = 0; k < 500; ++k) {
        std::vector<double> y(static_cast<std::size_t>(n));
        for (auto& c : y) c = u(rng);
        const auto loc = tri.locate(y);
        double sum = 0.0;
        for (double w : loc.barycentric) {
          CHECK(w >= 0.0);
          sum += w;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        const auto back = reconstruct(tri, loc);
        for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(back[i] - y[i]) <= 1e-10);
      }
    }
}

TEST_CASE("simplex_samples is the barycentric lattice") {
  for (int n = 1; n <= 3; ++n) {
    const FKTriangulation tri(n, 2);
    for (int depth = 1; depth <= 3; ++depth)
      tri.for_each_simplex([&](std::uint64_t, const FKSimplex& s) {
        const auto samples = simplex_samples(s, depth);
        // C(depth + n, n) points.
        std::uint64_t expect = 1;
        for (int k = 1; k <= n; ++k) expect = expect * static_cast<std::uint64_t>(depth + k) / static_cast<std::uint64_t>(k);
        CHECK(samples.size() == expect);
        std::set<Lattice> unique(samples.begin(), samples.end());
        CHECK(unique.size() == samples.size());
        // Every vertex is a sample, scaled by depth.
        for (auto v : s.vertices()) {
          for (int& c : v) c *= depth;
          CHECK(unique.count(v) == 1);
        }
      });
  }
}

TEST_CASE("subordinate_to and common_elements") {
  const FKTriangulation tri(2, 2);
  std::vector<std::optional<std::size_t>> all(tri.simplex_count(), 0);
  CHECK(subordinate_to(tri, all, 1));
  all[3].reset();
  CHECK_FALSE(subordinate_to(tri, all, 1));
  std::vector<std::optional<std::size_t>> bad(tri.simplex_count(), 2);
  CHECK_FALSE(subordinate_to(tri, bad, 2));

  const auto grid = MembershipGrid::sample(2, 4, 1, [](auto&, std::size_t) { return true; });
  const auto labels = common_elements(grid, 2);
  CHECK(subordinate_to(tri, labels, 1));
}

TEST_CASE("estimate_lebesgue") {
  const auto one = MembershipGrid::sample(2, 8, 1, [](auto&, std::size_t) { return true; });
  const auto e1 = estimate_lebesgue(one);
  CHECK(e1.resolution == 1);
  CHECK(e1.epsilon == std::sqrt(2.0));

  // Two half-planes overlapping in a slab of width w around y_0 = 1/2. The
  // analytic Lebesgue number is w, so any p with sqrt(2)/p < w must succeed.
  const double w = 0.3;
  auto slab = [&](const std::vector<double>& y, std::size_t e) {
    return e == 0 ? y[0] < 0.5 + w / 2 : y[0] > 0.5 - w / 2;
  };
  const auto grid = MembershipGrid::sample(2, 256, 2, slab);
  const auto est = estimate_lebesgue(grid);
  REQUIRE(est.resolution > 0);
  CHECK(est.epsilon >= std::sqrt(2.0) / 8);
  // The returned triangulation is subordinate in the exact sense: elements
  // are half-planes, so vertex containment decides simplex containment.
  const FKTriangulation tri(2, est.resolution);
  tri.for_each_simplex([&](std::uint64_t, const FKSimplex& s) {
    bool fits0 = true, fits1 = true;
    for (const auto& v : s.vertices()) {
      fits0 = fits0 && slab(tri.point(v), 0);
      fits1 = fits1 && slab(tri.point(v), 1);
    }
    CHECK((fits0 || fits1));
  });

  const auto none = MembershipGrid::sample(1, 16, 2, [](const std::vector<double>& y, std::size_t e) {
    return e == 0 ? y[0] <= 0.5 : y[0] > 0.5;
  });
  const auto e0 = estimate_lebesgue(none);
  CHECK(e0.epsilon == 0.0);
  CHECK(e0.resolution == 0);

  CHECK_THROWS_AS(estimate_lebesgue(MembershipGrid(1, 1, 1)), Error);
}
