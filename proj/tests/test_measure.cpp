#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "vkit/measure.hpp"
#include "vkit/random.hpp"
#include "vkit/transport.hpp"

using namespace vkit;
using Catch::Approx;

namespace {

FiniteMetricSpace line(std::vector<double> xs) {
  std::vector<std::vector<double>> pts;
  for (double x : xs) pts.push_back({x});
  return metric_from_points(pts);
}

}  // namespace

TEST_CASE("finite measures are canonical") {
  const auto mu = FiniteMeasure({2, 0, 1}, {0.75, 0.25, 0.0});
  CHECK(mu.support() == std::vector<Index>{0, 2});
  CHECK(mu.weights() == std::vector<double>{0.25, 0.75});
  CHECK(mu.weight(1) == 0.0);
  CHECK_THROWS_AS(FiniteMeasure({0, 0}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(FiniteMeasure({0}, {-1.0}), Error);
  CHECK_THROWS_AS(FiniteMeasure({0, 1}, {0.5, 0.4}), Error);
  // Within 1e-9 of one: renormalized.
  const auto near = FiniteMeasure({0, 1}, {0.5, 0.5 + 5e-10});
  CHECK(std::abs(near.weights()[0] + near.weights()[1] - 1.0) <= 1e-15);
}

TEST_CASE("dirac") {
  const auto X = line({0.0, 1.0, 3.5});
  const auto d = dirac(1);
  CHECK(d.support() == std::vector<Index>{1});
  CHECK(d.weights() == std::vector<double>{1.0});
  CHECK(wasserstein_distance(X, d, d) == 0.0);
  CHECK(wasserstein_distance(X, dirac(0), dirac(2)) == 3.5);
  CHECK(barycentric_distance(dirac(0), dirac(2)) == 2.0);
}

TEST_CASE("convex_combine") {
  const auto mu = FiniteMeasure({0, 1}, {0.3, 0.7});
  const auto nu = FiniteMeasure({1, 2}, {0.6, 0.4});
  CHECK(convex_combine(mu, nu, 0.0) == mu);
  CHECK(convex_combine(mu, nu, 1.0) == nu);
  const auto ab = convex_combine(dirac(0), dirac(1), 0.25);
  CHECK(ab.weight(0) == 0.75);
  CHECK(ab.weight(1) == 0.25);
  CHECK_THROWS_AS(convex_combine(mu, nu, 1.5), Error);
}

TEST_CASE("convex_combine is associative") {
  random::Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto mu = random::measure(rng, 9, 6), nu = random::measure(rng, 9, 6);
    const double t = u(rng), s = u(rng);
    const auto twice = convex_combine(convex_combine(mu, nu, t), nu, s);
    const double keep = (1 - t) * (1 - s);
    for (Index x = 0; x < 9; ++x)
      CHECK(std::abs(twice.weight(x) - (keep * mu.weight(x) + (1 - keep) * nu.weight(x))) <= 1e-12);
  }
}

TEST_CASE("wasserstein examples") {
  const auto X = line({0.0, 1.0, 2.0});
  const auto mu = FiniteMeasure({0, 2}, {0.5, 0.5});
  const auto r = wasserstein(X, mu, dirac(1));
  CHECK(r.distance == Approx(1.0).margin(1e-15));
  CHECK(r.coupling.marginal_error(mu, dirac(1)) <= 1e-15);
  CHECK(oracle::transport_by_vertices(X, mu, dirac(1)) == Approx(1.0).margin(1e-15));

  const auto same = wasserstein(X, mu, mu);
  CHECK(same.distance == 0.0);
  CHECK(same.coupling.off_diagonal_mass() == 0.0);
}

TEST_CASE("wasserstein matches the polytope-vertex oracle") {
  random::Rng rng(101);
  for (int trial = 0; trial < 150; ++trial) {
    const auto X = random::space(rng, 8);
    const auto mu = random::measure(rng, 8, 4), nu = random::measure(rng, 8, 4);
    const auto r = wasserstein(X, mu, nu);
    CHECK(std::abs(r.distance - oracle::transport_by_vertices(X, mu, nu)) <= 1e-9);
    CHECK(r.coupling.marginal_error(mu, nu) <= 1e-10);
    CHECK(std::abs(r.coupling.cost(X) - r.distance) <= 1e-12);
  }
}

TEST_CASE("wasserstein is a metric") {
  random::Rng rng(202);
  for (int trial = 0; trial < 300; ++trial) {
    const auto X = random::space(rng, 10);
    const auto a = random::measure(rng, 10, 6), b = random::measure(rng, 10, 6), c = random::measure(rng, 10, 6);
    const auto ab = wasserstein(X, a, b), ba = wasserstein(X, b, a);
    CHECK(ab.distance == ba.distance);
    CHECK(ab.distance >= 0.0);
    CHECK(wasserstein_distance(X, a, c) <= ab.distance + wasserstein_distance(X, b, c) + 1e-9);
  }
}

TEST_CASE("wasserstein on larger supports keeps marginals") {
  random::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = random::space(rng, 60, 3);
    const auto a = random::measure(rng, 60, 40), b = random::measure(rng, 60, 40);
    const auto r = wasserstein(X, a, b);
    CHECK(r.coupling.marginal_error(a, b) <= 1e-10);
    // Never worse than the common-mass coupling.
    CHECK(r.distance <= common_mass_coupling(a, b).cost(X) + 1e-12);
  }
}

TEST_CASE("common_mass_coupling") {
  const auto a = FiniteMeasure({0, 1}, {0.5, 0.5});
  const auto c1 = common_mass_coupling(a, a);
  CHECK(c1.off_diagonal_mass() == 0.0);
  CHECK(c1.marginal_error(a, a) == 0.0);

  const auto c2 = common_mass_coupling(dirac(0), dirac(1));
  CHECK(c2.off_diagonal_mass() == 1.0);
  CHECK(c2.off_diagonal_mass() == barycentric_distance(dirac(0), dirac(1)) / 2);

  const auto c3 = common_mass_coupling(a, dirac(0));
  REQUIRE(c3.rows == std::vector<Index>{0, 1});
  REQUIRE(c3.cols == std::vector<Index>{0});
  CHECK(c3.mass[0][0] == 0.5);
  CHECK(c3.mass[1][0] == 0.5);
  CHECK(c3.off_diagonal_mass() == 0.5);

  random::Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto mu = random::measure(rng, 8, 6), nu = random::measure(rng, 8, 6);
    const auto c = common_mass_coupling(mu, nu);
    CHECK(c.marginal_error(mu, nu) <= 1e-12);
    CHECK(std::abs(c.off_diagonal_mass() - barycentric_distance(mu, nu) / 2) <= 1e-12);
  }
}

TEST_CASE("barycentric_distance") {
  const auto a = FiniteMeasure({0, 1}, {0.5, 0.5});
  CHECK(barycentric_distance(a, a) == 0.0);
  CHECK(barycentric_distance(a, FiniteMeasure({2, 3}, {0.5, 0.5})) == 2.0);
  CHECK(barycentric_distance(a, dirac(0)) == 1.0);
}

TEST_CASE("mix") {
  const std::vector<FiniteMeasure> m{dirac(0), dirac(1), FiniteMeasure({0, 1}, {0.5, 0.5})};
  const std::vector<double> w{0.25, 0.25, 0.5};
  const auto out = mix(m, w);
  CHECK(out.weight(0) == 0.5);
  CHECK(out.weight(1) == 0.5);
}
