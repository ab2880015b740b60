#pragma once

#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "vkit/measure.hpp"
#include "vkit/metric.hpp"
#include "vkit/straighten.hpp"

namespace vkit {

/// A straightening problem: space, cover and source map. The space is held
/// by shared_ptr because the cover refers to it.
struct Benchmark {
  std::string name;
  int n;
  std::shared_ptr<const FiniteMetricSpace> space;
  Cover cover;
  SourceMap source;
};

namespace detail {

inline std::shared_ptr<const FiniteMetricSpace> line_space(const std::vector<double>& xs) {
  std::vector<std::vector<double>> pts;
  for (double x : xs) pts.push_back({x});
  return std::make_shared<const FiniteMetricSpace>(metric_from_points(pts));
}

inline double mean(std::span<const double> y) {
  return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

}  // namespace detail

/// f = delta_0 on the line {0, 1, 2} with the ball cover of radius 1.5.
inline Benchmark constant_benchmark(int n) {
  auto X = detail::line_space({0.0, 1.0, 2.0});
  Cover cov = Cover::balls(*X, 1.5);
  return {"constant", n, X, cov, [](std::span<const double>) { return dirac(0); }};
}

/// A Dirac mass sliding along the line {0, 1, ..., m-1}: at y the mass sits
/// between points floor(s) and floor(s) + 1 with s = (m - 1) * mean(y), split
/// linearly. Ball cover of radius r.
inline Benchmark sliding_dirac_benchmark(int n, int m = 3, double r = 1.5) {
  std::vector<double> xs(static_cast<std::size_t>(m));
  std::iota(xs.begin(), xs.end(), 0.0);
  auto X = detail::line_space(xs);
  Cover cov = Cover::balls(*X, r);
  return {"sliding_dirac", n, X, cov, [m](std::span<const double> y) {
            const double s = (m - 1) * detail::mean(y);
            const auto k = std::min(static_cast<Index>(std::floor(s)), static_cast<Index>(m - 1));
            const double frac = s - static_cast<double>(k);
            if (frac <= 0.0 || k + 1 >= static_cast<Index>(m)) return dirac(k);
            return FiniteMeasure({k, k + 1}, {1.0 - frac, frac});
          }};
}

/// A concentrated blob travelling from one ball to another on the line
/// {0, ..., 6}: weights proportional to exp(-(x - c)^2 / 0.5) on every point,
/// c = 1 + 4 * mean(y). The cover has the two overlapping elements {0..4}
/// and {2..6}. Every value has full support, so each vertex must be pumped.
inline Benchmark two_ball_benchmark(int n) {
  auto X = detail::line_space({0, 1, 2, 3, 4, 5, 6});
  Cover cov = Cover::explicit_sets(*X, {PointSet{0, 1, 2, 3, 4}, PointSet{2, 3, 4, 5, 6}});
  return {"two_ball", n, X, cov, [](std::span<const double> y) {
            const double c = 1.0 + 4.0 * detail::mean(y);
            std::vector<Index> s(7);
            std::vector<double> w(7);
            double total = 0.0;
            for (Index x = 0; x < 7; ++x) {
              s[x] = x;
              w[x] = std::exp(-(static_cast<double>(x) - c) * (static_cast<double>(x) - c) / 0.5);
              total += w[x];
            }
            for (double& a : w) a /= total;
            return FiniteMeasure(std::move(s), std::move(w));
          }};
}

/// Half of the mass at each of two far-apart clusters {0, 0.1} and
/// {10, 10.1}; no ball of radius r < 10 can hold more than half the mass.
inline Benchmark spread_benchmark(int n, double r = 0.5) {
  auto X = detail::line_space({0.0, 0.1, 10.0, 10.1});
  Cover cov = Cover::balls(*X, r);
  return {"spread", n, X, cov, [](std::span<const double>) { return FiniteMeasure({0, 2}, {0.5, 0.5}); }};
}

}  // namespace vkit
