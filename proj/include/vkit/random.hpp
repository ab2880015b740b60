#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "vkit/measure.hpp"
#include "vkit/metric.hpp"

namespace vkit::random {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Euclidean space of `n` uniform points in [0,1]^dim.
inline FiniteMetricSpace space(Rng& rng, std::size_t n, std::size_t dim = 2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& c : p) c = u(rng);
  return metric_from_points(pts);
}

/// Random subset of {0..n-1} of the given size.
inline std::vector<Index> subset(Rng& rng, std::size_t n, std::size_t size) {
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(size, n));
  std::sort(all.begin(), all.end());
  return all;
}

/// Measure on the given support with weights drawn uniformly and normalized.
inline FiniteMeasure measure_on(Rng& rng, std::vector<Index> support) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(support.size());
  double total = 0.0;
  for (auto& a : w) total += (a = u(rng));
  for (auto& a : w) a /= total;
  return FiniteMeasure(std::move(support), std::move(w));
}

/// Measure with 1..max_support support points in a space of n points.
inline FiniteMeasure measure(Rng& rng, std::size_t n, std::size_t max_support) {
  std::uniform_int_distribution<std::size_t> k(1, std::min(max_support, n));
  return measure_on(rng, subset(rng, n, k(rng)));
}

}  // namespace vkit::random
