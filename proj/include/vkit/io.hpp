#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vkit/complex.hpp"
#include "vkit/error.hpp"
#include "vkit/fk.hpp"
#include "vkit/generators.hpp"
#include "vkit/measure.hpp"
#include "vkit/metric.hpp"
#include "vkit/persistence.hpp"
#include "vkit/straighten.hpp"

namespace vkit::io {

using json = nlohmann::json;

/// Numeric CSV: one row per line, comma or whitespace separated. Blank lines
/// and '#' comments are skipped; a first line that does not parse as numbers
/// is treated as a header.
inline std::vector<std::vector<double>> read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    bool numeric = true;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric || row.empty()) {
      if (!header_seen && rows.empty()) {
        header_seen = true;
        continue;
      }
      throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + " is not numeric");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, "no data rows");
  return rows;
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const FiniteMeasure& mu) {
  return json{{"support", mu.support()}, {"weights", mu.weights()}};
}

inline FiniteMeasure measure_from_json(const json& j) {
  try {
    return FiniteMeasure(j.at("support").get<std::vector<Index>>(), j.at("weights").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("measure: ") + e.what());
  }
}

/// Explicit cover: JSON list of index arrays.
inline Cover cover_from_json(const FiniteMetricSpace& X, const json& j) {
  try {
    std::vector<PointSet> elements;
    for (const auto& e : j) elements.emplace_back(e.get<std::vector<Index>>());
    return Cover::explicit_sets(X, std::move(elements));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("cover: ") + e.what());
  }
}

/// Straightening problem from JSON. Either a built-in generator
///   {"generator": "constant" | "sliding_dirac" | "two_ball" | "spread", "n": 1, "r": 1.5}
/// or explicit data
///   {"points": [[...], ...]} or {"distances": [[...], ...]},
///   "cover": {"kind": "ball" | "explicit", "r": ..., "elements": [[...], ...]},
///   "n": 1, "resolution": 2, "vertex_measures": [measure, ...]
/// where the vertex measures are listed in lexicographic lattice order and
/// are interpolated simplexwise.
inline Benchmark benchmark_from_json(const json& j) {
  try {
    const int n = j.value("n", 1);
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    if (j.contains("generator")) {
      const auto name = j.at("generator").get<std::string>();
      if (name == "constant") return constant_benchmark(n);
      if (name == "sliding_dirac") return sliding_dirac_benchmark(n, j.value("m", 3), j.value("r", 1.5));
      if (name == "two_ball") return two_ball_benchmark(n);
      if (name == "spread") return spread_benchmark(n, j.value("r", 0.5));
      throw Error(ErrorKind::InvalidArgument, "unknown generator '" + name + "'");
    }
    std::shared_ptr<const FiniteMetricSpace> X;
    if (j.contains("points")) {
      X = std::make_shared<const FiniteMetricSpace>(metric_from_points(j.at("points").get<std::vector<std::vector<double>>>()));
    } else {
      X = std::make_shared<const FiniteMetricSpace>(validate_metric(j.at("distances").get<std::vector<std::vector<double>>>()));
    }
    const auto& cj = j.at("cover");
    const auto kind = cj.at("kind").get<std::string>();
    Cover cov = kind == "ball"       ? Cover::balls(*X, cj.at("r").get<double>())
                : kind == "explicit" ? cover_from_json(*X, cj.at("elements"))
                                     : throw Error(ErrorKind::InvalidArgument, "cover kind must be ball or explicit");
    FKTriangulation tri(n, j.at("resolution").get<int>());
    std::vector<FiniteMeasure> values;
    for (const auto& m : j.at("vertex_measures")) {
      values.push_back(measure_from_json(m));
      values.back().check_space(*X);
    }
    SimplexwiseAffineMap affine(tri, std::move(values));
    return {"vertex_measures", n, X, cov, affine.as_source()};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("map spec: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Freudenthal-Kuhn exports

/// OFF mesh, vertices in lexicographic lattice order. n <= 3 uses the plain
/// "OFF" header with coordinates padded to 3D; n = 4 uses "4OFF". Each cell
/// line lists its n + 1 vertex indices.
inline void write_off(const FKTriangulation& tri, std::ostream& out) {
  const int n = tri.dimension();
  if (n > 4) throw Error(ErrorKind::InvalidArgument, "OFF export supports n <= 4");
  const int coords = n <= 3 ? 3 : 4;
  out << (n <= 3 ? "OFF" : "4OFF") << '\n';
  out << tri.vertex_count() << ' ' << tri.simplex_count() << " 0\n";
  char buf[64];
  for (std::uint64_t k = 0; k < tri.vertex_count(); ++k) {
    const auto y = tri.point(tri.vertex_at(k));
    for (int c = 0; c < coords; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", c < n ? y[static_cast<std::size_t>(c)] : 0.0);
      out << (c ? " " : "") << buf;
    }
    out << '\n';
  }
  tri.for_each_simplex([&](std::uint64_t, const FKSimplex& s) {
    out << n + 1;
    for (const auto& v : s.vertices()) out << ' ' << tri.vertex_index(v);
    out << '\n';
  });
}

/// Simplex count, largest vertex star and largest simplex diameter, all by
/// enumeration.
inline nlohmann::ordered_json fk_certificate(const FKTriangulation& tri) {
  std::size_t max_star = 0;
  for (std::uint64_t k = 0; k < tri.vertex_count(); ++k)
    max_star = std::max(max_star, tri.vertex_star_size(tri.vertex_at(k)));
  double max_diameter = 0.0;
  tri.for_each_simplex([&](std::uint64_t, const FKSimplex& s) {
    const auto vs = s.vertices();
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a + 1; b < vs.size(); ++b) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < vs[a].size(); ++i) {
          const double diff = static_cast<double>(vs[a][i] - vs[b][i]) / tri.resolution();
          d2 += diff * diff;
        }
        max_diameter = std::max(max_diameter, std::sqrt(d2));
      }
  });
  nlohmann::ordered_json j;
  j["n"] = tri.dimension();
  j["resolution"] = tri.resolution();
  j["simplex_count"] = tri.simplex_count();
  j["vertex_count"] = tri.vertex_count();
  j["max_star"] = max_star;
  j["star_bound"] = star_bound(tri.dimension());
  j["max_diameter"] = max_diameter;
  j["diameter_formula"] = tri.simplex_diameter();
  return j;
}

// ---------------------------------------------------------------------------
// Persistence diagram plot

/// Static SVG scatter plot of a diagram: one colour per dimension, the
/// diagonal, and essential classes drawn on a dashed line at the top.
inline void write_diagram_svg(const PersistenceDiagram& D, std::ostream& out) {
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  double top = 0.0;
  for (const auto& iv : D.intervals()) {
    top = std::max(top, iv.birth);
    if (!iv.essential()) top = std::max(top, iv.death);
  }
  if (top <= 0.0) top = 1.0;
  const double size = 400.0, margin = 40.0, inf_line = top * 1.1;
  auto px = [&](double v) { return margin + v / inf_line * (size - 2 * margin); };
  auto py = [&](double v) { return size - margin - v / inf_line * (size - 2 * margin); };
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  out << "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"black\"/>\n", px(0),
                py(0), px(inf_line), py(inf_line));
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
                px(0), py(inf_line), px(inf_line), py(inf_line));
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.3f\" y=\"%.3f\" font-size=\"12\">inf</text>\n", px(0) - 30,
                py(inf_line) + 4);
  out << buf;
  for (const auto& iv : D.intervals()) {
    const double y = iv.essential() ? inf_line : iv.death;
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"%s\"><title>H%d (%.6g, %s)</title></circle>\n",
                  px(iv.birth), py(y), colours[std::min(iv.dim, 4)], iv.dim, iv.birth,
                  iv.essential() ? "inf" : std::to_string(iv.death).c_str());
    out << buf;
  }
  for (int d = 0; d <= std::min(D.max_dimension(), 4); ++d) {
    std::snprintf(buf, sizeof buf, "<text x=\"%.3f\" y=\"%.3f\" font-size=\"12\" fill=\"%s\">H%d</text>\n",
                  size - margin - 10, margin + 14.0 * (d + 1), colours[d], d);
    out << buf;
  }
  out << "</svg>\n";
}

}  // namespace vkit::io
