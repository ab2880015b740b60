#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "vkit/io.hpp"

using namespace vkit;

namespace {

std::vector<std::vector<double>> csv(const std::string& text) {
  std::istringstream in(text);
  return io::read_csv(in);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("read_csv") {
  CHECK(csv("x,y\n0,0\n1, 2.5\n") == std::vector<std::vector<double>>{{0, 0}, {1, 2.5}});
  CHECK(csv("# comment\n\n1 2\r\n3 4\n") == std::vector<std::vector<double>>{{1, 2}, {3, 4}});
  CHECK(kind_of([] { csv(""); }) == ErrorKind::Parse);
  CHECK(kind_of([] { csv("a,b\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { csv("1,2\nfoo,3\n"); }) == ErrorKind::Parse);
  // A malformed first line reads as a header; later ones are errors.
  CHECK(csv("1,2x\n3,4\n") == std::vector<std::vector<double>>{{3, 4}});
  CHECK(kind_of([] { csv("1,2\n3,4x\n"); }) == ErrorKind::Parse);
}

TEST_CASE("JSON round trips") {
  const FiniteMeasure mu({3, 1}, {0.25, 0.75});
  CHECK(io::measure_from_json(io::to_json(mu)) == mu);
  CHECK(kind_of([] { io::measure_from_json(nlohmann::json{{"support", {0}}}); }) == ErrorKind::Parse);

  const auto X = metric_from_points({{0.0}, {1.0}, {2.0}});
  const auto cov = io::cover_from_json(X, nlohmann::json::parse("[[0,1],[1,2]]"));
  CHECK(cov.element_count() == 2);
  CHECK(cov.element(1) == PointSet{1, 2});
}

TEST_CASE("benchmark_from_json") {
  const auto g = io::benchmark_from_json(nlohmann::json{{"generator", "sliding_dirac"}, {"n", 2}});
  CHECK(g.n == 2);
  CHECK(kind_of([] { io::benchmark_from_json(nlohmann::json{{"generator", "nope"}}); }) == ErrorKind::InvalidArgument);

  const auto spec = nlohmann::json::parse(R"({
    "points": [[0], [1], [2]],
    "cover": {"kind": "explicit", "elements": [[0, 1], [1, 2]]},
    "n": 1, "resolution": 1,
    "vertex_measures": [{"support": [0], "weights": [1]}, {"support": [0, 1], "weights": [0.5, 0.5]}]
  })");
  const auto b = io::benchmark_from_json(spec);
  CHECK(b.space->size() == 3);
  const std::vector<double> mid{0.5};
  const auto m = b.source(mid);
  CHECK(m.weight(0) == Catch::Approx(0.75));
  CHECK(m.weight(1) == Catch::Approx(0.25));

  auto bad = spec;
  bad["vertex_measures"][1]["support"] = {0, 7};
  CHECK_THROWS_AS(io::benchmark_from_json(bad), Error);
  bad = spec;
  bad.erase("cover");
  CHECK(kind_of([&] { io::benchmark_from_json(bad); }) == ErrorKind::Parse);
}

TEST_CASE("FK exports") {
  const FKTriangulation tri(2, 2);
  std::ostringstream off;
  io::write_off(tri, off);
  std::istringstream in(off.str());
  std::string header;
  std::size_t nv = 0, nf = 0, ne = 0;
  in >> header >> nv >> nf >> ne;
  CHECK(header == "OFF");
  CHECK(nv == 9);
  CHECK(nf == 8);
  CHECK(ne == 0);

  const auto cert = io::fk_certificate(tri);
  CHECK(cert["simplex_count"] == 8);
  CHECK(cert["max_star"] == 6);
  CHECK(cert["max_diameter"].get<double>() == Catch::Approx(std::sqrt(2.0) / 2).margin(1e-12));
  CHECK(cert["diameter_formula"].get<double>() == Catch::Approx(std::sqrt(2.0) / 2).margin(1e-12));
}

TEST_CASE("diagram SVG") {
  std::ostringstream out;
  io::write_diagram_svg(PersistenceDiagram({{0, 0, kInf}, {1, 1, 1.5}}), out);
  const auto s = out.str();
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("H1 (1, 1.5") != std::string::npos);
}
