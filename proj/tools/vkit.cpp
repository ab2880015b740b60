// vkit: persistence diagrams, Freudenthal-Kuhn meshes, straightening runs and
// the randomized property suites from the command line.
//
// Exit codes: 0 ok, 1 property failure, 2 input error, 3 pipeline stage failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vkit/complex.hpp"
#include "vkit/error.hpp"
#include "vkit/fk.hpp"
#include "vkit/generators.hpp"
#include "vkit/io.hpp"
#include "vkit/persistence.hpp"
#include "vkit/random.hpp"
#include "vkit/straighten.hpp"
#include "vkit/verify.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kInputError = 2, kStageFailure = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw InputError("cannot write " + (dir / name).string());
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return in;
}

vkit::FiniteMetricSpace load_space(const std::string& path, const std::string& format) {
  auto in = open_in(path);
  const auto rows = vkit::io::read_csv(in);
  return format == "matrix" ? vkit::validate_metric(rows) : vkit::metric_from_points(rows);
}

// ---------------------------------------------------------------------------

struct PersistArgs {
  std::string input, format = "points", filtration = "vr", out = ".";
  double r = vkit::kInf;
  int kmax = 2;
  std::optional<int> maxdim;
};

int cmd_persist(const PersistArgs& a) {
  const auto X = load_space(a.input, a.format);
  const auto K = a.filtration == "cech" ? vkit::build_cech(X, a.r, a.kmax) : vkit::build_vr(X, a.r, a.kmax);
  const int maxdim = a.maxdim.value_or(a.kmax - 1);
  const auto D = vkit::compute_diagram(K, maxdim);
  auto csv = open_out(a.out, "diagram.csv");
  D.write_csv(csv);
  auto svg = open_out(a.out, "diagram.svg");
  vkit::io::write_diagram_svg(D, svg);
  std::cout << X.size() << " points, " << K.size() << " simplices, " << D.size() << " intervals\n";
  if (X.is_pseudometric()) std::cout << "note: input has coincident points\n";
  for (const auto& iv : D.intervals()) {
    if (iv.essential())
      std::printf("H%d  %.17g  inf\n", iv.dim, iv.birth);
    else
      std::printf("H%d  %.17g  %.17g\n", iv.dim, iv.birth, iv.death);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct FkArgs {
  int n = 2, res = 2;
  std::string out = ".";
};

int cmd_fk(const FkArgs& a) {
  if (a.n < 1 || a.res < 1) throw InputError("--n and --res must be >= 1");
  if (a.n > 4) throw InputError("mesh export supports n <= 4");
  const double simplices = static_cast<double>(vkit::factorial(a.n)) * std::pow(a.res, a.n);
  if (simplices > 1e6) throw InputError("n!*res^n = " + std::to_string(simplices) + " exceeds the 1e6 simplex guard");
  const vkit::FKTriangulation tri(a.n, a.res);
  auto off = open_out(a.out, "fk.off");
  vkit::io::write_off(tri, off);
  const auto cert = vkit::io::fk_certificate(tri);
  auto js = open_out(a.out, "fk_certificate.json");
  js << cert.dump(2) << '\n';
  std::cout << cert.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct StraightenArgs {
  std::string input, generator, out = ".";
  int n = 1, depth = 3;
  std::optional<int> res;
  std::optional<double> pmass;
  double r = -1.0;
};

int cmd_straighten(const StraightenArgs& a) {
  nlohmann::json spec;
  if (!a.input.empty()) {
    auto in = open_in(a.input);
    try {
      spec = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(a.input + ": " + e.what());
    }
  } else if (!a.generator.empty()) {
    spec = {{"generator", a.generator}, {"n", a.n}};
    if (a.r > 0) spec["r"] = a.r;
  } else {
    throw InputError("one of --input or --generator is required");
  }
  const auto bench = vkit::io::benchmark_from_json(spec);

  vkit::StraightenOptions opt;
  opt.depth = a.depth;
  opt.resolution = a.res;
  opt.p_mass = a.pmass;
  const auto result = vkit::straighten(*bench.space, bench.cover, bench.source, bench.n, opt);

  auto log = open_out(a.out, "certification.jsonl");
  result.log.write_jsonl(log);

  nlohmann::ordered_json summary;
  summary["benchmark"] = bench.name;
  summary["n"] = bench.n;
  summary["ok"] = result.ok;
  summary["failed_stage"] = result.failed_stage;
  summary["message"] = result.message;
  summary["p_mass"] = result.p_mass;
  summary["resolution"] = result.resolution;
  summary["checks"] = result.log.records().size();
  summary["passed"] = result.log.passed();
  summary["failed"] = result.log.failed();
  nlohmann::ordered_json stages = nlohmann::ordered_json::object();
  for (const auto& r : result.log.records()) {
    auto& s = stages[r.stage];
    if (s.is_null()) s = {{"passed", 0}, {"failed", 0}};
    s[r.pass ? "passed" : "failed"] = s[r.pass ? "passed" : "failed"].get<int>() + 1;
  }
  summary["stages"] = stages;
  if (result.map) {
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (const auto& mu : result.map->vertex_values()) values.push_back({{"support", mu.support()}, {"weights", mu.weights()}});
    summary["vertex_measures"] = values;
  }
  auto js = open_out(a.out, "summary.json");
  js << summary.dump(2) << '\n';

  std::cout << bench.name << " n=" << bench.n << ": " << result.log.passed() << " checks passed, "
            << result.log.failed() << " failed";
  if (result.ok) {
    std::cout << ", resolution " << result.resolution << '\n';
    return kOk;
  }
  std::cout << '\n';
  std::cerr << "stage '" << result.failed_stage << "' failed: " << result.message << '\n';
  return kStageFailure;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t seed = vkit::random::kDefaultSeed;
  std::size_t trials = 100;
  std::string input, format = "points";
};

int cmd_verify(const VerifyArgs& a) {
  if (!a.input.empty()) {
    const auto X = load_space(a.input, a.format);
    std::cout << "input metric: " << X.size() << " points, valid" << (X.is_pseudometric() ? " (pseudometric)" : "")
              << '\n';
  }
  if (a.trials == 0) std::cerr << "warning: --trials 0 runs no randomized checks; the pass is vacuous\n";
  const auto results = vkit::verify::run_all(a.seed, a.trials);
  std::printf("%-22s %8s %9s\n", "suite", "trials", "failures");
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%-22s %8zu %9zu%s\n", r.name.c_str(), r.trials, r.failures,
                r.passed() ? "" : ("  first: " + r.first_failure).c_str());
    ok = ok && r.passed();
  }
  std::cout << (ok ? "all suites passed" : "property failures detected") << " (seed " << a.seed << ")\n";
  return ok ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vkit: Vietoris-Rips, Wasserstein and Freudenthal-Kuhn toolkit"};
  app.require_subcommand(1);

  PersistArgs pa;
  auto* persist = app.add_subcommand("persist", "Persistence diagram of a VR or Cech filtration");
  persist->add_option("--input", pa.input, "CSV point cloud or distance matrix")->required();
  persist->add_option("--format", pa.format, "points or matrix")->check(CLI::IsMember({"points", "matrix"}));
  persist->add_option("--filtration", pa.filtration, "vr or cech")->check(CLI::IsMember({"vr", "cech"}));
  persist->add_option("--r", pa.r, "Threshold: simplices with value < r (default inf)");
  persist->add_option("--kmax", pa.kmax, "Skeleton dimension")->check(CLI::NonNegativeNumber);
  persist->add_option("--maxdim", pa.maxdim, "Largest homology dimension (default kmax - 1)");
  persist->add_option("--seed", "Accepted for uniformity; the computation is deterministic");
  persist->add_option("--out", pa.out, "Output directory");

  FkArgs fa;
  auto* fk = app.add_subcommand("fk", "Freudenthal-Kuhn mesh and certificate");
  fk->add_option("--n", fa.n, "Dimension (<= 4)");
  fk->add_option("--res", fa.res, "Cells per axis");
  fk->add_option("--out", fa.out, "Output directory");

  StraightenArgs sa;
  auto* st = app.add_subcommand("straighten", "Straighten a map into the Vietoris complex");
  st->add_option("--input", sa.input, "Map spec JSON");
  st->add_option("--generator", sa.generator, "Built-in map: constant, sliding_dirac, two_ball, spread");
  st->add_option("--n", sa.n, "Cube dimension for generators");
  st->add_option("--r", sa.r, "Ball radius for generators that take one");
  st->add_option("--res", sa.res, "Fixed triangulation resolution (default: search)");
  st->add_option("--pmass", sa.pmass, "Mass threshold p (default 1 - 1/(2^(n+1) n!))");
  st->add_option("--depth", sa.depth, "Sample depth per simplex")->check(CLI::PositiveNumber);
  st->add_option("--seed", "Accepted for uniformity; the pipeline is deterministic");
  st->add_option("--out", sa.out, "Output directory");

  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "Run the randomized property suites");
  ve->add_option("--seed", va.seed, "RNG seed");
  ve->add_option("--trials", va.trials, "Trials per suite");
  ve->add_option("--input", va.input, "Also validate this metric (CSV)");
  ve->add_option("--format", va.format, "points or matrix")->check(CLI::IsMember({"points", "matrix"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*persist) return cmd_persist(pa);
    if (*fk) return cmd_fk(fa);
    if (*st) return cmd_straighten(sa);
    if (*ve) return cmd_verify(va);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const vkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
