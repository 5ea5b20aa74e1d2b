#include "biharm/harness.hpp"
#include "support.hpp"

#include <gtest/gtest.h>
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace biharm;
using namespace biharm::testing;

namespace {

RunConfig small_run(const char* json) { return parse_run_config(json); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

double laplacian_of_laplacian_fd(const AnalyticFunction& u, const Point& x, double h) {
  auto lap = [&](const Point& p) { return u(p).hessian.trace(); };
  // Fourth-order central differences of the exact Laplacian.
  auto second = [&](const Point& dir) {
    return (-lap(x + 2 * h * dir) + 16 * lap(x + h * dir) - 30 * lap(x) + 16 * lap(x - h * dir) -
            lap(x - 2 * h * dir)) /
           (12 * h * h);
  };
  return second(Point(1, 0)) + second(Point(0, 1));
}

}  // namespace

TEST(Config, FullDocument) {
  const RunConfig c = parse_run_config(R"({
    // comments are allowed
    "mesh": {"kind": "square", "n": 3, "levels": 2},
    "scheme": {"tag": ["dg", "c0ip"], "theta": 0.5, "sigma1": 40, "sigma2": 30, "sigmaIP": 25},
    "load": {"density": "u2"},
    "quad": {"order": 9},
    "output": {"csv": "out.csv", "json": "out.json"}
  })");
  EXPECT_EQ(c.mesh.n, 3);
  EXPECT_EQ(c.mesh.levels, 2);
  ASSERT_EQ(c.schemes.size(), 2u);
  EXPECT_EQ(c.schemes[0].scheme, SchemeTag::Dg);
  EXPECT_EQ(c.schemes[1].scheme, SchemeTag::C0ip);
  EXPECT_EQ(c.schemes[1].theta, 0.5);
  EXPECT_EQ(c.schemes[0].sigma1, 40);
  EXPECT_EQ(c.schemes[0].sigma2, 30);
  EXPECT_EQ(c.schemes[0].sigma_ip, 25);
  EXPECT_EQ(c.load.solution, "u2");
  EXPECT_EQ(c.quad_order, 9);
  EXPECT_EQ(c.output.csv, "out.csv");
  EXPECT_TRUE(c.has_exact_solution());
}

TEST(Config, DefaultsAndPointLoads) {
  const RunConfig d = parse_run_config("{}");
  EXPECT_EQ(d.schemes.size(), 1u);
  EXPECT_EQ(d.schemes[0].scheme, SchemeTag::Morley);
  EXPECT_EQ(d.load.solution, "u1");
  const RunConfig p = parse_run_config(R"({"load": {"points": [{"weight": 2, "at": [0.5, 0.25]}]}})");
  EXPECT_FALSE(p.has_exact_solution());
  ASSERT_EQ(p.load.points.size(), 1u);
  EXPECT_EQ(p.load.points[0].weight, 2.0);
  EXPECT_EQ(p.load.points[0].location, Point(0.5, 0.25));
}

TEST(Config, Rejections) {
  for (const char* bad : {
           "{",
           R"({"meshes": {}})",
           R"({"mesh": {"kind": "circle"}})",
           R"({"mesh": {"levels": 0}})",
           R"({"mesh": {"levels": 9}})",
           R"({"mesh": {"n": 0}})",
           R"({"mesh": {"kind": "file"}})",
           R"({"mesh": {"n": "four"}})",
           R"({"scheme": {"tag": "argyris"}})",
           R"({"scheme": {"theta": 2}})",
           R"({"scheme": {"sigma1": -1}})",
           R"({"load": {"density": "u9"}})",
           R"({"load": {"points": [{"weight": 1}]}})",
           R"({"load": {"points": [{"at": [1]}]}})",
           R"({"quad": {"order": 2}})",
           R"({"output": {"png": "x"}})",
       }) {
    EXPECT_THROW(parse_run_config(bad), ConfigError) << bad;
  }
}

TEST(Harness, EocDefinition) {
  EXPECT_NEAR(*eoc(4.0, 1.0, 0.2, 0.1), 2.0, 1e-14);
  EXPECT_NEAR(*eoc(1.0, 0.5, 1.0, 0.25), 0.5, 1e-14);
  EXPECT_FALSE(eoc(1e-14, 1e-15, 0.2, 0.1).has_value());
  EXPECT_FALSE(eoc(1.0, 0.0, 0.2, 0.1).has_value());
}

TEST(Harness, ManufacturedLoadIsBilaplacian) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> d(0.05, 0.95);
  for (const std::string& name : manufactured_names()) {
    const AnalyticFunction u = manufactured_solution(name);
    if (!u.bilaplacian) continue;
    for (int k = 0; k < 20; ++k) {
      const Point x(d(rng), d(rng));
      const double exact = u.bilaplacian(x);
      const double fd = laplacian_of_laplacian_fd(u, x, 1e-3);
      EXPECT_NEAR(fd, exact, 1e-5 * (1 + std::abs(exact))) << name;
    }
  }
  EXPECT_THROW(manufactured_solution("nope"), ConfigError);
}

TEST(Harness, ManufacturedSolutionsAreClamped) {
  for (const char* name : {"u1", "u2"}) {
    const AnalyticFunction u = manufactured_solution(name);
    for (double s : {0.0, 0.3, 0.77, 1.0}) {
      for (const Point& x : {Point(s, 0), Point(s, 1), Point(0, s), Point(1, s)}) {
        EXPECT_NEAR(u(x).value, 0.0, 1e-15);
        EXPECT_NEAR(u(x).gradient.norm(), 0.0, 1e-14);
      }
    }
  }
}

TEST(Harness, HierarchyFromSquareAndFile) {
  MeshConfig m;
  m.n = 2;
  m.levels = 3;
  const auto h = build_hierarchy(m, 1);
  ASSERT_EQ(h.size(), 4u);
  for (std::size_t k = 1; k < h.size(); ++k) EXPECT_EQ(h[k]->num_triangles(), 4 * h[k - 1]->num_triangles());
  const std::filesystem::path path = std::filesystem::temp_directory_path() / "biharm_test_mesh.txt";
  std::ofstream(path) << write_mesh(unit_square_mesh(2));
  MeshConfig f;
  f.kind = "file";
  f.path = path.string();
  f.levels = 2;
  const auto hf = build_hierarchy(f);
  ASSERT_EQ(hf.size(), 2u);
  EXPECT_EQ(write_mesh(*hf[1]), write_mesh(*h[1]));
  f.path = "/nonexistent/mesh.txt";
  EXPECT_THROW(build_hierarchy(f), Error);
}

TEST(Harness, ConvergenceReportShape) {
  const RunConfig c = small_run(R"({"mesh": {"n": 2, "levels": 3}, "scheme": {"tag": ["morley", "wopsip"]}})");
  const ConvergenceReport r = run_convergence(c);
  EXPECT_TRUE(r.complete());
  EXPECT_FALSE(r.reference_solution);
  ASSERT_EQ(r.schemes.size(), 2u);
  for (const SchemeReport& s : r.schemes) {
    ASSERT_EQ(s.levels.size(), 3u);
    EXPECT_FALSE(s.eoc_energy[0].has_value());
    for (std::size_t k = 1; k < 3; ++k) {
      EXPECT_LT(s.levels[k].hmax, s.levels[k - 1].hmax);
      EXPECT_GT(s.levels[k].ndof, s.levels[k - 1].ndof);
      EXPECT_LT(s.levels[k].errors.norm_scheme, s.levels[k - 1].errors.norm_scheme);
      EXPECT_TRUE(s.eoc_energy[k].has_value());
      EXPECT_TRUE(s.eoc_h1[k].has_value());
    }
  }
  EXPECT_TRUE(r.schemes[1].levels[0].cp_energy.has_value() == false);
  const std::string csv = to_csv(r.schemes[0]);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "level,hmax,ndof,energy_pw,jump,norm_h,norm_scheme,l2,h1_pw,h1_star,best_approx,eoc_energy,eoc_h1");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_THROW(run_convergence(small_run(R"({"mesh": {"levels": 1}})")), ConfigError);
}

TEST(Harness, WopsipMonitors) {
  const ConvergenceReport r = run_wopsip(small_run(R"({"mesh": {"n": 2, "levels": 3}})"));
  ASSERT_EQ(r.schemes.size(), 1u);
  EXPECT_EQ(r.schemes[0].config.scheme, SchemeTag::Wopsip);
  double previous = std::numeric_limits<double>::infinity();
  for (const LevelResult& l : r.schemes[0].levels) {
    ASSERT_TRUE(l.cp_energy && l.scaled_interpolant);
    EXPECT_LT(*l.cp_energy, previous);
    previous = *l.cp_energy;
  }
}

TEST(Harness, ZeroLoadHasNoRates) {
  const ConvergenceReport r = run_convergence(small_run(R"({"mesh": {"n": 2, "levels": 2}, "load": {"density": "zero"}})"));
  const SchemeReport& s = r.schemes[0];
  EXPECT_FALSE(s.eoc_energy[1].has_value());
  EXPECT_FALSE(s.eoc_h1[1].has_value());
  const std::string csv = to_csv(s);
  EXPECT_NE(csv.find(",NA,NA\n"), std::string::npos) << csv;
}

TEST(Harness, DeterministicOutput) {
  const RunConfig c = small_run(R"({"mesh": {"n": 2, "levels": 2}, "scheme": {"tag": "dg"}})");
  EXPECT_EQ(to_csv(run_convergence(c).schemes[0]), to_csv(run_convergence(c).schemes[0]));
}

TEST(Harness, ComparisonAndPointLoads) {
  const ConvergenceReport r = run_comparison(small_run(R"({"mesh": {"n": 2, "levels": 2}, "scheme": {"tag": "wopsip"}})"));
  ASSERT_EQ(r.schemes.size(), 3u);
  ASSERT_EQ(r.comparison.size(), 2u);
  for (const ComparisonRow& row : r.comparison) {
    ASSERT_TRUE(row.best_approx.has_value());
    EXPECT_GE(row.spread, 1.0);
    EXPECT_GE(row.morley, *row.best_approx * (1 - 1e-9));
  }
  const ConvergenceReport p =
      run_convergence(small_run(R"({"mesh": {"n": 2, "levels": 2}, "load": {"points": [{"at": [0.5, 0.5]}]}})"));
  EXPECT_TRUE(p.reference_solution);
  EXPECT_TRUE(p.complete());
  EXPECT_TRUE(std::isnan(p.schemes[0].levels[0].errors.best_approx));
  EXPECT_NE(to_csv(p.schemes[0]).find("NA"), std::string::npos);
}

TEST(Harness, OutputsWritten) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "biharm_outputs";
  std::filesystem::create_directories(dir);
  RunConfig c = small_run(R"({"mesh": {"n": 2, "levels": 2}, "scheme": {"tag": ["morley", "c0ip"]}})");
  c.output.csv = (dir / "run.csv").string();
  c.output.json = (dir / "run.json").string();
  const ConvergenceReport r = run_convergence(c);
  write_outputs(c, r);
  EXPECT_EQ(csv_path_for("a/run.csv", SchemeTag::C0ip, true), "a/run_c0ip.csv");
  EXPECT_EQ(csv_path_for("a/run.csv", SchemeTag::C0ip, false), "a/run.csv");
  EXPECT_EQ(slurp(dir / "run_morley.csv"), to_csv(r.schemes[0]));
  EXPECT_EQ(slurp(dir / "run_c0ip.csv"), to_csv(r.schemes[1]));
  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "run.json"));
  EXPECT_EQ(j.at("kind"), r.kind);
  EXPECT_EQ(j.at("schemes").size(), 2u);
}

TEST(Harness, VerificationSuitePasses) {
  for (const CheckResult& c : run_verification()) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}
