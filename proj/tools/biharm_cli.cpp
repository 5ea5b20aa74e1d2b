#include "biharm/harness.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace biharm;

namespace {

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

std::string fmt(const std::optional<double>& x) {
  if (!x) return "      -";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%7.3f", *x);
  return buf;
}

void print_report(const ConvergenceReport& report) {
  for (const SchemeReport& s : report.schemes) {
    std::printf("%s%s\n", std::string(to_string(s.config.scheme)).c_str(),
                report.reference_solution ? " (errors against a finer Morley reference)" : "");
    std::printf("%5s %10s %8s %12s %12s %12s %12s %7s %7s\n", "level", "hmax", "ndof", "norm_h", "norm_scheme",
                "h1_star", "best", "eoc_e", "eoc_h1");
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
      const LevelResult& r = s.levels[k];
      std::printf("%5d %10.4e %8ld %12.5e %12.5e %12.5e %12.5e %s %s\n", r.level, r.hmax, static_cast<long>(r.ndof),
                  r.errors.norm_h, r.errors.norm_scheme, r.errors.h1_star, r.errors.best_approx,
                  fmt(s.eoc_energy[k]).c_str(), fmt(s.eoc_h1[k]).c_str());
    }
    if (!s.complete) std::printf("  aborted: %s\n", s.failure.c_str());
  }
  if (!report.comparison.empty()) {
    std::printf("comparison\n%5s %12s %12s %12s %12s %8s\n", "level", "morley", "dg", "c0ip", "best", "spread");
    for (const ComparisonRow& c : report.comparison) {
      std::printf("%5d %12.5e %12.5e %12.5e %12.5e %8.3f\n", c.level, c.morley, c.dg, c.c0ip,
                  c.best_approx.value_or(std::nan("")), c.spread);
    }
  }
}

int verify() {
  int failures = 0;
  for (const CheckResult& r : run_verification()) {
    std::printf("%s  %s (%s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    failures += r.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

int solve_once(RunConfig config, const std::string& export_matrix) {
  config.mesh.levels = 1;
  const auto hierarchy = build_hierarchy(config.mesh);
  const Smoother smoother(hierarchy.front());
  LoadSpec load;
  load.quad_order = config.quad_order;
  if (!config.load.solution.empty()) load = manufactured_load(manufactured_solution(config.load.solution), config.quad_order);
  load.points = config.load.points;
  for (SchemeConfig s : config.schemes) {
    s.quad_order = config.quad_order;
    const Solution sol = solve_scheme(smoother, s, load);
    std::printf("%s: ndof %ld, solver %s, residual %.3e\n", std::string(to_string(s.scheme)).c_str(),
                static_cast<long>(sol.uh.space->dimension()), sol.stats.method.c_str(), sol.stats.residual);
    if (config.has_exact_solution()) {
      const ErrorReport e = compute_errors(manufactured_solution(config.load.solution), sol, config.quad_order);
      std::printf("  norm_h %.6e  norm_scheme %.6e  h1_star %.6e  best_approx %.6e\n", e.norm_h, e.norm_scheme,
                  e.h1_star, e.best_approx);
    }
    if (!export_matrix.empty()) {
      const std::string path = csv_path_for(export_matrix, s.scheme, config.schemes.size() > 1);
      std::ofstream out(path);
      if (!out) throw Error("cannot write '" + path + "'");
      write_coordinate(out, sol.matrix);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lowest-order solvers for the clamped biharmonic plate"};
  bool run_verify = false;
  app.add_flag("--verify", run_verify, "Run the invariant suite; nonzero exit on failure");

  std::string config_path;
  std::string export_matrix;
  auto* solve = app.add_subcommand("solve", "Solve on one mesh");
  solve->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  solve->add_option("--export-matrix", export_matrix, "Write the system matrix as 1-based 'i j value' lines");
  auto* converge = app.add_subcommand("converge", "Convergence study under uniform refinement");
  converge->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  auto* compare = app.add_subcommand("compare", "Morley, dG and C0IP errors side by side");
  compare->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  auto* wopsip = app.add_subcommand("wopsip", "WOPSIP convergence study");
  wopsip->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.require_subcommand(0, 1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_verify) return verify();
    if (app.get_subcommands().empty()) {
      std::cout << app.help();
      return 2;
    }
    const RunConfig config = load_config(config_path);
    if (*solve) return solve_once(config, export_matrix);
    ConvergenceReport report;
    if (*converge) report = run_convergence(config);
    if (*compare) report = run_comparison(config);
    if (*wopsip) report = run_wopsip(config);
    print_report(report);
    write_outputs(config, report);
    return report.complete() ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
