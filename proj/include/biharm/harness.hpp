#pragma once

#include "biharm/norms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace biharm {

struct MeshConfig {
  /// "square" (unit square, n x n cells) or "file" (ASCII mesh at `path`).
  std::string kind = "square";
  int n = 4;
  int levels = 4;
  std::string path;
};

struct LoadConfig {
  /// Manufactured solution whose bilaplacian is the density; empty for point loads only.
  std::string solution = "u1";
  std::vector<PointLoad> points;
};

struct OutputConfig {
  std::string csv;
  std::string json;
};

struct RunConfig {
  MeshConfig mesh;
  std::vector<SchemeConfig> schemes{SchemeConfig{}};
  LoadConfig load;
  int quad_order = 7;
  OutputConfig output;

  /// True when the load is the bilaplacian of a known solution (no point loads).
  bool has_exact_solution() const { return !load.solution.empty() && load.points.empty(); }
  void validate() const;
};

/// Parse the JSON run configuration. Unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text);

struct LevelResult {
  int level = 0;
  double hmax = 0.0;
  Index ndof = 0;
  ErrorReport errors;
  SolverStats stats;
  Timings timings;
  /// |||h_T I_M u|||_pw and c_P(u_P, u_P); WOPSIP runs only.
  std::optional<double> scaled_interpolant;
  std::optional<double> cp_energy;
};

struct SchemeReport {
  SchemeConfig config;
  std::vector<LevelResult> levels;
  /// Entry k compares levels k-1 and k; entry 0 and degenerate pairs are empty.
  std::vector<std::optional<double>> eoc_energy;
  std::vector<std::optional<double>> eoc_h1;
  bool complete = true;
  std::string failure;
};

struct ComparisonRow {
  int level = 0;
  double morley = 0.0;
  double dg = 0.0;
  double c0ip = 0.0;
  /// Absent for point loads (no exact solution).
  std::optional<double> best_approx;
  /// max / min over the available quantities.
  double spread = 0.0;
};

struct ConvergenceReport {
  std::string kind;
  bool reference_solution = false;
  std::vector<SchemeReport> schemes;
  std::vector<ComparisonRow> comparison;

  bool complete() const;
};

inline constexpr double kEocFloor = 1e-13;

/// log(e_coarse / e_fine) / log(h_coarse / h_fine), empty unless both errors exceed kEocFloor.
std::optional<double> eoc(double e_coarse, double e_fine, double h_coarse, double h_fine);

/// The level-0 mesh of a configuration and its uniform refinements.
std::vector<std::shared_ptr<const Triangulation>> build_hierarchy(const MeshConfig& mesh, int extra_levels = 0);

ConvergenceReport run_convergence(const RunConfig& config);
/// Morley, dG and C0IP side by side with the best-approximation column.
ConvergenceReport run_comparison(const RunConfig& config);
ConvergenceReport run_wopsip(const RunConfig& config);

std::string to_csv(const SchemeReport& report);
std::string to_json(const ConvergenceReport& report);

/// CSV path for one scheme: `path` itself for a single scheme, else `<stem>_<scheme><ext>`.
std::string csv_path_for(const std::string& path, SchemeTag scheme, bool multiple);
/// Write the CSV and JSON outputs named in the configuration.
void write_outputs(const RunConfig& config, const ConvergenceReport& report);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant suite behind `--verify`.
std::vector<CheckResult> run_verification();

}  // namespace biharm
