#include "biharm/harness.hpp"

#include "biharm/quadrature.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <random>
#include <sstream>

namespace biharm {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; })) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
T get(const Json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

Point parse_point(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(where + ": expected [x, y]");
  }
  return Point(j[0].get<double>(), j[1].get<double>());
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : "NA"; }

OrderedJson optional_json(const std::optional<double>& x) { return x ? OrderedJson(*x) : OrderedJson(nullptr); }

}  // namespace

void RunConfig::validate() const {
  if (mesh.kind != "square" && mesh.kind != "file") throw ConfigError("mesh.kind must be 'square' or 'file'");
  if (mesh.kind == "square" && mesh.n < 1) throw ConfigError("mesh.n must be at least 1");
  if (mesh.kind == "file" && mesh.path.empty()) throw ConfigError("mesh.path is required for file meshes");
  if (mesh.levels < 1 || mesh.levels > 8) throw ConfigError("mesh.levels must lie in 1..8");
  if (schemes.empty()) throw ConfigError("no scheme selected");
  for (const SchemeConfig& s : schemes) s.validate();
  if (quad_order < 4) throw ConfigError("quad.order must be at least 4");
  if (load.solution.empty() && load.points.empty()) throw ConfigError("load: need a density or point loads");
  if (!load.solution.empty()) manufactured_solution(load.solution);
}

RunConfig parse_run_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(j, {"mesh", "scheme", "load", "quad", "output"}, "config");
  RunConfig config;

  if (j.contains("mesh")) {
    const Json& m = j["mesh"];
    check_keys(m, {"kind", "n", "levels", "path"}, "mesh");
    config.mesh.kind = get<std::string>(m, "kind", "mesh", config.mesh.kind);
    config.mesh.n = get<int>(m, "n", "mesh", config.mesh.n);
    config.mesh.levels = get<int>(m, "levels", "mesh", config.mesh.levels);
    config.mesh.path = get<std::string>(m, "path", "mesh", config.mesh.path);
  }

  if (j.contains("scheme")) {
    const Json& s = j["scheme"];
    check_keys(s, {"tag", "theta", "sigma1", "sigma2", "sigmaIP"}, "scheme");
    SchemeConfig base;
    base.theta = get<double>(s, "theta", "scheme", base.theta);
    base.sigma1 = get<double>(s, "sigma1", "scheme", base.sigma1);
    base.sigma2 = get<double>(s, "sigma2", "scheme", base.sigma2);
    base.sigma_ip = get<double>(s, "sigmaIP", "scheme", base.sigma_ip);
    std::vector<std::string> tags{"morley"};
    if (s.contains("tag")) {
      if (s["tag"].is_string()) {
        tags = {s["tag"].get<std::string>()};
      } else {
        tags = get<std::vector<std::string>>(s, "tag", "scheme", tags);
      }
    }
    config.schemes.clear();
    for (const std::string& tag : tags) {
      SchemeConfig c = base;
      c.scheme = scheme_from_string(tag);
      config.schemes.push_back(c);
    }
  }

  if (j.contains("load")) {
    const Json& l = j["load"];
    check_keys(l, {"density", "points"}, "load");
    config.load.solution = get<std::string>(l, "density", "load", l.contains("points") ? "" : "u1");
    if (l.contains("points")) {
      if (!l["points"].is_array()) throw ConfigError("load.points: expected an array");
      for (const Json& p : l["points"]) {
        check_keys(p, {"weight", "at"}, "load.points[]");
        if (!p.contains("at")) throw ConfigError("load.points[]: missing 'at'");
        config.load.points.push_back({get<double>(p, "weight", "load.points[]", 1.0), parse_point(p["at"], "load.points[].at")});
      }
    }
  }

  if (j.contains("quad")) {
    check_keys(j["quad"], {"order"}, "quad");
    config.quad_order = get<int>(j["quad"], "order", "quad", config.quad_order);
  }

  if (j.contains("output")) {
    check_keys(j["output"], {"csv", "json"}, "output");
    config.output.csv = get<std::string>(j["output"], "csv", "output", "");
    config.output.json = get<std::string>(j["output"], "json", "output", "");
  }
  config.validate();
  return config;
}

bool ConvergenceReport::complete() const {
  return std::all_of(schemes.begin(), schemes.end(), [](const SchemeReport& s) { return s.complete; });
}

std::optional<double> eoc(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > kEocFloor && e_fine > kEocFloor)) return std::nullopt;
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::vector<std::shared_ptr<const Triangulation>> build_hierarchy(const MeshConfig& mesh, int extra_levels) {
  std::vector<std::shared_ptr<const Triangulation>> meshes;
  if (mesh.kind == "file") {
    std::ifstream in(mesh.path);
    if (!in) throw ConfigError("cannot open mesh file '" + mesh.path + "'");
    std::stringstream text;
    text << in.rdbuf();
    meshes.push_back(std::make_shared<const Triangulation>(read_mesh(text.str()).mesh));
  } else {
    meshes.push_back(std::make_shared<const Triangulation>(unit_square_mesh(mesh.n)));
  }
  const int total = mesh.levels + extra_levels;
  while (static_cast<int>(meshes.size()) < total) {
    meshes.push_back(std::make_shared<const Triangulation>(refine_uniform(*meshes.back())));
  }
  return meshes;
}

namespace {

ConvergenceReport run_schemes(const RunConfig& config, const std::vector<SchemeConfig>& schemes,
                              const std::string& kind, bool wopsip_extras) {
  config.validate();
  ConvergenceReport report;
  report.kind = kind;
  const bool exact = config.has_exact_solution();
  report.reference_solution = !exact;

  std::optional<AnalyticFunction> u;
  LoadSpec load;
  load.quad_order = config.quad_order;
  if (!config.load.solution.empty()) {
    const AnalyticFunction sol = manufactured_solution(config.load.solution);
    load = manufactured_load(sol, config.quad_order);
    if (exact) u = sol;
  }
  load.points = config.load.points;

  const int reference_offset = exact ? 0 : 2;
  const auto hierarchy = build_hierarchy(config.mesh, reference_offset);

  for (const SchemeConfig& s : schemes) {
    SchemeReport r;
    r.config = s;
    report.schemes.push_back(r);
  }

  for (int level = 0; level < config.mesh.levels; ++level) {
    const auto& mesh = hierarchy[level];
    const Smoother smoother(mesh);
    std::optional<Solution> reference;
    std::vector<Index> ancestor;
    if (!exact) {
      const auto& fine = hierarchy[level + reference_offset];
      SchemeConfig morley;
      morley.quad_order = config.quad_order;
      reference = solve_scheme(fine, morley, load);
      ancestor = coarse_ancestors({hierarchy.begin() + level, hierarchy.begin() + level + reference_offset + 1});
    }
    for (SchemeReport& r : report.schemes) {
      if (!r.complete) continue;
      try {
        SchemeConfig s = r.config;
        s.quad_order = config.quad_order;
        const Solution sol = solve_scheme(smoother, s, load);
        LevelResult row;
        row.level = level;
        row.hmax = mesh->h_max();
        row.ndof = sol.uh.space->dimension();
        row.errors = exact ? compute_errors(*u, sol, config.quad_order)
                           : compute_reference_errors(*reference, sol, ancestor, config.quad_order);
        row.stats = sol.stats;
        row.timings = sol.timings;
        if (wopsip_extras) {
          row.cp_energy = cp_energy(*mesh, to_dg(sol.uh));
          if (u) row.scaled_interpolant = scaled_interpolant_energy(*u, mesh);
        }
        r.levels.push_back(row);
      } catch (const Error& e) {
        r.complete = false;
        r.failure = "level " + std::to_string(level) + ": " + e.what();
      }
    }
  }

  for (SchemeReport& r : report.schemes) {
    const bool use_scheme_norm = r.config.scheme == SchemeTag::Wopsip;
    r.eoc_energy.assign(r.levels.size(), std::nullopt);
    r.eoc_h1.assign(r.levels.size(), std::nullopt);
    for (std::size_t k = 1; k < r.levels.size(); ++k) {
      const LevelResult& a = r.levels[k - 1];
      const LevelResult& b = r.levels[k];
      const double ea = use_scheme_norm ? a.errors.norm_scheme : a.errors.norm_h;
      const double eb = use_scheme_norm ? b.errors.norm_scheme : b.errors.norm_h;
      r.eoc_energy[k] = eoc(ea, eb, a.hmax, b.hmax);
      r.eoc_h1[k] = eoc(a.errors.h1_star, b.errors.h1_star, a.hmax, b.hmax);
    }
  }
  return report;
}

}  // namespace

ConvergenceReport run_convergence(const RunConfig& config) {
  if (config.mesh.levels < 2) throw ConfigError("a convergence study needs at least 2 levels");
  return run_schemes(config, config.schemes, "convergence", false);
}

ConvergenceReport run_comparison(const RunConfig& config) {
  const SchemeConfig base = config.schemes.front();
  std::vector<SchemeConfig> schemes;
  for (SchemeTag tag : {SchemeTag::Morley, SchemeTag::Dg, SchemeTag::C0ip}) {
    SchemeConfig c = base;
    c.scheme = tag;
    schemes.push_back(c);
  }
  ConvergenceReport report = run_schemes(config, schemes, "comparison", false);
  const auto& m = report.schemes[0].levels;
  const auto& d = report.schemes[1].levels;
  const auto& c = report.schemes[2].levels;
  const std::size_t n = std::min({m.size(), d.size(), c.size()});
  for (std::size_t k = 0; k < n; ++k) {
    ComparisonRow row;
    row.level = m[k].level;
    row.morley = m[k].errors.norm_h;
    row.dg = d[k].errors.norm_h;
    row.c0ip = c[k].errors.norm_h;
    std::vector<double> values{row.morley, row.dg, row.c0ip};
    if (!report.reference_solution) {
      row.best_approx = m[k].errors.best_approx;
      values.push_back(*row.best_approx);
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    row.spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::quiet_NaN();
    report.comparison.push_back(row);
  }
  return report;
}

ConvergenceReport run_wopsip(const RunConfig& config) {
  if (config.mesh.levels < 2) throw ConfigError("a convergence study needs at least 2 levels");
  SchemeConfig s = config.schemes.front();
  s.scheme = SchemeTag::Wopsip;
  return run_schemes(config, {s}, "wopsip", true);
}

std::string to_csv(const SchemeReport& report) {
  std::ostringstream out;
  out << "level,hmax,ndof,energy_pw,jump,norm_h,norm_scheme,l2,h1_pw,h1_star,best_approx,eoc_energy,eoc_h1\n";
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    const LevelResult& r = report.levels[k];
    const ErrorReport& e = r.errors;
    out << r.level << ',' << format_number(r.hmax) << ',' << r.ndof << ',' << format_number(e.energy_pw) << ','
        << format_number(e.jump) << ',' << format_number(e.norm_h) << ',' << format_number(e.norm_scheme) << ','
        << format_number(e.l2) << ',' << format_number(e.h1_pw) << ',' << format_number(e.h1_star) << ','
        << format_number(e.best_approx) << ',' << format_optional(report.eoc_energy[k]) << ','
        << format_optional(report.eoc_h1[k]) << '\n';
  }
  return out.str();
}

std::string to_json(const ConvergenceReport& report) {
  OrderedJson j;
  j["kind"] = report.kind;
  j["reference_solution"] = report.reference_solution;
  j["complete"] = report.complete();
  j["schemes"] = OrderedJson::array();
  for (const SchemeReport& s : report.schemes) {
    OrderedJson js;
    js["scheme"] = std::string(to_string(s.config.scheme));
    js["theta"] = s.config.theta;
    js["sigma1"] = s.config.sigma1;
    js["sigma2"] = s.config.sigma2;
    js["sigmaIP"] = s.config.sigma_ip;
    js["complete"] = s.complete;
    if (!s.complete) js["failure"] = s.failure;
    js["levels"] = OrderedJson::array();
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
      const LevelResult& r = s.levels[k];
      const ErrorReport& e = r.errors;
      OrderedJson jl;
      jl["level"] = r.level;
      jl["hmax"] = r.hmax;
      jl["ndof"] = r.ndof;
      jl["energy_pw"] = e.energy_pw;
      jl["jump"] = e.jump;
      jl["norm_h"] = e.norm_h;
      jl["norm_scheme"] = e.norm_scheme;
      jl["l2"] = e.l2;
      jl["h1_pw"] = e.h1_pw;
      jl["h1_star"] = e.h1_star;
      jl["energy_star"] = e.energy_star;
      jl["best_approx"] = e.best_approx;
      jl["quad_order"] = e.quad_order;
      jl["eoc_energy"] = optional_json(s.eoc_energy[k]);
      jl["eoc_h1"] = optional_json(s.eoc_h1[k]);
      if (r.scaled_interpolant) jl["scaled_interpolant"] = *r.scaled_interpolant;
      if (r.cp_energy) jl["cp_energy"] = *r.cp_energy;
      jl["solver"] = {{"method", r.stats.method},
                      {"residual", r.stats.residual},
                      {"converged", r.stats.converged},
                      {"factor_nonzeros", r.stats.factor_nonzeros},
                      {"iterations", r.stats.iterations}};
      jl["seconds"] = {{"assemble", r.timings.assemble},
                       {"load", r.timings.load},
                       {"solve", r.timings.solve},
                       {"postprocess", r.timings.postprocess}};
      js["levels"].push_back(jl);
    }
    j["schemes"].push_back(js);
  }
  if (!report.comparison.empty()) {
    j["comparison"] = OrderedJson::array();
    for (const ComparisonRow& c : report.comparison) {
      j["comparison"].push_back({{"level", c.level},
                                 {"morley", c.morley},
                                 {"dg", c.dg},
                                 {"c0ip", c.c0ip},
                                 {"best_approx", optional_json(c.best_approx)},
                                 {"spread", c.spread}});
    }
  }
  return j.dump(2) + "\n";
}

std::string csv_path_for(const std::string& path, SchemeTag scheme, bool multiple) {
  if (!multiple) return path;
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + "_" + std::string(to_string(scheme)));
  out += p.extension();
  return out.string();
}

void write_outputs(const RunConfig& config, const ConvergenceReport& report) {
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
  };
  if (!config.output.csv.empty()) {
    const bool multiple = report.schemes.size() > 1;
    for (const SchemeReport& s : report.schemes) {
      write(csv_path_for(config.output.csv, s.config.scheme, multiple), to_csv(s));
    }
  }
  if (!config.output.json.empty()) write(config.output.json, to_json(report));
}

namespace {

CheckResult check(std::string name, bool passed, double value, double bound) {
  std::ostringstream detail;
  detail << "value " << value << ", bound " << bound;
  return {std::move(name), passed, detail.str()};
}

Eigen::VectorXd random_vector(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace

std::vector<CheckResult> run_verification() {
  std::vector<CheckResult> results;
  std::mt19937_64 rng(20240611);
  const auto mesh = std::make_shared<const Triangulation>(unit_square_mesh(4));
  const Smoother smoother(mesh);
  const auto morley = smoother.morley_space();
  const auto dg = make_space(mesh, SpaceTag::DgP2);

  {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const DiscreteFunction v(morley, random_vector(morley->dimension(), rng));
      const DiscreteFunction back = morley_interp_avg(companion(v, smoother.hct_space()), morley);
      worst = std::max(worst, (back.coefficients - v.coefficients).cwiseAbs().maxCoeff());
    }
    results.push_back(check("I_M J = id on Morley functions", worst <= 1e-11, worst, 1e-11));
  }
  {
    const SparseMatrix b = assemble_consistency(*morley, 1.0);
    const SparseMatrix a = assemble_apw(*morley);
    const double rel = Eigen::MatrixXd(b).cwiseAbs().maxCoeff() / Eigen::MatrixXd(a).cwiseAbs().maxCoeff();
    results.push_back(check("b_h vanishes on Morley pairs", rel <= 1e-12, rel, 1e-12));
  }
  {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const DiscreteFunction v(morley, random_vector(morley->dimension(), rng));
      const Eigen::VectorXd x = to_dg(v);
      worst = std::max(worst, cp_energy(*mesh, x) / std::pow(energy_norm_pw(*mesh, x), 2));
    }
    results.push_back(check("c_P vanishes on Morley functions", worst <= 1e-12, worst, 1e-12));
  }
  {
    SchemeConfig c;
    c.scheme = SchemeTag::Dg;
    const SparseMatrix a = assemble_scheme(mesh, c).matrix;
    const SparseMatrix diff = a - SparseMatrix(a.transpose());
    const double rel = Eigen::MatrixXd(diff).cwiseAbs().maxCoeff() / Eigen::MatrixXd(a).cwiseAbs().maxCoeff();
    results.push_back(check("dG matrix symmetric for theta = 1", rel <= 1e-12, rel, 1e-12));
  }
  {
    const AnalyticFunction u = sin_squared_solution();
    bool spd = true;
    double galerkin = 0.0;
    double pythagoras = 0.0;
    for (SchemeTag tag : {SchemeTag::Morley, SchemeTag::Wopsip}) {
      SchemeConfig c;
      c.scheme = tag;
      try {
        const Solution sol = solve_scheme(smoother, c, manufactured_load(u));
        for (int k = 0; k < 5; ++k) {
          const Eigen::VectorXd v = random_vector(sol.rhs.size(), rng);
          const double lhs = v.dot(sol.matrix * sol.uh.coefficients);
          const double rhs = v.dot(sol.rhs);
          galerkin = std::max(galerkin, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        const ErrorReport e = compute_errors(u, sol, 7);
        pythagoras = std::max(pythagoras, std::abs(e.norm_h * e.norm_h - e.energy_pw * e.energy_pw - e.jump * e.jump) /
                                              (e.norm_h * e.norm_h));
      } catch (const NonCoerciveError&) {
        spd = false;
      }
    }
    results.push_back({"Morley and WOPSIP systems SPD", spd, spd ? "LDL^T pivots positive" : "non-positive pivot"});
    results.push_back(check("Galerkin identity", galerkin <= 1e-9, galerkin, 1e-9));
    results.push_back(check("norm_h^2 = energy^2 + jump^2", pythagoras <= 1e-10, pythagoras, 1e-10));
  }
  {
    double worst = 0.0;
    std::uniform_real_distribution<double> coord(0.05, 0.95);
    for (const char* name : {"u1", "u2"}) {
      const AnalyticFunction u = manufactured_solution(name);
      const double h = 1e-3;
      for (int k = 0; k < 5; ++k) {
        const Point x(coord(rng), coord(rng));
        // Five-point Laplacian applied to the exact Laplacian.
        auto lap = [&](const Point& p) { return u(p).hessian.trace(); };
        const double fd = (lap(x + Point(h, 0)) + lap(x - Point(h, 0)) + lap(x + Point(0, h)) +
                           lap(x - Point(0, h)) - 4.0 * lap(x)) / (h * h);
        worst = std::max(worst, std::abs(fd - u.bilaplacian(x)) / std::max(1.0, std::abs(u.bilaplacian(x))));
      }
    }
    results.push_back(check("manufactured bilaplacians", worst <= 1e-4, worst, 1e-4));
  }
  {
    const AnalyticFunction u = polynomial_bubble_solution();
    const DiscreteFunction im = morley_interp_avg(u, morley);
    const double a = pi0_hessian_deviation(u, *mesh, 9);
    double diff = 0.0;
    const Eigen::VectorXd x = to_dg(im);
    for (Index t = 0; t < mesh->num_triangles(); ++t) {
      const TriangleGeometry geo = mesh->geometry(t);
      const Eigen::Vector3d h = p2::basis_hessians(geo) * x.segment<6>(6 * t);
      Eigen::Matrix2d mean = Eigen::Matrix2d::Zero();
      const TriangleRule rule = triangle_rule(9);
      for (int q = 0; q < rule.size(); ++q) mean += rule.weights[q] * u(geo.point(rule.barycentric[q])).hessian;
      diff = std::max(diff, std::abs(mean(0, 0) - h(0)) + std::abs(mean(0, 1) - h(1)) + std::abs(mean(1, 1) - h(2)));
    }
    results.push_back(check("Hessian integral mean of I_M", diff <= 1e-9 && a > 0.0, diff, 1e-9));
  }
  return results;
}

}  // namespace biharm
