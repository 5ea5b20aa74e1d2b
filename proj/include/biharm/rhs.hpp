#pragma once

#include "biharm/interp.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace biharm {

struct PointLoad {
  double weight = 1.0;
  Point location = Point::Zero();
};

struct Density {
  std::function<double(const Point&)> f;
  /// Polynomial degree if f is a polynomial; sets the quadrature order to 3 + degree.
  std::optional<int> degree;
  std::string name;
};

struct LoadSpec {
  std::optional<Density> density;
  std::vector<PointLoad> points;
  int quad_order = 7;

  bool empty() const { return !density && points.empty(); }
  /// Order used for density quadrature on HCT sub-triangles.
  int effective_order() const;
};

/// Load f = bilaplacian of a manufactured solution.
LoadSpec manufactured_load(const AnalyticFunction& u, int quad_order = 7);

/// Where a point load sits: its triangle, barycentric coordinates there, and
/// the mesh vertex it was snapped to (or -1).
struct PointLocation {
  Index triangle = -1;
  Eigen::Vector3d lambda = Eigen::Vector3d::Zero();
  Index vertex = -1;
};

inline constexpr double kSnapTolerance = 1e-12;

/// Throws ConfigError for points outside the closed domain.
PointLocation locate_point(const Triangulation& mesh, const Point& x);

/// F(psi_k) for every free HCT basis function psi_k.
Eigen::VectorXd hct_load_vector(const FiniteElementSpace& hct, const LoadSpec& load);

/// b_i = F(J I_M phi_i) for the basis of a Morley, DgP2 or LagrangeP2 space.
Eigen::VectorXd smoothed_load_vector(const FiniteElementSpace& space, const Smoother& smoother,
                                     const LoadSpec& load);

/// b_i = int f phi_i dx. Density loads only.
Eigen::VectorXd plain_load_vector(const FiniteElementSpace& space, const LoadSpec& load);

/// F(v) for an HCT function, evaluated directly.
double apply_load(const LoadSpec& load, const DiscreteFunction& v_hct);

/// Number of point loads of `load` that coincide with a mesh vertex.
int snapped_point_loads(const Triangulation& mesh, const LoadSpec& load);

}  // namespace biharm
