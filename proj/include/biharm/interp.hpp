#pragma once

#include "biharm/fespace.hpp"
#include "biharm/manufactured.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace biharm {

/// A piecewise smooth function: the jet of its restriction to triangle t at x.
using PiecewiseJet = std::function<Jet2d(Index t, const Point& x)>;

PiecewiseJet piecewise(const AnalyticFunction& f);
PiecewiseJet piecewise(const DiscreteFunction& f);

/// Gauss points used for edge means of normal derivatives of smooth inputs.
inline constexpr int kAnalyticEdgePoints = 8;

struct InterpolationReport {
  SpaceTag input = SpaceTag::Morley;
  SpaceTag output = SpaceTag::Morley;
  std::vector<double> residuals;
  double max_residual = 0.0;

  /// The projection-identity bound: max residual <= tol * (1 + coefficient scale).
  bool within(double tol, double scale) const { return max_residual <= tol * (1.0 + scale); }
};

/// DOF-wise comparison of two functions in the same space.
InterpolationReport compare_dofs(const DiscreteFunction& expected, const DiscreteFunction& actual);

/// Local Morley interpolation: per triangle the quadratic sharing the vertex
/// values and edge-mean normal derivatives of f|_T. Output lives in DgP2.
DiscreteFunction morley_interp_local(const PiecewiseJet& f, SpacePtr dg_space,
                                     int edge_points = kAnalyticEdgePoints);

/// Generalized Morley interpolation by averaging one-sided DOFs.
DiscreteFunction morley_interp_avg(const PiecewiseJet& f, SpacePtr morley_space,
                                   int edge_points = kAnalyticEdgePoints);
DiscreteFunction morley_interp_avg(const AnalyticFunction& f, SpacePtr morley_space);
/// For DgP2, LagrangeP2, Morley or Hct inputs; edge means are exact.
DiscreteFunction morley_interp_avg(const DiscreteFunction& v, SpacePtr morley_space);

/// Companion J: Morley -> HCT, preserving vertex values and edge-mean normal
/// derivatives, with vertex gradients averaged over the vertex patch.
DiscreteFunction companion(const DiscreteFunction& v_morley, SpacePtr hct_space);

/// C0IP transfer: Morley -> continuous P2, midpoint values averaged.
DiscreteFunction transfer_ic(const DiscreteFunction& v_morley, SpacePtr lagrange_space);

/// Matrix of the generalized Morley interpolation on a source space.
SparseMatrix morley_interp_matrix(const FiniteElementSpace& source, const FiniteElementSpace& morley);

/// Matrix of the companion operator (Hct dimension x Morley dimension).
SparseMatrix companion_matrix(const FiniteElementSpace& morley, const FiniteElementSpace& hct);

/// The smoother J I_M on one mesh, with its Morley and HCT spaces.
class Smoother {
 public:
  explicit Smoother(std::shared_ptr<const Triangulation> mesh);

  const SpacePtr& morley_space() const { return morley_; }
  const SpacePtr& hct_space() const { return hct_; }
  const SparseMatrix& companion() const { return companion_; }

  /// J I_M restricted to `source` (J alone on the Morley space).
  SparseMatrix matrix(const FiniteElementSpace& source) const;
  /// J I_M v through the interpolation operators.
  DiscreteFunction apply(const DiscreteFunction& v) const;

 private:
  SpacePtr morley_;
  SpacePtr hct_;
  SparseMatrix companion_;
};

DiscreteFunction smoother(const DiscreteFunction& v, SpacePtr morley_space, SpacePtr hct_space);

}  // namespace biharm
