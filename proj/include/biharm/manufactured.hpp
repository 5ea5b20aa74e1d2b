#pragma once

#include "biharm/types.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace biharm {

/// Smooth function known through its jet; `bilaplacian` is optional.
struct AnalyticFunction {
  std::string name;
  std::function<Jet2d(const Point&)> jet;
  std::function<double(const Point&)> bilaplacian;

  Jet2d operator()(const Point& x) const { return jet(x); }
};

/// sin^2(pi x) sin^2(pi y): clamped on the unit square.
AnalyticFunction sin_squared_solution();
/// x^2 (1-x)^2 y^2 (1-y)^2: clamped on the unit square.
AnalyticFunction polynomial_bubble_solution();
AnalyticFunction zero_function();

/// Lookup by name: "u1", "u2", "zero".
AnalyticFunction manufactured_solution(std::string_view name);
std::vector<std::string> manufactured_names();

}  // namespace biharm
