#include "biharm/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace biharm {

namespace {

/// A function of one variable and its first four derivatives.
struct Profile {
  double d[5];
};

Jet2d tensor_jet(const Profile& fx, const Profile& fy) {
  Jet2d j;
  j.value = fx.d[0] * fy.d[0];
  j.gradient << fx.d[1] * fy.d[0], fx.d[0] * fy.d[1];
  j.hessian << fx.d[2] * fy.d[0], fx.d[1] * fy.d[1], fx.d[1] * fy.d[1], fx.d[0] * fy.d[2];
  return j;
}

double tensor_bilaplacian(const Profile& fx, const Profile& fy) {
  return fx.d[4] * fy.d[0] + 2.0 * fx.d[2] * fy.d[2] + fx.d[0] * fy.d[4];
}

Profile sin_squared(double t) {
  constexpr double pi = std::numbers::pi;
  const double s = std::sin(2.0 * pi * t);
  const double c = std::cos(2.0 * pi * t);
  return {{0.5 * (1.0 - c), pi * s, 2.0 * pi * pi * c, -4.0 * pi * pi * pi * s, -8.0 * pi * pi * pi * pi * c}};
}

Profile bubble(double t) {
  return {{t * t * (1 - t) * (1 - t), 2 * t - 6 * t * t + 4 * t * t * t, 2 - 12 * t + 12 * t * t,
           -12 + 24 * t, 24}};
}

template <Profile (*P)(double)>
AnalyticFunction tensor_function(std::string name) {
  AnalyticFunction f;
  f.name = std::move(name);
  f.jet = [](const Point& x) { return tensor_jet(P(x.x()), P(x.y())); };
  f.bilaplacian = [](const Point& x) { return tensor_bilaplacian(P(x.x()), P(x.y())); };
  return f;
}

}  // namespace

AnalyticFunction sin_squared_solution() { return tensor_function<sin_squared>("u1"); }

AnalyticFunction polynomial_bubble_solution() { return tensor_function<bubble>("u2"); }

AnalyticFunction zero_function() {
  AnalyticFunction f;
  f.name = "zero";
  f.jet = [](const Point&) { return Jet2d{}; };
  f.bilaplacian = [](const Point&) { return 0.0; };
  return f;
}

AnalyticFunction manufactured_solution(std::string_view name) {
  if (name == "u1") return sin_squared_solution();
  if (name == "u2") return polynomial_bubble_solution();
  if (name == "zero") return zero_function();
  throw ConfigError("unknown manufactured solution '" + std::string(name) + "'");
}

std::vector<std::string> manufactured_names() { return {"u1", "u2", "zero"}; }

}  // namespace biharm
