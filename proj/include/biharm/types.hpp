#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biharm {

using Index = Eigen::Index;
using Point = Eigen::Vector2d;

/// Value, gradient and Hessian of a scalar field at one point.
template <typename Scalar>
struct Jet {
  Scalar value{0};
  Eigen::Matrix<Scalar, 2, 1> gradient = Eigen::Matrix<Scalar, 2, 1>::Zero();
  Eigen::Matrix<Scalar, 2, 2> hessian = Eigen::Matrix<Scalar, 2, 2>::Zero();
};

using Jet2d = Jet<double>;

template <typename Scalar>
Jet<Scalar> operator-(const Jet<Scalar>& a, const Jet<Scalar>& b) {
  return {a.value - b.value, a.gradient - b.gradient, a.hessian - b.hessian};
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mesh or config text; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class SingularElementError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

/// Thrown when an SPD-expected system factorizes with non-positive pivots.
class NonCoerciveError : public SolverError {
 public:
  NonCoerciveError(const std::string& what, Index negative_pivots)
      : SolverError(what), negative_pivots_(negative_pivots) {}
  Index negative_pivots() const noexcept { return negative_pivots_; }

 private:
  Index negative_pivots_;
};

}  // namespace biharm
