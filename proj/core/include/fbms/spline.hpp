#pragma once

#include <vector>

namespace fbms {

/// Natural cubic spline through (x_i, y_i) with strictly increasing x.
/// Outside [x_0, x_{n-1}] the end cubic is extrapolated; callers that need
/// interval checks do them before evaluating.
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

private:
  std::size_t segment(double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace fbms
