#pragma once

#include <cstddef>
#include <vector>

namespace quadfield {

/// Natural cubic spline through (x_i, y_i). Outside the knot range the end
/// cubic pieces are extended.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double derivative(double t) const;

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::size_t segment(double t) const;

  std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
};

}  // namespace quadfield
