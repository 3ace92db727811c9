#pragma once

#include <functional>
#include <vector>

#include "quadfield/grid.hpp"

namespace quadfield {

/// Running integral F(t) = int_0^t f(s) ds. Node values on the master grid
/// are accumulated once with 7-point Gauss-Legendre per interval; between
/// nodes the integral is the cubic Hermite interpolant of the node values
/// with slopes f(t_i).
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::function<double(double)> integrand, const TimeGrid& grid);

  double operator()(double t) const;
  /// Derivative of the interpolant; equals f at the nodes.
  double derivative(double t) const;
  const std::vector<double>& nodes() const { return nodes_; }
  double integrand(double t) const { return f_(t); }

 private:
  std::function<double(double)> f_;
  TimeGrid grid_;
  std::vector<double> nodes_;
  std::vector<double> slopes_;
};

}  // namespace quadfield
