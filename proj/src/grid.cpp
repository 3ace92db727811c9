#include "quadfield/grid.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss.hpp>

#include "quadfield/quadrature.hpp"

namespace quadfield {

std::size_t TimeGrid::interval(double t) const {
  if (uniform_) {
    const double x = t / step();
    if (!(x > 0)) return 0;
    auto i = std::min(static_cast<std::size_t>(x), t_.size() - 2);
    // Guard against rounding at the knots.
    if (i + 1 < t_.size() - 1 && t >= t_[i + 1]) ++i;
    if (i > 0 && t < t_[i]) --i;
    return i;
  }
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.begin()) return 0;
  const auto i = static_cast<std::size_t>(std::distance(t_.begin(), it)) - 1;
  return std::min(i, t_.size() - 2);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> integrand, const TimeGrid& grid)
    : f_(std::move(integrand)), grid_(grid), nodes_(grid.size(), 0.0), slopes_(grid.size()) {
  using boost::math::quadrature::gauss;
  const auto& f = f_;
  auto ref = [&f](double s) { return f(s); };
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    nodes_[i] = nodes_[i - 1] + gauss<double, 7>::integrate(ref, grid_[i - 1], grid_[i]);
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) slopes_[i] = f_(grid_[i]);
}

double CumulativeIntegral::operator()(double t) const {
  const std::size_t i = grid_.interval(t);
  const double left = grid_[i];
  if (t == left) return nodes_[i];
  const double h = grid_[i + 1] - left;
  const double s = (t - left) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * nodes_[i] + (s3 - 2 * s2 + s) * h * slopes_[i] +
         (-2 * s3 + 3 * s2) * nodes_[i + 1] + (s3 - s2) * h * slopes_[i + 1];
}

double CumulativeIntegral::derivative(double t) const {
  const std::size_t i = grid_.interval(t);
  const double left = grid_[i];
  const double h = grid_[i + 1] - left;
  const double s = (t - left) / h;
  const double s2 = s * s;
  return (6 * s2 - 6 * s) * (nodes_[i] - nodes_[i + 1]) / h + (3 * s2 - 4 * s + 1) * slopes_[i] +
         (3 * s2 - 2 * s) * slopes_[i + 1];
}

}  // namespace quadfield
