#pragma once

#include <cstddef>
#include <vector>

#include "quadfield/error.hpp"

namespace quadfield {

/// Fourth-order derivative of samples on a uniform grid with spacing h.
/// Centred in the interior, one-sided within two points of either end.
template <class T>
std::vector<T> fd_derivative(const std::vector<T>& y, double h) {
  const std::size_t n = y.size();
  if (n < 5) throw ConfigError("grid", "finite differences need at least five points");
  std::vector<T> d(n);
  const double k = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) * k;
  }
  d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) * k;
  d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) * k;
  d[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) * k;
  d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) * k;
  return d;
}

}  // namespace quadfield
