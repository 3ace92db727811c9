#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "quadfield/error.hpp"

namespace quadfield {

/// Strictly increasing sample times starting at 0.
class TimeGrid {
 public:
  TimeGrid() = default;

  explicit TimeGrid(std::vector<double> times) : t_(std::move(times)) {
    if (t_.size() < 2) throw ConfigError("grid", "needs at least two points");
    if (t_.front() != 0.0) throw ConfigError("grid", "must start at t=0");
    for (std::size_t i = 1; i < t_.size(); ++i) {
      if (!(t_[i] > t_[i - 1])) throw ConfigError("grid", "times must be strictly increasing");
    }
    const double h = t_[1] - t_[0];
    uniform_ = true;
    for (std::size_t i = 1; i < t_.size(); ++i) {
      if (std::abs((t_[i] - t_[i - 1]) - h) > 1e-9 * h) {
        uniform_ = false;
        break;
      }
    }
  }

  /// Uniform grid on [0, t_max]; the last step is absorbed so that the grid
  /// ends exactly at t_max.
  static TimeGrid uniform(double t_max, double dt) {
    if (!(t_max > 0)) throw ConfigError("grid.t_max", "must be positive");
    if (!(dt > 0) || dt > t_max) throw ConfigError("grid.dt", "must be in (0, t_max]");
    const auto n = static_cast<std::size_t>(std::llround(t_max / dt));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = t_max * static_cast<double>(i) / static_cast<double>(n);
    return TimeGrid(std::move(t));
  }

  std::size_t size() const { return t_.size(); }
  double operator[](std::size_t i) const { return t_[i]; }
  double front() const { return t_.front(); }
  double back() const { return t_.back(); }
  std::span<const double> times() const { return t_; }
  bool is_uniform() const { return uniform_; }
  double step() const { return t_[1] - t_[0]; }

  /// Index i with t_i <= t < t_{i+1}, clamped to the last interval.
  std::size_t interval(double t) const;

 private:
  std::vector<double> t_;
  bool uniform_ = false;
};

}  // namespace quadfield
