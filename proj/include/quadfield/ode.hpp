#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta integrator with the standard
// fourth-order continuous extension (Hairer, Norsett & Wanner, DOPRI5).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "quadfield/error.hpp"

namespace quadfield {

struct OdeOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double initial_step = 0.0;  // 0: automatic
  double max_step = 0.0;      // 0: unbounded
  std::size_t max_steps = 5'000'000;
};

template <std::size_t N>
using OdeState = std::array<double, N>;

template <std::size_t N>
class DenseTrajectory {
 public:
  struct Segment {
    double t0;
    double h;
    std::array<OdeState<N>, 5> r;
  };

  OdeState<N> operator()(double t) const {
    const Segment& s = locate(t);
    const double theta = (t - s.t0) / s.h;
    const double theta1 = 1.0 - theta;
    OdeState<N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = s.r[0][i] +
             theta * (s.r[1][i] + theta1 * (s.r[2][i] + theta * (s.r[3][i] + theta1 * s.r[4][i])));
    }
    return y;
  }

  double t_begin() const { return segments_.front().t0; }
  double t_end() const { return segments_.back().t0 + segments_.back().h; }
  std::size_t steps() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  void append(const Segment& s) { segments_.push_back(s); }
  void reserve(std::size_t n) { segments_.reserve(n); }

 private:
  const Segment& locate(double t) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.t0; });
    if (it == segments_.begin()) return segments_.front();
    return *std::prev(it);
  }

  std::vector<Segment> segments_;
};

namespace detail {

template <std::size_t N>
double scaled_rms(const OdeState<N>& v, const OdeState<N>& y0, const OdeState<N>& y1,
                  const OdeOptions& opt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = v[i] / sk;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(N));
}

struct NoObserver {
  template <std::size_t N>
  void operator()(double, const OdeState<N>&) const {}
};

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0). `observer(t, y)` is
/// called after every accepted step and may throw to abort.
template <std::size_t N, class Rhs, class Observer = detail::NoObserver>
DenseTrajectory<N> integrate_dopri5(Rhs&& rhs, double t0, const OdeState<N>& y0, double t1,
                                    const OdeOptions& opt, const std::string& what,
                                    Observer&& observer = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  DenseTrajectory<N> out;
  const double span = t1 - t0;
  const double max_step = opt.max_step > 0 ? opt.max_step : span;

  OdeState<N> y = y0;
  OdeState<N> k1 = rhs(t0, y);
  OdeState<N> k2, k3, k4, k5, k6, k7, ytmp, ynew, err;

  double h = opt.initial_step;
  if (h <= 0) {
    // Starting step heuristic after Hairer's HINIT.
    OdeState<N> f0s, y0s;
    for (std::size_t i = 0; i < N; ++i) {
      y0s[i] = y[i];
      f0s[i] = k1[i];
    }
    const double dnf = detail::scaled_rms(f0s, y, y, opt);
    const double dny = detail::scaled_rms(y0s, y, y, opt);
    double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h0 = std::min(h0, max_step);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h0 * k1[i];
    k2 = rhs(t0 + h0, ytmp);
    for (std::size_t i = 0; i < N; ++i) err[i] = (k2[i] - k1[i]) / h0;
    const double der2 = detail::scaled_rms(err, y, y, opt);
    const double der12 = std::max(der2, dnf);
    const double h1 =
        der12 <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / der12, 1.0 / 5.0);
    h = std::min({100 * h0, h1, max_step});
  }

  double t = t0;
  bool last_rejected = false;
  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) throw StiffnessError(what, t);
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < h_min) throw StiffnessError(what, t);
    bool last = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tnew = last ? t1 : t + h;
    k6 = rhs(tnew, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = rhs(tnew, ynew);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const double en = detail::scaled_rms(err, y, ynew, opt);
    if (!std::isfinite(en)) {
      h *= 0.2;
      last_rejected = true;
      continue;
    }
    double factor = en == 0.0 ? 10.0 : 0.9 * std::pow(en, -1.0 / 5.0);
    factor = std::clamp(factor, 0.2, 10.0);
    if (en <= 1.0) {
      typename DenseTrajectory<N>::Segment seg;
      seg.t0 = t;
      seg.h = tnew - t;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        seg.r[0][i] = y[i];
        seg.r[1][i] = ydiff;
        seg.r[2][i] = bspl;
        seg.r[3][i] = ydiff - h * k7[i] - bspl;
        seg.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                           d7 * k7[i]);
      }
      out.append(seg);
      t = tnew;
      y = ynew;
      k1 = k7;
      observer(t, y);
      if (last_rejected) factor = std::min(factor, 1.0);
      last_rejected = false;
      h = std::min(h * factor, max_step);
    } else {
      h *= std::min(factor, 1.0);
      last_rejected = true;
    }
  }
  return out;
}

}  // namespace quadfield
