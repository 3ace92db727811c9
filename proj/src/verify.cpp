#include "quadfield/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "quadfield/csv.hpp"
#include "quadfield/error.hpp"
#include "quadfield/finite_difference.hpp"

namespace quadfield {

ErmakovPath riccati_oracle(const ErmakovInit& init, const CoefficientSet& set,
                           const TimeGrid& grid, const OdeOptions& options) {
  init.validate();
  auto rhs = [&set](double t, const OdeState<6>& y) -> OdeState<6> {
    const CoefficientValues v = eval_coeffs(set, t);
    const double al = y[0], be = y[1], de = y[3], ep = y[4];
    const double b2 = be * be;
    const double drift = v.c + 4.0 * v.a * al;
    return {
        v.a * b2 * b2 - v.b - 2.0 * v.c * al - 4.0 * v.a * al * al,
        -drift * be,
        -v.a * b2,
        2.0 * v.a * b2 * be * ep + v.f + 2.0 * v.g * al - drift * de,
        (v.g - 2.0 * v.a * de) * be,
        v.g * de - v.a * de * de + v.a * b2 * ep * ep,
    };
  };

  double last_good = 0.0;
  auto observer = [&last_good](double t, const OdeState<6>& y) {
    for (double x : y) {
      if (!std::isfinite(x)) throw BlowUpError(last_good, "non-finite Riccati state");
    }
    if (!(y[1] > 0)) throw BlowUpError(last_good, "beta left (0, inf)");
    last_good = t;
  };

  const OdeState<6> y0{init.alpha0, init.beta0, init.gamma0, init.delta0, init.eps0, init.kappa0};
  const auto dense = integrate_dopri5<6>(rhs, 0.0, y0, grid.back(), options, "verify", observer);

  ErmakovPath path(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto y = i == 0 ? y0 : dense(grid[i]);
    path[i] = {grid[i], y[0], y[1], y[2], y[3], y[4], y[5]};
  }
  return path;
}

OperatorCoefficients ansatz_coefficients(const ErmakovState& s) {
  if (!(s.beta != 0.0) || !std::isfinite(s.beta)) {
    throw InvalidStateError("verify", s.t, "beta must be finite and nonzero");
  }
  const cplx phase = std::polar(1.0 / std::sqrt(2.0), -2.0 * s.gamma);
  return {phase * cplx{s.beta, -2.0 * s.alpha / s.beta}, phase * cplx{0.0, 1.0 / s.beta},
          phase * cplx{s.eps, -s.delta / s.beta}};
}

std::vector<OperatorCoefficients> ansatz_path(const ErmakovPath& path) {
  std::vector<OperatorCoefficients> out;
  out.reserve(path.size());
  for (const auto& s : path) out.push_back(ansatz_coefficients(s));
  return out;
}

double commutator_defect(const std::vector<OperatorCoefficients>& path) {
  double m = 0.0;
  for (const auto& c : path) m = std::max(m, std::abs(c.commutator() + cplx{0.0, 1.0}));
  return m;
}

HeisenbergReport heisenberg_residual(const CoefficientSet& set, const TimeGrid& grid,
                                     const std::vector<OperatorCoefficients>& path) {
  if (!grid.is_uniform()) throw ConfigError("grid", "Heisenberg residual needs a uniform grid");
  if (path.size() != grid.size()) throw ConfigError("grid", "path and grid sizes differ");
  const std::size_t n = path.size();
  std::vector<cplx> u(n), v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = path[i].u;
    v[i] = path[i].v;
    w[i] = path[i].w;
  }
  const double h = grid.step();
  const auto du = fd_derivative(u, h);
  const auto dv = fd_derivative(v, h);
  const auto dw = fd_derivative(w, h);

  HeisenbergReport r;
  r.t.resize(n);
  r.ru.resize(n);
  r.rv.resize(n);
  r.rw.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CoefficientValues c = eval_coeffs(set, grid[i]);
    r.t[i] = grid[i];
    r.ru[i] = std::abs(du[i] - (-c.c * u[i] + 2.0 * c.b * v[i]));
    r.rv[i] = std::abs(dv[i] - (-2.0 * c.a * u[i] + c.c * v[i]));
    r.rw[i] = std::abs(dw[i] - (c.g * u[i] - c.f * v[i]));
    r.max = std::max({r.max, r.ru[i], r.rv[i], r.rw[i]});
  }
  return r;
}

double PathDeviation::max() const { return std::max({alpha, beta, gamma, delta, eps, kappa}); }

PathDeviation compare_paths(const ErmakovPath& a, const ErmakovPath& b) {
  if (a.size() != b.size()) throw ConfigError("grid", "paths have different lengths");
  PathDeviation d;
  double worst = -1.0;
  auto track = [&](double& slot, double x, double y, double t) {
    const double diff = std::abs(x - y);
    slot = std::max(slot, diff);
    d.relative = std::max(d.relative, diff / std::max(1.0, std::abs(y)));
    if (diff > worst) {
      worst = diff;
      d.t_worst = t;
    }
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i].t;
    track(d.alpha, a[i].alpha, b[i].alpha, t);
    track(d.beta, a[i].beta, b[i].beta, t);
    track(d.gamma, a[i].gamma, b[i].gamma, t);
    track(d.delta, a[i].delta, b[i].delta, t);
    track(d.eps, a[i].eps, b[i].eps, t);
    track(d.kappa, a[i].kappa, b[i].kappa, t);
  }
  return d;
}

void write_residual_csv(const HeisenbergReport& r, std::ostream& os) {
  CsvWriter csv(os, {"t", "u_residual", "v_residual", "w_residual"});
  for (std::size_t i = 0; i < r.t.size(); ++i) csv.row({r.t[i], r.ru[i], r.rv[i], r.rw[i]});
}

}  // namespace quadfield
