#include "quadfield/observables.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>

#include <boost/math/tools/toms748_solve.hpp>

#include "quadfield/csv.hpp"
#include "quadfield/error.hpp"
#include "quadfield/finite_difference.hpp"

namespace quadfield {

Means means(const ErmakovState& s) {
  const double x = -s.eps / s.beta;
  return {x, s.delta + 2.0 * s.alpha * x};
}

Means raw_means(const ErmakovState& s, double lambda) {
  const Means m = means(s);
  return {lambda * m.xbar, lambda * m.pbar};
}

Variances variances(const ErmakovState& s, int n, double alpha_tol) {
  const double level = n + 0.5;
  const double b2 = s.beta * s.beta;
  const double var_x = level / b2;
  const double var_p = level * (b2 + 4.0 * s.alpha * s.alpha / b2);
  const double product = level * level * (1.0 + 4.0 * s.alpha * s.alpha / (b2 * b2));
  return {var_p, var_x, product, n == 0 && std::abs(s.alpha) < alpha_tol};
}

double hamiltonian_expectation(const ErmakovState& s, const CoefficientValues& v, int n) {
  const double b2 = s.beta * s.beta;
  const double r = s.eps / s.beta;
  const double p = s.delta - 2.0 * s.alpha * r;
  return (n + 0.5) * (v.a * (b2 + 4.0 * s.alpha * s.alpha / b2) + (v.b + 2.0 * v.c * s.alpha) / b2) +
         v.a * p * p + r * (v.f + v.b * r) - p * (v.g + v.c * r);
}

double hamiltonian_expectation(const ErmakovState& s, const CoefficientSet& set, int n) {
  return hamiltonian_expectation(s, eval_coeffs(set, s.t), n);
}

PhaseRates phase_rates(const ErmakovState& s, const CoefficientSet& set, int n) {
  const CoefficientValues v = eval_coeffs(set, s.t);
  const double dyn = (2 * n + 1) * v.a * s.beta * s.beta;
  return {dyn, hamiltonian_expectation(s, v, n) - dyn};
}

ModeAmplitudes mode_amplitudes(const Means& m, double lambda, const FieldScales& scales) {
  return {scales.varpi * lambda * m.pbar, scales.omega * lambda * m.xbar};
}

std::vector<double> cumulative_trapezoid(const ErmakovPath& path, const std::vector<double>& rate) {
  std::vector<double> out(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (path[i].t - path[i - 1].t) * (rate[i] + rate[i - 1]);
  }
  return out;
}

std::vector<FockObservables> evaluate_observables(const ErmakovPath& path,
                                                  const CharacteristicBasis& basis,
                                                  const CoefficientSet& set, int n,
                                                  const FieldScales& scales) {
  if (n < 0) throw ConfigError("fock_index", "must be nonnegative");
  std::vector<FockObservables> out(path.size());
  std::vector<double> dyn(path.size()), geo(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const ErmakovState& s = path[i];
    const double lambda = basis.lambda[i];
    FockObservables& o = out[i];
    o.t = s.t;
    o.n = n;
    const Means m = means(s);
    const Means raw = raw_means(s, lambda);
    o.xbar = m.xbar;
    o.pbar = m.pbar;
    o.raw_xbar = raw.xbar;
    o.raw_pbar = raw.pbar;
    const Variances var = variances(s, n);
    o.var_x = var.var_x;
    o.var_p = var.var_p;
    o.product = var.product;
    o.min_uncertainty = var.min_uncertainty;
    o.h_expect = hamiltonian_expectation(s, set, n);
    const PhaseRates r = phase_rates(s, set, n);
    o.phase_dyn_rate = dyn[i] = r.dynamical;
    o.phase_geo_rate = geo[i] = r.geometric;
    const ModeAmplitudes amp = mode_amplitudes(m, lambda, scales);
    o.d_amp = amp.d_amp;
    o.b_amp = amp.b_amp;
  }
  const auto phi = cumulative_trapezoid(path, dyn);
  const auto theta = cumulative_trapezoid(path, geo);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].phase_dyn = phi[i];
    out[i].phase_geo = theta[i];
  }
  return out;
}

std::vector<double> geometric_rate_from_derivatives(const ErmakovPath& path, int n) {
  const std::size_t m = path.size();
  if (m < 5) throw ConfigError("grid", "needs at least five points");
  const double h = path[1].t - path[0].t;
  for (std::size_t i = 1; i < m; ++i) {
    if (std::abs((path[i].t - path[i - 1].t) - h) > 1e-9 * h) {
      throw ConfigError("grid", "phase route needs a uniform grid");
    }
  }
  std::vector<double> alpha(m), delta(m), kappa(m);
  for (std::size_t i = 0; i < m; ++i) {
    alpha[i] = path[i].alpha;
    delta[i] = path[i].delta;
    kappa[i] = path[i].kappa;
  }
  const auto da = fd_derivative(alpha, h);
  const auto dd = fd_derivative(delta, h);
  const auto dk = fd_derivative(kappa, h);
  std::vector<double> rate(m);
  for (std::size_t i = 0; i < m; ++i) {
    const ErmakovState& s = path[i];
    rate[i] = -dk[i] - (s.eps * s.eps + n + 0.5) * da[i] / (s.beta * s.beta) + s.eps * dd[i] / s.beta;
  }
  return rate;
}

std::vector<double> minimum_uncertainty_instants(const ErmakovPath& path, const ComplexFrame& frame,
                                                 const CharacteristicBasis& basis,
                                                 const CoefficientSet& set) {
  std::vector<double> roots;
  auto alpha = [&](double t) { return closed_form_alpha(frame, basis, set, t); };
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double a0 = path[i - 1].alpha;
    const double a1 = path[i].alpha;
    if (a1 == 0.0) {
      roots.push_back(path[i].t);
      continue;
    }
    if (a0 == 0.0 || (a0 > 0) == (a1 > 0)) continue;
    std::uintmax_t iters = 100;
    const auto bracket = boost::math::tools::toms748_solve(
        alpha, path[i - 1].t, path[i].t, a0, a1, boost::math::tools::eps_tolerance<double>(50),
        iters);
    roots.push_back(0.5 * (bracket.first + bracket.second));
  }
  return roots;
}

ClassicalModeReport classical_mode_deviation(const MediumProfile& profile,
                                             const CoefficientSet& set,
                                             const std::vector<FockObservables>& obs,
                                             const TimeGrid& grid, const OdeOptions& options) {
  const double u2 = profile.upsilon * profile.upsilon;
  auto rhs = [&](double t, const OdeState<2>& y) -> OdeState<2> {
    const double xi = profile.xi(t);
    const double damping = (profile.xi.derivative(t) + profile.chi(t)) / xi;
    return {y[1], -damping * y[1] - u2 / (xi * profile.eta(t)) * y[0]};
  };
  const double a0 = eval_coeffs(set, 0.0).a;
  const OdeState<2> y0{obs.front().xbar, 2.0 * a0 * obs.front().pbar};
  const auto dense = integrate_dopri5<2>(rhs, 0.0, y0, grid.back(), options, "observables");

  ClassicalModeReport r;
  r.q.resize(grid.size());
  r.qp.resize(grid.size());
  std::vector<double> p(grid.size());
  double qmax = 0.0, pmax = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto y = i == 0 ? y0 : dense(grid[i]);
    r.q[i] = y[0];
    r.qp[i] = y[1];
    p[i] = y[1] / (2.0 * eval_coeffs(set, grid[i]).a);
    qmax = std::max(qmax, std::abs(y[0]));
    pmax = std::max(pmax, std::abs(p[i]));
  }
  // lambda = 1 for media: c = d = 0.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.b_deviation = std::max(r.b_deviation, std::abs(obs[i].b_amp / profile.scales.omega - r.q[i]));
    r.d_deviation = std::max(r.d_deviation, std::abs(obs[i].d_amp / profile.scales.varpi - p[i]));
  }
  r.b_deviation /= std::max(1.0, qmax);
  r.d_deviation /= std::max(1.0, pmax);
  return r;
}

void write_observables_csv(const std::vector<FockObservables>& obs, std::ostream& os) {
  CsvWriter csv(os, {"t", "xbar", "pbar", "var_x", "var_p", "product", "h_expect", "phase_dyn",
                     "phase_geo", "d_amp", "b_amp"});
  for (const auto& o : obs) {
    csv.row({o.t, o.xbar, o.pbar, o.var_x, o.var_p, o.product, o.h_expect, o.phase_dyn, o.phase_geo,
             o.d_amp, o.b_amp});
  }
}

}  // namespace quadfield
