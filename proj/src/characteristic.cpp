#include "quadfield/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "quadfield/csv.hpp"
#include "quadfield/error.hpp"

namespace quadfield {

namespace {

double nonzero_a(const CoefficientValues& v, double t) {
  if (v.a == 0.0) throw CoefficientError("a", t, "a(t) must be nonzero");
  return v.a;
}

std::shared_ptr<const CumulativeIntegral> damping_integral(const CoefficientSet& set,
                                                           const TimeGrid& grid) {
  if (set.c.is_zero() && set.d.is_zero()) return nullptr;
  const auto c = set.c;
  const auto d = set.d;
  return std::make_shared<const CumulativeIntegral>(
      [c, d](double t) { return c(t) - 2.0 * d(t); }, grid);
}

}  // namespace

double tau_at(const CoefficientSet& set, double t) {
  const CoefficientValues v = eval_coeffs(set, t);
  const double a = nonzero_a(v, t);
  return eval_derivative(set, Coefficient::a, t) / a - 2.0 * v.c + 4.0 * v.d;
}

double sigma_at(const CoefficientSet& set, double t) {
  const CoefficientValues v = eval_coeffs(set, t);
  const double a = nonzero_a(v, t);
  double sigma = v.a * v.b - v.c * v.d + v.d * v.d;
  if (!set.d.is_zero()) {
    // (d/2)(a'/a - d'/d) with the removable d'/d singularity cancelled.
    sigma += 0.5 * v.d * eval_derivative(set, Coefficient::a, t) / a -
             0.5 * eval_derivative(set, Coefficient::d, t);
  }
  return sigma;
}

TauSigma build_tau_sigma(const CoefficientSet& set, const TimeGrid& grid) {
  TauSigma ts;
  ts.tau.reserve(grid.size());
  ts.sigma.reserve(grid.size());
  for (double t : grid.times()) {
    ts.tau.push_back(tau_at(set, t));
    ts.sigma.push_back(sigma_at(set, t));
  }
  return ts;
}

std::vector<double> compute_lambda(const CoefficientSet& set, const TimeGrid& grid) {
  const auto damping = damping_integral(set, grid);
  std::vector<double> lambda(grid.size(), 1.0);
  if (!damping) return lambda;
  for (std::size_t i = 0; i < grid.size(); ++i) lambda[i] = std::exp(-damping->nodes()[i]);
  return lambda;
}

BasisPoint CharacteristicBasis::at(double t) const {
  const auto y = (*dense)(t);
  return {y[0], y[1], y[2], y[3], lambda_at(t)};
}

double CharacteristicBasis::lambda_at(double t) const {
  return damping ? std::exp(-(*damping)(t)) : 1.0;
}

std::vector<double> CharacteristicBasis::wronskian() const {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = mu0p[i] * mu1[i] - mu0[i] * mu1p[i];
  return w;
}

double CharacteristicBasis::max_abs_mu0() const {
  double m = 0.0;
  for (double v : mu0) m = std::max(m, std::abs(v));
  return m;
}

CharacteristicBasis integrate_characteristic(const CoefficientSet& set, const TimeGrid& grid,
                                             const CharacteristicOptions& options) {
  if (options.mu1_init == 0.0 || !std::isfinite(options.mu1_init)) {
    throw ConfigError("mu1_init", "must be finite and nonzero");
  }
  const CoefficientValues v0 = eval_coeffs(set, 0.0);
  nonzero_a(v0, 0.0);

  auto rhs = [&set](double t, const OdeState<4>& y) -> OdeState<4> {
    const double tau = tau_at(set, t);
    const double s4 = 4.0 * sigma_at(set, t);
    return {y[1], tau * y[1] - s4 * y[0], y[3], tau * y[3] - s4 * y[2]};
  };

  const OdeState<4> y0{0.0, 2.0 * v0.a, options.mu1_init, 0.0};
  auto dense = std::make_shared<const DenseTrajectory<4>>(
      integrate_dopri5<4>(rhs, 0.0, y0, grid.back(), options.ode, "characteristic"));

  CharacteristicBasis basis;
  basis.grid = grid;
  basis.mu1_init = options.mu1_init;
  basis.dense = dense;
  basis.damping = damping_integral(set, grid);
  const std::size_t n = grid.size();
  basis.mu0.resize(n);
  basis.mu0p.resize(n);
  basis.mu1.resize(n);
  basis.mu1p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = i == 0 ? y0 : (*dense)(grid[i]);
    basis.mu0[i] = y[0];
    basis.mu0p[i] = y[1];
    basis.mu1[i] = y[2];
    basis.mu1p[i] = y[3];
  }
  basis.lambda = compute_lambda(set, grid);
  auto ts = build_tau_sigma(set, grid);
  basis.tau = std::move(ts.tau);
  basis.sigma = std::move(ts.sigma);
  return basis;
}

WronskianReport wronskian_drift(const CharacteristicBasis& basis, const CoefficientSet& set) {
  const CumulativeIntegral tau_integral([&set](double t) { return tau_at(set, t); }, basis.grid);
  const auto w = basis.wronskian();
  WronskianReport report;
  report.drift.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    report.drift[i] = w[i] / (w[0] * std::exp(tau_integral.nodes()[i])) - 1.0;
    report.max_abs_drift = std::max(report.max_abs_drift, std::abs(report.drift[i]));
  }
  return report;
}

double classical_mode_equivalence(const MediumProfile& profile, const TimeGrid& grid) {
  const CoefficientSet set = medium_to_hamiltonian(profile, grid);
  const double u2 = profile.upsilon * profile.upsilon;
  const double h = 1e-3;
  double residual = 0.0;
  for (double t : grid.times()) {
    // Fourth-order centred difference of xi; the profile is smooth past the window.
    const double dxi = (-profile.xi(t + 2 * h) + 8 * profile.xi(t + h) - 8 * profile.xi(t - h) +
                        profile.xi(t - 2 * h)) /
                       (12 * h);
    const double xi = profile.xi(t);
    const double damping = (dxi + profile.chi(t)) / xi;
    const double stiffness = u2 / (xi * profile.eta(t));
    residual = std::max(residual, std::abs(-tau_at(set, t) - damping));
    residual = std::max(residual, std::abs(4.0 * sigma_at(set, t) - stiffness));
  }
  return residual;
}

void write_basis_csv(const CharacteristicBasis& basis, std::ostream& os) {
  CsvWriter csv(os, {"t", "mu0", "mu0p", "mu1", "mu1p", "lambda", "wronskian"});
  const auto w = basis.wronskian();
  for (std::size_t i = 0; i < basis.grid.size(); ++i) {
    csv.row({basis.grid[i], basis.mu0[i], basis.mu0p[i], basis.mu1[i], basis.mu1p[i],
             basis.lambda[i], w[i]});
  }
}

}  // namespace quadfield
