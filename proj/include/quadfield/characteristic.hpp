#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "quadfield/coefficients.hpp"
#include "quadfield/grid.hpp"
#include "quadfield/ode.hpp"
#include "quadfield/quadrature.hpp"

namespace quadfield {

struct CharacteristicOptions {
  OdeOptions ode;
  double mu1_init = 1.0;
};

/// tau = a'/a - 2c + 4d
double tau_at(const CoefficientSet& set, double t);
/// sigma = ab - cd + d^2 + (d/2)(a'/a) - d'/2
double sigma_at(const CoefficientSet& set, double t);

struct TauSigma {
  std::vector<double> tau, sigma;
};

TauSigma build_tau_sigma(const CoefficientSet& set, const TimeGrid& grid);

/// lambda(t) = exp(-int_0^t (c - 2d) ds) on the grid.
std::vector<double> compute_lambda(const CoefficientSet& set, const TimeGrid& grid);

struct BasisPoint {
  double mu0, mu0p, mu1, mu1p, lambda;
};

/// Standard solutions of mu'' - tau mu' + 4 sigma mu = 0 with
/// mu0(0) = 0, mu0'(0) = 2a(0), mu1(0) = mu1_init, mu1'(0) = 0.
struct CharacteristicBasis {
  TimeGrid grid;
  std::vector<double> mu0, mu0p, mu1, mu1p, lambda, tau, sigma;
  double mu1_init = 1.0;

  // Continuous extension between grid points.
  std::shared_ptr<const DenseTrajectory<4>> dense;
  // int_0^t (c - 2d); null when c and d vanish identically.
  std::shared_ptr<const CumulativeIntegral> damping;

  BasisPoint at(double t) const;
  BasisPoint at_index(std::size_t i) const {
    return {mu0[i], mu0p[i], mu1[i], mu1p[i], lambda[i]};
  }
  double lambda_at(double t) const;
  /// W = mu0' mu1 - mu0 mu1' on the grid.
  std::vector<double> wronskian() const;
  double max_abs_mu0() const;
};

CharacteristicBasis integrate_characteristic(const CoefficientSet& set, const TimeGrid& grid,
                                             const CharacteristicOptions& options = {});

struct WronskianReport {
  std::vector<double> drift;  // W(t) / (W(0) exp(int tau)) - 1
  double max_abs_drift = 0.0;
};

WronskianReport wronskian_drift(const CharacteristicBasis& basis, const CoefficientSet& set);

/// Max over the grid of |(-tau) - (xi' + chi)/xi| and |4 sigma - upsilon^2/(xi eta)|
/// for the coefficients generated by medium_to_hamiltonian. xi' is taken by
/// finite differences of the profile, independent of the coefficient path.
double classical_mode_equivalence(const MediumProfile& profile, const TimeGrid& grid);

/// CSV columns t,mu0,mu0p,mu1,mu1p,lambda,wronskian.
void write_basis_csv(const CharacteristicBasis& basis, std::ostream& os);

}  // namespace quadfield
