#pragma once

#include <iosfwd>
#include <vector>

#include "quadfield/characteristic.hpp"
#include "quadfield/coefficients.hpp"
#include "quadfield/ermakov.hpp"

namespace quadfield {

struct Means {
  double xbar, pbar;
};

/// Normalized means xbar = -eps/beta, pbar = delta - 2 alpha eps / beta.
Means means(const ErmakovState& state);
/// Raw matrix elements carry the norm weight lambda.
Means raw_means(const ErmakovState& state, double lambda);

struct Variances {
  double var_p, var_x, product;
  bool min_uncertainty;  // n = 0 and |alpha| below the flag tolerance
};

Variances variances(const ErmakovState& state, int n, double alpha_tol = 1e-12);

/// (n+1/2)[a(beta^2 + 4 alpha^2/beta^2) + (b + 2c alpha)/beta^2]
///   + a(delta - 2 alpha eps/beta)^2 + (eps/beta)(f + b eps/beta)
///   - (delta - 2 alpha eps/beta)(g + c eps/beta)
double hamiltonian_expectation(const ErmakovState& state, const CoefficientValues& v, int n);
double hamiltonian_expectation(const ErmakovState& state, const CoefficientSet& set, int n);

struct PhaseRates {
  double dynamical, geometric;
};

/// dphi/dt = (2n+1) a beta^2, dtheta/dt = <H> - dphi/dt.
PhaseRates phase_rates(const ErmakovState& state, const CoefficientSet& set, int n);

struct ModeAmplitudes {
  double d_amp, b_amp;
};

/// d_amp = varpi lambda pbar, b_amp = omega lambda xbar.
ModeAmplitudes mode_amplitudes(const Means& m, double lambda, const FieldScales& scales);

struct FockObservables {
  double t = 0;
  int n = 0;
  double xbar = 0, pbar = 0, raw_xbar = 0, raw_pbar = 0;
  double var_x = 0, var_p = 0, product = 0;
  bool min_uncertainty = false;
  double h_expect = 0;
  double phase_dyn_rate = 0, phase_geo_rate = 0;
  double phase_dyn = 0, phase_geo = 0;  // cumulative, trapezoid on the grid
  double d_amp = 0, b_amp = 0;
};

std::vector<FockObservables> evaluate_observables(const ErmakovPath& path,
                                                  const CharacteristicBasis& basis,
                                                  const CoefficientSet& set, int n,
                                                  const FieldScales& scales = {});

/// Geometric-phase rate from the matrix elements of i d/dt:
///   -kappa' - (eps^2 + n + 1/2) alpha' / beta^2 + eps delta' / beta,
/// with the derivatives taken by fourth-order differences of the path.
/// Requires a uniform grid.
std::vector<double> geometric_rate_from_derivatives(const ErmakovPath& path, int n);

/// Trapezoid running integral of samples on the path's times.
std::vector<double> cumulative_trapezoid(const ErmakovPath& path, const std::vector<double>& rate);

/// Times in (0, t_max] where alpha vanishes, refined by bracketing.
std::vector<double> minimum_uncertainty_instants(const ErmakovPath& path, const ComplexFrame& frame,
                                                 const CharacteristicBasis& basis,
                                                 const CoefficientSet& set);

struct ClassicalModeReport {
  std::vector<double> q, qp;  // classical solution and derivative on the grid
  double b_deviation = 0.0;   // max |b_amp/omega - lambda q| / max(1, max|q|)
  double d_deviation = 0.0;   // max |d_amp/varpi - lambda q'/(2a)| / max(1, max|q'/(2a)|)
};

/// Integrates q'' + ((xi' + chi)/xi) q' + upsilon^2/(xi eta) q = 0 from the
/// initial means (q(0) = xbar(0), q'(0) = 2a(0) pbar(0)) and compares the
/// scaled mode amplitudes with it. Undriven media only.
ClassicalModeReport classical_mode_deviation(const MediumProfile& profile,
                                             const CoefficientSet& set,
                                             const std::vector<FockObservables>& obs,
                                             const TimeGrid& grid, const OdeOptions& options = {});

/// CSV columns t,xbar,pbar,var_x,var_p,product,h_expect,phase_dyn,phase_geo,d_amp,b_amp.
void write_observables_csv(const std::vector<FockObservables>& obs, std::ostream& os);

}  // namespace quadfield
