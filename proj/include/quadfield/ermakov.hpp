#pragma once

#include <complex>
#include <string>
#include <vector>

#include "quadfield/characteristic.hpp"
#include "quadfield/coefficients.hpp"
#include "quadfield/ode.hpp"

namespace quadfield {

using cplx = std::complex<double>;

/// Values of (alpha, beta, gamma, delta, epsilon, kappa) at t = 0.
struct ErmakovInit {
  double alpha0 = 0.0;
  double beta0 = 1.0;
  double gamma0 = 0.0;
  double delta0 = 0.0;
  double eps0 = 0.0;
  double kappa0 = 0.0;

  /// beta0 > 0 fixes the sign branch; all values finite.
  void validate() const;
};

struct ErmakovState {
  double t = 0.0;
  double alpha = 0.0, beta = 1.0, gamma = 0.0, delta = 0.0, eps = 0.0, kappa = 0.0;
};

using ErmakovPath = std::vector<ErmakovState>;

/// Complex parametrization of one initial value problem.
///
/// z = c1 E + c2 E*, E = mu1/mu1(0) + i mu0. The driving terms enter through
/// the regular quadrature
///
///   Xi(t) = int_0^t [(f + 2 g alpha) conj(z)/lambda - i g beta0^2 lambda / z] ds
///         = eps0(t) + delta0(t) conj(z)/lambda,
///
/// so that zeta_regular = c3 + i Xi plays the role of zeta with the
/// homogeneous delta0 absorbed, and drive_phase is the matching regular part
/// of kappa0. Both stay finite where mu0 vanishes, unlike delta0 and eps0.
struct ComplexFrame {
  cplx c1, c2, c3;
  double beta0 = 1.0;
  std::vector<cplx> e, estar, z, zp;
  std::vector<double> arg_z;  // continuous branch, arg_z[0] = 0
  std::vector<cplx> drive;
  std::vector<double> drive_phase;
  std::vector<cplx> zeta_regular;
  /// c3 + i eps0(t); NaN where |mu0| is below the homogeneous guard.
  std::vector<cplx> zeta;
};

/// |mu0| below this fraction of max|mu0| counts as a zero of mu0.
inline constexpr double kHomogeneousGuard = 1e-8;

ComplexFrame build_frame(const ErmakovInit& init, const CharacteristicBasis& basis,
                         const CoefficientSet& set, const OdeOptions& options = {});

/// z(t) and z'(t) at an arbitrary time via the continuous basis.
std::pair<cplx, cplx> frame_z_at(const ComplexFrame& frame, const CharacteristicBasis& basis,
                                 double t);

/// alpha = Re(conj(z) z')/(4 a |z|^2) - d/(2a), valid for any t in the window.
double closed_form_alpha(const ComplexFrame& frame, const CharacteristicBasis& basis,
                         const CoefficientSet& set, double t);

struct HomogeneousState {
  double alpha0, beta0, gamma0;
};

/// Singular particular solution built from mu0, mu1 alone:
///   alpha0 = mu0'/(4 a mu0) - d/(2a),  beta0 = -lambda/mu0,
///   gamma0 = mu1/(2 mu1(0) mu0) + d(0)/(2 a(0)).
/// Throws SingularityError when |mu0(t)| is under the guard.
HomogeneousState homogeneous_state(const CharacteristicBasis& basis, const CoefficientSet& set,
                                   double t);

/// Driven homogeneous pieces on the grid.
struct HomogeneousDriven {
  std::vector<double> delta0, eps0, kappa0;
  std::vector<double> mu0_delta0;  // regular product mu0 * delta0
  std::vector<bool> regular;       // false where mu0 is under the guard
};

/// delta0 from its defining quadrature; eps0, kappa0 from the drive
/// quadrature of the reference frame z = E (beta0 = 1, alpha0 = -d(0)/(2a(0)),
/// c3 = 0). Values at t = 0 are the limits delta0 = -eps0 = g(0)/(2a(0)),
/// kappa0 = 0.
HomogeneousDriven homogeneous_driven(const CharacteristicBasis& basis, const CoefficientSet& set,
                                     const OdeOptions& options = {});

struct DrivenValues {
  double delta0, eps0, kappa0;
};

/// Literal nested quadratures for delta0, eps0, kappa0 at t. They divide by
/// mu0' and so require mu0' != 0 on [0, t]; otherwise TurningPointError.
DrivenValues homogeneous_driven_quadrature(const CharacteristicBasis& basis,
                                           const CoefficientSet& set, double t);

/// Closed-form state at grid index i.
ErmakovState solve_ermakov(const ErmakovInit& init, const ComplexFrame& frame,
                           const CharacteristicBasis& basis, const CoefficientSet& set,
                           std::size_t i);

ErmakovPath solve_ermakov(const ErmakovInit& init, const ComplexFrame& frame,
                          const CharacteristicBasis& basis, const CoefficientSet& set);

struct QuasiInvariantRow {
  double t;
  double alpha_relation;   // 2(alpha - alpha0) Im z = -beta^2 Re z
  double complex_relation; // eps + i(delta - delta0)/beta = zeta z / (beta0 |z|)
  double norm_relation;    // eps^2 + ((delta - delta0)/beta)^2 conserved form
  double kappa_relation;
};

/// Residuals are scaled as |L - R| / max(1, |L|, |R|).
struct QuasiInvariantReport {
  std::vector<QuasiInvariantRow> rows;
  double max_alpha = 0, max_complex = 0, max_norm = 0, max_kappa = 0;
  std::size_t excluded = 0;
  std::vector<std::string> notes;

  double max() const;
};

QuasiInvariantReport quasi_invariants(const ErmakovPath& path, const HomogeneousDriven& homogeneous,
                                      const ComplexFrame& frame, const CharacteristicBasis& basis,
                                      const CoefficientSet& set, const ErmakovInit& init,
                                      double t_from = 0.1);

/// CSV columns t,alpha,beta,gamma,delta,epsilon,kappa.
void write_ermakov_csv(const ErmakovPath& path, std::ostream& os);
void write_quasi_invariant_csv(const QuasiInvariantReport& report, std::ostream& os);

}  // namespace quadfield
