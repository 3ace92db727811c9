#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "quadfield/coefficients.hpp"
#include "quadfield/ermakov.hpp"
#include "quadfield/grid.hpp"
#include "quadfield/ode.hpp"

namespace quadfield {

/// Direct integration of the six Riccati-type equations for
/// (alpha, beta, gamma, delta, epsilon, kappa). Throws BlowUpError with the
/// last good time when beta leaves (0, inf) or the state turns non-finite.
ErmakovPath riccati_oracle(const ErmakovInit& init, const CoefficientSet& set,
                           const TimeGrid& grid, const OdeOptions& options = {});

/// b(t) = u x + v p + w.
struct OperatorCoefficients {
  cplx u, v, w;

  /// u conj(v) - conj(u) v; equals -i for a canonical pair.
  cplx commutator() const { return u * std::conj(v) - std::conj(u) * v; }
};

OperatorCoefficients ansatz_coefficients(const ErmakovState& state);

std::vector<OperatorCoefficients> ansatz_path(const ErmakovPath& path);

/// max |u conj(v) - conj(u) v + i| along a path.
double commutator_defect(const std::vector<OperatorCoefficients>& path);

struct HeisenbergReport {
  std::vector<double> t, ru, rv, rw;
  double max = 0.0;
};

/// Residual of u' = -c u + 2b v, v' = -2a u + c v, w' = g u - f v with
/// fourth-order differences. The grid must be uniform.
HeisenbergReport heisenberg_residual(const CoefficientSet& set, const TimeGrid& grid,
                                     const std::vector<OperatorCoefficients>& path);

struct PathDeviation {
  double alpha = 0, beta = 0, gamma = 0, delta = 0, eps = 0, kappa = 0;
  double relative = 0;  // max |x - y| / max(1, |y|) over all components
  double t_worst = 0;

  double max() const;
};

PathDeviation compare_paths(const ErmakovPath& closed_form, const ErmakovPath& oracle);

/// CSV columns t,u_residual,v_residual,w_residual.
void write_residual_csv(const HeisenbergReport& report, std::ostream& os);

}  // namespace quadfield
