#pragma once

#include <memory>
#include <string_view>

#include "quadfield/grid.hpp"
#include "quadfield/quadrature.hpp"
#include "quadfield/time_function.hpp"

namespace quadfield {

/// H = a p^2 + b x^2 + c xp - i d - f x - g p  (units c = hbar = 1)
struct CoefficientValues {
  double a = 0, b = 0, c = 0, d = 0, f = 0, g = 0;
};

enum class Coefficient { a, b, c, d, f, g };

std::string_view coefficient_name(Coefficient which);

struct TimeWindow {
  double t0 = 0.0;
  double t_max = 0.0;

  bool contains(double t) const;
};

struct CoefficientSet {
  TimeFunction a, b, c, d, f, g;
  TimeWindow window;

  const TimeFunction& function(Coefficient which) const;
  bool is_driven() const { return !f.is_zero() || !g.is_zero(); }
};

/// Values of all six coefficients at t. Throws CoefficientError when t lies
/// outside the window or any value is not finite.
CoefficientValues eval_coeffs(const CoefficientSet& set, double t);

/// First derivative of one coefficient at t.
double eval_derivative(const CoefficientSet& set, Coefficient which, double t);

namespace presets {

CoefficientSet static_oscillator(TimeWindow window);
CoefficientSet free_particle(TimeWindow window);
/// a = exp(-2 gamma t)/2, b = exp(2 gamma t)/2
CoefficientSet caldirola_kanai(double gamma, TimeWindow window);
/// a = 1/2, b = (1 + depth sin(omega t))/2
CoefficientSet parametric(double depth, double omega, TimeWindow window);
/// a = b = 1/2 with constant linear drives f, g.
CoefficientSet driven_oscillator(double f, double g, TimeWindow window);

}  // namespace presets

/// Scalar prefactors of the cavity field expansion.
struct FieldScales {
  double omega = 1.0;  // multiplies q in B
  double varpi = 1.0;  // multiplies p in D
};

/// Time parts of a factorized medium: permittivity xi(t), permeability
/// eta(t), conductivity chi(t), and the spatial mode constant upsilon.
struct MediumProfile {
  TimeFunction xi = TimeFunction::constant(1.0);
  TimeFunction eta = TimeFunction::constant(1.0);
  TimeFunction chi;
  double upsilon = 1.0;
  FieldScales scales;
};

/// Checks xi > 0, eta > 0, chi >= 0 at every grid point.
void validate_medium(const MediumProfile& profile, const TimeGrid& grid);

/// Single-mode quantization of a factorized medium:
///   a = exp(-I)/(2 xi),  b = upsilon^2 exp(I)/(2 eta),  I(t) = int_0^t chi/xi,
/// with c = d = f = g = 0.
CoefficientSet medium_to_hamiltonian(const MediumProfile& profile, const TimeGrid& grid);

}  // namespace quadfield
