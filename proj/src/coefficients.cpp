#include "quadfield/coefficients.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "quadfield/error.hpp"

namespace quadfield {

std::string_view coefficient_name(Coefficient which) {
  switch (which) {
    case Coefficient::a: return "a";
    case Coefficient::b: return "b";
    case Coefficient::c: return "c";
    case Coefficient::d: return "d";
    case Coefficient::f: return "f";
    case Coefficient::g: return "g";
  }
  return "?";
}

bool TimeWindow::contains(double t) const {
  const double slack = 1e-9 * std::max(1.0, std::abs(t_max - t0));
  return t >= t0 - slack && t <= t_max + slack;
}

const TimeFunction& CoefficientSet::function(Coefficient which) const {
  switch (which) {
    case Coefficient::a: return a;
    case Coefficient::b: return b;
    case Coefficient::c: return c;
    case Coefficient::d: return d;
    case Coefficient::f: return f;
    case Coefficient::g: return g;
  }
  return a;
}

namespace {

double checked(const TimeFunction& fn, Coefficient which, double t) {
  const double v = fn(t);
  if (!std::isfinite(v)) {
    throw CoefficientError(std::string(coefficient_name(which)), t, "non-finite value");
  }
  return v;
}

}  // namespace

CoefficientValues eval_coeffs(const CoefficientSet& set, double t) {
  if (!set.window.contains(t)) {
    throw CoefficientError("window", t, "time outside [" + std::to_string(set.window.t0) + ", " +
                                            std::to_string(set.window.t_max) + "]");
  }
  return {checked(set.a, Coefficient::a, t), checked(set.b, Coefficient::b, t),
          checked(set.c, Coefficient::c, t), checked(set.d, Coefficient::d, t),
          checked(set.f, Coefficient::f, t), checked(set.g, Coefficient::g, t)};
}

double eval_derivative(const CoefficientSet& set, Coefficient which, double t) {
  const double v = set.function(which).derivative(t);
  if (!std::isfinite(v)) {
    throw CoefficientError(std::string(coefficient_name(which)) + "'", t, "non-finite derivative");
  }
  return v;
}

namespace presets {

CoefficientSet static_oscillator(TimeWindow window) {
  CoefficientSet s;
  s.a = TimeFunction::constant(0.5);
  s.b = TimeFunction::constant(0.5);
  s.window = window;
  return s;
}

CoefficientSet free_particle(TimeWindow window) {
  CoefficientSet s;
  s.a = TimeFunction::constant(0.5);
  s.window = window;
  return s;
}

CoefficientSet caldirola_kanai(double gamma, TimeWindow window) {
  CoefficientSet s;
  s.a = TimeFunction::exponential(0.5, -2.0 * gamma);
  s.b = TimeFunction::exponential(0.5, 2.0 * gamma);
  s.window = window;
  return s;
}

CoefficientSet parametric(double depth, double omega, TimeWindow window) {
  CoefficientSet s;
  s.a = TimeFunction::constant(0.5);
  s.b = TimeFunction::sinusoid(0.5, 0.5 * depth, omega);
  s.window = window;
  return s;
}

CoefficientSet driven_oscillator(double f, double g, TimeWindow window) {
  CoefficientSet s = static_oscillator(window);
  s.f = TimeFunction::constant(f);
  s.g = TimeFunction::constant(g);
  return s;
}

}  // namespace presets

void validate_medium(const MediumProfile& profile, const TimeGrid& grid) {
  if (!(profile.upsilon > 0) || !std::isfinite(profile.upsilon)) {
    throw InvalidMediumError(0.0, "mode constant upsilon must be positive");
  }
  for (double t : grid.times()) {
    const double xi = profile.xi(t);
    const double eta = profile.eta(t);
    const double chi = profile.chi(t);
    if (!(xi > 0) || !std::isfinite(xi)) throw InvalidMediumError(t, "permittivity xi must be positive");
    if (!(eta > 0) || !std::isfinite(eta)) throw InvalidMediumError(t, "permeability eta must be positive");
    if (!(chi >= 0) || !std::isfinite(chi)) throw InvalidMediumError(t, "conductivity chi must be nonnegative");
  }
}

CoefficientSet medium_to_hamiltonian(const MediumProfile& profile, const TimeGrid& grid) {
  validate_medium(profile, grid);

  CoefficientSet set;
  set.window = {0.0, grid.back()};

  const auto xi = profile.xi;
  const auto eta = profile.eta;
  const auto chi = profile.chi;
  const double u2 = profile.upsilon * profile.upsilon;

  if (chi.is_zero()) {
    set.a = TimeFunction::custom(
        "1/(2 xi)", [xi](double t) { return 0.5 / xi(t); },
        [xi](double t) {
          const double x = xi(t);
          return -0.5 * xi.derivative(t) / (x * x);
        });
    set.b = TimeFunction::custom(
        "upsilon^2/(2 eta)", [eta, u2](double t) { return 0.5 * u2 / eta(t); },
        [eta, u2](double t) {
          const double e = eta(t);
          return -0.5 * u2 * eta.derivative(t) / (e * e);
        });
    return set;
  }

  auto loss = std::make_shared<const CumulativeIntegral>(
      [xi, chi](double t) { return chi(t) / xi(t); }, grid);

  set.a = TimeFunction::custom(
      "exp(-int chi/xi)/(2 xi)",
      [xi, loss](double t) { return 0.5 * std::exp(-(*loss)(t)) / xi(t); },
      [xi, chi, loss](double t) {
        const double x = xi(t);
        const double a = 0.5 * std::exp(-(*loss)(t)) / x;
        return -a * (xi.derivative(t) + chi(t)) / x;
      });
  set.b = TimeFunction::custom(
      "upsilon^2 exp(int chi/xi)/(2 eta)",
      [eta, loss, u2](double t) { return 0.5 * u2 * std::exp((*loss)(t)) / eta(t); },
      [xi, eta, chi, loss, u2](double t) {
        const double e = eta(t);
        const double b = 0.5 * u2 * std::exp((*loss)(t)) / e;
        return b * (chi(t) / xi(t) - eta.derivative(t) / e);
      });
  return set;
}

}  // namespace quadfield
