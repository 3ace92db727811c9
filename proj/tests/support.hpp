#pragma once

#include "quadfield/characteristic.hpp"
#include "quadfield/ermakov.hpp"
#include "quadfield/verify.hpp"

namespace quadfield::test {

struct Pipeline {
  CoefficientSet set;
  TimeGrid grid;
  ErmakovInit init;
  CharacteristicBasis basis;
  ComplexFrame frame;
  ErmakovPath path;

  OdeOptions ode;

  Pipeline(CoefficientSet s, TimeGrid g, ErmakovInit i = {}, OdeOptions o = {})
      : set(std::move(s)), grid(std::move(g)), init(i), ode(o) {
    basis = integrate_characteristic(set, grid, {ode, 1.0});
    frame = build_frame(init, basis, set, ode);
    path = solve_ermakov(init, frame, basis, set);
  }

  ErmakovPath oracle() const { return riccati_oracle(init, set, grid, ode); }
};

/// Tighter than the defaults, for examples whose thresholds sit near the
/// default integration error.
inline OdeOptions tight() {
  OdeOptions o;
  o.rel_tol = 1e-12;
  o.abs_tol = 1e-14;
  return o;
}

inline CoefficientSet driven_static(double f, double g, TimeWindow w = {0.0, 10.0}) {
  return presets::driven_oscillator(f, g, w);
}

}  // namespace quadfield::test
