#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "quadfield/error.hpp"
#include "support.hpp"

using namespace quadfield;
using quadfield::test::Pipeline;

namespace {
const TimeWindow kWindow{0.0, 10.0};
const TimeGrid kGrid = TimeGrid::uniform(10.0, 0.01);
const double kRoot2 = std::numbers::sqrt2;
}  // namespace

TEST_CASE("direct integration of the ground static oscillator") {
  const auto path = riccati_oracle({}, presets::static_oscillator(kWindow), kGrid);
  const auto& last = path.back();
  CHECK(last.t == 10.0);
  CHECK(std::abs(last.alpha) < 1e-9);
  CHECK(std::abs(last.beta - 1.0) < 1e-9);
  CHECK(std::abs(last.gamma + 5.0) < 1e-9);
  CHECK(std::abs(last.delta) < 1e-9);
  CHECK(std::abs(last.eps) < 1e-9);
}

TEST_CASE("closed form against direct integration") {
  SUBCASE("squeezed") {
    ErmakovInit init;
    init.beta0 = kRoot2;
    const Pipeline p(presets::static_oscillator(kWindow), kGrid, init);
    CHECK(compare_paths(p.path, p.oracle()).max() < 1e-8);
  }
  SUBCASE("Caldirola-Kanai") {
    const Pipeline p(presets::caldirola_kanai(0.25, kWindow), kGrid, {}, test::tight());
    CHECK(compare_paths(p.path, p.oracle()).relative < 1e-8);
  }
}

TEST_CASE("blow-up is reported with the last good time") {
  // a(t) = 1/(2(1 - t)) is positive; beta stays finite but the state diverges
  // toward t = 1 through alpha.
  CoefficientSet set = presets::free_particle({0.0, 2.0});
  set.b = TimeFunction::custom(
      "spike", [](double t) { return t < 1.0 ? -1.0 / ((1.0 - t) * (1.0 - t)) : std::nan(""); },
      [](double t) { return -2.0 / std::pow(1.0 - t, 3); });
  try {
    riccati_oracle({}, set, TimeGrid::uniform(2.0, 0.01));
    FAIL("expected a numerical failure");
  } catch (const BlowUpError& e) {
    CHECK(e.last_good_time() < 1.0);
  } catch (const NumericalError& e) {
    CHECK(e.time() <= 1.0);
  }
}

TEST_CASE("ansatz coefficients") {
  ErmakovState s;
  auto c = ansatz_coefficients(s);
  CHECK(std::abs(c.u - cplx(1 / kRoot2, 0)) < 1e-16);
  CHECK(std::abs(c.v - cplx(0, 1 / kRoot2)) < 1e-16);
  CHECK(std::abs(c.w) == 0.0);

  s.t = 1.3;
  s.gamma = -0.65;
  c = ansatz_coefficients(s);
  CHECK(std::abs(c.u - std::polar(1 / kRoot2, 1.3)) < 1e-15);
  CHECK(std::abs(c.v - cplx(0, 1) * std::polar(1 / kRoot2, 1.3)) < 1e-15);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    ErmakovState r{0.0, u(rng), 1.5 + u(rng), 10 * u(rng), u(rng), u(rng), u(rng)};
    CHECK(std::abs(ansatz_coefficients(r).commutator() + cplx(0, 1)) < 1e-14);
  }
  // Far from unit scale the defect is roundoff in |u||v|.
  std::uniform_real_distribution<double> w(-3.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    ErmakovState r{0.0, w(rng), 0.1 + std::abs(w(rng)), w(rng), w(rng), w(rng), w(rng)};
    const auto c = ansatz_coefficients(r);
    CHECK(std::abs(c.commutator() + cplx(0, 1)) < 1e-14 * std::max(1.0, std::abs(c.u) * std::abs(c.v)));
  }

  s.beta = 0.0;
  CHECK_THROWS_AS(ansatz_coefficients(s), InvalidStateError);
}

TEST_CASE("commutator along both paths") {
  const Pipeline p(test::driven_static(1.0, 0.4), kGrid, {0.1, 1.2, 0.0, 0.3, 0.2, 0.0});
  CHECK(commutator_defect(ansatz_path(p.path)) < 1e-12);
  CHECK(commutator_defect(ansatz_path(p.oracle())) < 1e-12);
}

TEST_CASE("Heisenberg residual") {
  const TimeGrid fine = TimeGrid::uniform(10.0, 1e-3);
  SUBCASE("ground static oscillator") {
    const Pipeline p(presets::static_oscillator(kWindow), fine);
    CHECK(heisenberg_residual(p.set, fine, ansatz_path(p.path)).max < 1e-6);
  }
  SUBCASE("driven f = 1") {
    const Pipeline p(test::driven_static(1.0, 0.0), fine);
    CHECK(heisenberg_residual(p.set, fine, ansatz_path(p.path)).max < 1e-6);
  }
  SUBCASE("vanishing right-hand side") {
    CoefficientSet set;
    set.window = kWindow;
    std::vector<OperatorCoefficients> ops(fine.size(), ansatz_coefficients(ErmakovState{}));
    // roundoff of the stencil only: a few eps / dt
    CHECK(heisenberg_residual(set, fine, ops).max < 1e-12);
  }
}
