#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quadfield/coefficients.hpp"
#include "quadfield/error.hpp"

using namespace quadfield;

namespace {
const TimeWindow kWindow{0.0, 10.0};
}

TEST_CASE("static oscillator coefficients") {
  const auto v = eval_coeffs(presets::static_oscillator(kWindow), 0.7);
  CHECK(v.a == 0.5);
  CHECK(v.b == 0.5);
  CHECK(v.c == 0.0);
  CHECK(v.d == 0.0);
  CHECK(v.f == 0.0);
  CHECK(v.g == 0.0);
}

TEST_CASE("Caldirola-Kanai coefficients at t = 1") {
  const auto v = eval_coeffs(presets::caldirola_kanai(1.0, kWindow), 1.0);
  CHECK(v.a == doctest::Approx(std::exp(-2.0) / 2).epsilon(1e-15));
  CHECK(v.b == doctest::Approx(std::exp(2.0) / 2).epsilon(1e-15));
  CHECK(v.c == 0.0);
  CHECK(v.f == 0.0);
}

TEST_CASE("parametric b at pi/4") {
  const auto v = eval_coeffs(presets::parametric(0.1, 2.0, kWindow), std::numbers::pi / 4);
  CHECK(std::abs(v.b - 0.55) < 1e-15);
}

TEST_CASE("evaluation outside the window or non-finite") {
  const auto set = presets::static_oscillator(kWindow);
  CHECK_THROWS_AS(eval_coeffs(set, 10.5), CoefficientError);

  CoefficientSet bad = set;
  bad.b = TimeFunction::custom("log", [](double t) { return std::log(t - 1.0); },
                               [](double t) { return 1.0 / (t - 1.0); });
  try {
    eval_coeffs(bad, 0.5);
    FAIL("expected CoefficientError");
  } catch (const CoefficientError& e) {
    CHECK(e.function() == "b");
    CHECK(e.time() == 0.5);
  }
}

TEST_CASE("medium mapping examples") {
  const TimeGrid grid = TimeGrid::uniform(10.0, 0.01);

  SUBCASE("vacuum gives the static oscillator") {
    MediumProfile m;
    const auto set = medium_to_hamiltonian(m, grid);
    for (double t : {0.0, 1.3, 7.7}) {
      const auto v = eval_coeffs(set, t);
      CHECK(v.a == doctest::Approx(0.5).epsilon(1e-15));
      CHECK(v.b == doctest::Approx(0.5).epsilon(1e-15));
      CHECK(v.c == 0.0);
      CHECK(v.d == 0.0);
    }
  }
  SUBCASE("constant conductivity") {
    MediumProfile m;
    const double k = 0.3;
    m.chi = TimeFunction::constant(k);
    const auto set = medium_to_hamiltonian(m, grid);
    for (double t : {0.0, 0.555, 3.0, 9.99}) {
      const auto v = eval_coeffs(set, t);
      CHECK(std::abs(v.a - std::exp(-k * t) / 2) < 1e-13);
      CHECK(std::abs(v.b - std::exp(k * t) / 2) < 1e-12);
    }
  }
  SUBCASE("modulated permittivity") {
    MediumProfile m;
    m.xi = TimeFunction::sinusoid(1.0, 0.2, 1.0);
    m.upsilon = 2.0;
    const auto v = eval_coeffs(medium_to_hamiltonian(m, grid), std::numbers::pi / 2);
    CHECK(std::abs(v.a - 1.0 / 2.4) < 1e-14);
    CHECK(std::abs(v.b - 2.0) < 1e-14);
  }
  SUBCASE("nonpositive permittivity") {
    MediumProfile m;
    m.xi = TimeFunction::sinusoid(0.5, 1.0, 1.0);
    CHECK_THROWS_AS(medium_to_hamiltonian(m, grid), InvalidMediumError);
  }
  SUBCASE("negative conductivity") {
    MediumProfile m;
    m.chi = TimeFunction::constant(-0.1);
    CHECK_THROWS_AS(validate_medium(m, grid), InvalidMediumError);
  }
}

TEST_CASE("medium mapping properties") {
  const TimeGrid grid = TimeGrid::uniform(10.0, 0.05);
  MediumProfile m;
  m.xi = TimeFunction::sinusoid(1.0, 0.3, 0.7);
  m.eta = TimeFunction::exponential(1.2, -0.05);
  m.upsilon = 1.7;

  SUBCASE("4ab = upsilon^2/(xi eta) with conductivity") {
    m.chi = TimeFunction::sinusoid(0.2, 0.1, 1.3);
    const auto set = medium_to_hamiltonian(m, grid);
    for (double t : grid.times()) {
      const auto v = eval_coeffs(set, t);
      const double rhs = m.upsilon * m.upsilon / (m.xi(t) * m.eta(t));
      CHECK(std::abs(4 * v.a * v.b - rhs) <= 1e-13 * rhs);
    }
  }
  SUBCASE("a b xi eta constant without conductivity") {
    const auto set = medium_to_hamiltonian(m, grid);
    for (double t : grid.times()) {
      const auto v = eval_coeffs(set, t);
      CHECK(std::abs(v.a * v.b * m.xi(t) * m.eta(t) - m.upsilon * m.upsilon / 4) < 1e-13);
    }
  }
}

TEST_CASE("table functions follow the samples") {
  std::vector<double> t, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.05 * i);
    y.push_back(std::sin(t.back()));
  }
  const auto f = TimeFunction::table(t, y);
  CHECK(f(0.05 * 37) == doctest::Approx(std::sin(0.05 * 37)).epsilon(1e-14));
  CHECK(std::abs(f(2.5321) - std::sin(2.5321)) < 1e-6);
  CHECK(std::abs(f.derivative(4.01) - std::cos(4.01)) < 1e-4);
}
