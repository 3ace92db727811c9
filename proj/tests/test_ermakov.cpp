#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "quadfield/error.hpp"
#include "quadfield/finite_difference.hpp"
#include "support.hpp"

using namespace quadfield;
using quadfield::test::Pipeline;

namespace {
const TimeWindow kWindow{0.0, 10.0};
const TimeGrid kGrid = TimeGrid::uniform(10.0, 0.01);
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("frame constants for the static oscillator") {
  const Pipeline p(presets::static_oscillator(kWindow), kGrid);
  CHECK(std::abs(p.frame.c1 - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(p.frame.c2) < 1e-15);
  double err = 0;
  for (std::size_t i = 0; i < kGrid.size(); ++i) {
    err = std::max(err, std::abs(p.frame.z[i] - std::polar(1.0, kGrid[i])));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("squeezed frame") {
  ErmakovInit init;
  init.beta0 = std::sqrt(2.0);
  const Pipeline p(presets::static_oscillator(kWindow), kGrid, init);
  CHECK(std::abs(p.frame.c1 - cplx(1.5, 0.0)) < 1e-15);
  CHECK(std::abs(p.frame.c2 - cplx(-0.5, 0.0)) < 1e-15);
  double err = 0;
  for (std::size_t i = 0; i < kGrid.size(); ++i) {
    err = std::max(err, std::abs(std::norm(p.frame.z[i]) - (2.5 - 1.5 * std::cos(2 * kGrid[i]))));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("frame identities for random initial data") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto set = presets::parametric(0.2, 1.3, kWindow);
  set.c = TimeFunction::constant(0.1);
  set.d = TimeFunction::constant(0.05);
  const TimeGrid grid = TimeGrid::uniform(5.0, 0.01);
  const auto basis = integrate_characteristic(set, grid);
  for (int k = 0; k < 20; ++k) {
    ErmakovInit init{u(rng), 0.3 + 2.0 * std::abs(u(rng)), u(rng), u(rng), u(rng), u(rng)};
    const auto frame = build_frame(init, basis, set);
    CHECK(frame.c1 + frame.c2 == cplx(1.0, 0.0));
    CHECK(std::abs(std::norm(frame.c1) - std::norm(frame.c2) - init.beta0 * init.beta0) < 1e-14);
    CHECK(std::abs(frame.c3 - cplx(init.eps0 * init.beta0, init.delta0)) < 1e-15);
    CHECK(std::abs(frame.z[0] - 1.0) < 1e-15);
    CHECK(std::abs(frame.zp[0] - cplx(0, 2 * 0.5) * (frame.c1 - frame.c2)) < 1e-14);

    const double w = std::norm(frame.c1) - std::norm(frame.c2);
    double e_err = 0, mu_err = 0, zmin = 1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const cplx z = frame.z[i];
      e_err = std::max(e_err, std::abs((std::conj(frame.c1) * z - frame.c2 * std::conj(z)) / w -
                                       frame.e[i]));
      mu_err = std::max(mu_err, std::abs((z - std::conj(z)) / (2.0 * cplx(0, 1) *
                                                               (frame.c1 - std::conj(frame.c2))) -
                                         basis.mu0[i]));
      zmin = std::min(zmin, std::abs(z));
    }
    CHECK(e_err < 1e-10);
    CHECK(mu_err < 1e-10);
    CHECK(zmin > 0.0);
  }
}

TEST_CASE("invalid initial data") {
  ErmakovInit init;
  init.beta0 = 0.0;
  CHECK_THROWS_AS(init.validate(), ConfigError);
  init.beta0 = -1.0;
  CHECK_THROWS_AS(init.validate(), ConfigError);
  init.beta0 = 1.0;
  init.kappa0 = std::nan("");
  CHECK_THROWS_AS(init.validate(), ConfigError);
}

TEST_CASE("homogeneous state examples") {
  const auto set = presets::static_oscillator(kWindow);
  const auto basis = integrate_characteristic(set, kGrid);
  auto h = homogeneous_state(basis, set, kPi / 2);
  CHECK(std::abs(h.alpha0) < 1e-9);
  CHECK(std::abs(h.beta0 + 1.0) < 1e-9);
  CHECK(std::abs(h.gamma0) < 1e-9);
  h = homogeneous_state(basis, set, kPi / 4);
  CHECK(std::abs(h.alpha0 - 0.5) < 1e-9);
  CHECK(std::abs(h.beta0 + std::sqrt(2.0)) < 1e-9);
  CHECK_THROWS_AS(homogeneous_state(basis, set, 0.0), SingularityError);

  const auto ck = presets::caldirola_kanai(1.0, kWindow);
  const auto ck_basis = integrate_characteristic(ck, kGrid);
  CHECK(std::abs(homogeneous_state(ck_basis, ck, 1.0).alpha0) < 1e-9);
}

TEST_CASE("driven homogeneous pieces") {
  SUBCASE("undriven pieces vanish") {
    const auto set = presets::static_oscillator(kWindow);
    const auto basis = integrate_characteristic(set, kGrid);
    const auto h = homogeneous_driven(basis, set);
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
      if (!h.regular[i]) continue;
      CHECK(h.delta0[i] == 0.0);
      CHECK(h.eps0[i] == 0.0);
      CHECK(h.kappa0[i] == 0.0);
    }
    const auto q = homogeneous_driven_quadrature(basis, set, 1.0);
    CHECK(q.delta0 == 0.0);
    CHECK(q.eps0 == 0.0);
    CHECK(q.kappa0 == 0.0);
  }
  SUBCASE("constant f: delta0 = (1 - cos t)/sin t") {
    const auto set = test::driven_static(1.0, 0.0);
    const auto basis = integrate_characteristic(set, kGrid);
    const auto h = homogeneous_driven(basis, set);
    double err = 0;
    for (std::size_t i = 1; i < kGrid.size(); ++i) {
      const double t = kGrid[i];
      if (std::abs(std::sin(t)) < 0.05) continue;
      err = std::max(err, std::abs(h.delta0[i] - (1 - std::cos(t)) / std::sin(t)));
    }
    CHECK(err < 1e-8);
    const std::size_t half_pi = 157;  // t = 1.57
    CHECK(std::abs(h.delta0[half_pi] - (1 - std::cos(1.57)) / std::sin(1.57)) < 1e-10);
    // independent route: the nested quadratures, closed to t/2 - tan(t/2)
    for (double t : {0.3, 0.8, 1.2, 1.5}) {
      const auto q = homogeneous_driven_quadrature(basis, set, t);
      CHECK(std::abs(q.delta0 - std::tan(t / 2)) < 1e-9);
      CHECK(std::abs(q.eps0 - std::tan(t / 2)) < 1e-9);
      CHECK(std::abs(q.kappa0 - (t / 2 - std::tan(t / 2))) < 1e-9);
    }
    CHECK_THROWS_AS(homogeneous_driven_quadrature(basis, set, 2.0), TurningPointError);
  }
  SUBCASE("constant g: limits at t = 0") {
    const auto set = test::driven_static(0.0, 1.0);
    const auto basis = integrate_characteristic(set, kGrid);
    const auto h = homogeneous_driven(basis, set);
    CHECK(h.delta0[0] == 1.0);
    CHECK(h.eps0[0] == -1.0);
    CHECK(h.kappa0[0] == 0.0);
    // continuity away from the limit
    CHECK(std::abs(h.delta0[1] - 1.0) < 0.02);
    CHECK(std::abs(h.eps0[1] + 1.0) < 0.02);
  }
  SUBCASE("ODE route against the nested quadratures") {
    const auto set = test::driven_static(1.0, 0.7);
    const auto basis = integrate_characteristic(set, kGrid);
    const auto h = homogeneous_driven(basis, set);
    for (std::size_t i : {20u, 60u, 100u, 120u, 150u}) {
      const auto q = homogeneous_driven_quadrature(basis, set, kGrid[i]);
      CHECK(std::abs(h.delta0[i] - q.delta0) < 1e-8);
      CHECK(std::abs(h.eps0[i] - q.eps0) < 1e-8);
      CHECK(std::abs(h.kappa0[i] - q.kappa0) < 1e-8);
    }
  }
}

TEST_CASE("ground static oscillator solution") {
  const Pipeline p(presets::static_oscillator(kWindow), kGrid);
  for (const auto& s : p.path) {
    CHECK(std::abs(s.alpha) < 1e-9);
    CHECK(std::abs(s.beta - 1.0) < 1e-9);
    CHECK(std::abs(s.gamma + s.t / 2) < 1e-9);
    CHECK(s.delta == 0.0);
    CHECK(s.eps == 0.0);
    CHECK(s.kappa == 0.0);
  }
}

TEST_CASE("squeezed beta at pi/4") {
  ErmakovInit init;
  init.beta0 = std::sqrt(2.0);
  const TimeGrid grid(std::vector<double>{0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2});
  const Pipeline p(presets::static_oscillator(kWindow), grid, init);
  CHECK(std::abs(p.path[2].beta - 0.894427191) < 1e-9);
}

TEST_CASE("driven solution against the direct integration") {
  const Pipeline p(test::driven_static(1.0, 0.0), kGrid);
  const auto dev = compare_paths(p.path, p.oracle());
  CHECK(dev.delta < 1e-8);
  CHECK(dev.eps < 1e-8);
  CHECK(dev.relative < 1e-8);
}

TEST_CASE("undriven data keep delta, eps at zero and kappa constant") {
  ErmakovInit init{0.3, 0.8, 0.1, 0.0, 0.0, 0.25};
  const Pipeline p(presets::caldirola_kanai(0.25, kWindow), kGrid, init);
  for (const auto& s : p.path) {
    CHECK(std::abs(s.delta) < 1e-14);
    CHECK(std::abs(s.eps) < 1e-14);
    CHECK(std::abs(s.kappa - 0.25) < 1e-14);
    CHECK(s.beta > 0.0);
  }
}

TEST_CASE("structural properties of the closed form") {
  auto set = presets::parametric(0.3, 1.7, kWindow);
  set.c = TimeFunction::sinusoid(0.05, 0.05, 0.9);
  set.d = TimeFunction::constant(0.02);
  set.f = TimeFunction::sinusoid(0.0, 0.4, 1.1);
  set.g = TimeFunction::constant(0.3);
  const double h = 1e-3;
  const TimeGrid grid = TimeGrid::uniform(6.0, h);
  ErmakovInit init{0.2, 1.3, 0.0, 0.4, -0.2, 0.1};
  const Pipeline p(set, grid, init, test::tight());
  const std::size_t n = grid.size();

  double beta_err = 0;
  std::vector<double> mu(n), gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double absz = std::abs(p.frame.z[i]);
    beta_err = std::max(beta_err, std::abs(p.path[i].beta * absz - init.beta0 * p.basis.lambda[i]));
    mu[i] = absz / init.beta0;
    gamma[i] = p.path[i].gamma;
  }
  CHECK(beta_err < 1e-14);

  const auto mup = fd_derivative(mu, h);
  const auto mupp = fd_derivative(mup, h);
  const auto gp = fd_derivative(gamma, h);
  double ermakov = 0, gamma_rate = 0, gamma_jump = 0;
  for (std::size_t i = 4; i + 4 < n; ++i) {
    const auto v = eval_coeffs(set, grid[i]);
    const double b4 = std::pow(p.path[i].beta, 4);
    const double lhs = mupp[i] - p.basis.tau[i] * mup[i] + 4 * p.basis.sigma[i] * mu[i];
    const double rhs = 4 * v.a * v.a * b4 * mu[i];
    ermakov = std::max(ermakov, std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    gamma_rate = std::max(gamma_rate, std::abs(gp[i] + v.a * p.path[i].beta * p.path[i].beta));
    gamma_jump = std::max(gamma_jump, std::abs(gamma[i] - gamma[i - 1]));
  }
  CHECK(ermakov < 1e-6);
  CHECK(gamma_rate < 1e-6);
  CHECK(gamma_jump < 0.01);
  CHECK(compare_paths(p.path, p.oracle()).relative < 1e-8);
}

TEST_CASE("quasi-invariants") {
  SUBCASE("undriven ground state") {
    const Pipeline p(presets::static_oscillator(kWindow), kGrid, {}, test::tight());
    const auto h = homogeneous_driven(p.basis, p.set, p.ode);
    CHECK(quasi_invariants(p.path, h, p.frame, p.basis, p.set, p.init).max() < 1e-10);
  }
  SUBCASE("driven f = 1") {
    const Pipeline p(test::driven_static(1.0, 0.0), kGrid);
    const auto h = homogeneous_driven(p.basis, p.set);
    const auto r = quasi_invariants(p.path, h, p.frame, p.basis, p.set, p.init);
    CHECK(r.max() < 1e-7);
    CHECK(r.rows.front().t >= 0.1);
  }
  SUBCASE("grid points on zeros of mu0 are excluded with a note") {
    const TimeGrid grid = TimeGrid::uniform(3 * kPi, kPi / 100);
    const Pipeline p(test::driven_static(1.0, 0.0, {0.0, 3 * kPi}), grid);
    const auto h = homogeneous_driven(p.basis, p.set);
    const auto r = quasi_invariants(p.path, h, p.frame, p.basis, p.set, p.init);
    CHECK(r.excluded == 3);
    CHECK_FALSE(r.notes.empty());
    CHECK(r.max() < 1e-7);
  }
  SUBCASE("squeezed driven, complex relation") {
    ErmakovInit init;
    init.beta0 = std::sqrt(2.0);
    const Pipeline p(test::driven_static(1.0, 0.5), kGrid, init);
    const auto h = homogeneous_driven(p.basis, p.set);
    const auto r = quasi_invariants(p.path, h, p.frame, p.basis, p.set, p.init);
    CHECK(r.max_complex < 1e-7);
    CHECK(r.max() < 1e-7);
  }
}
