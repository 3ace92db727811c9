#include "quadfield/ermakov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "quadfield/csv.hpp"
#include "quadfield/error.hpp"

namespace quadfield {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr cplx kI{0.0, 1.0};

struct FrameConstants {
  cplx c1, c2, c3;
  double beta0;
};

struct ZPoint {
  cplx z, zp;
  double lambda;
};

ZPoint z_from(const FrameConstants& k, const BasisPoint& bp, double mu1_init) {
  const cplx e{bp.mu1 / mu1_init, bp.mu0};
  const cplx ep{bp.mu1p / mu1_init, bp.mu0p};
  return {k.c1 * e + k.c2 * std::conj(e), k.c1 * ep + k.c2 * std::conj(ep), bp.lambda};
}

double alpha_from(const ZPoint& p, const CoefficientValues& v) {
  return std::real(std::conj(p.z) * p.zp) / (4.0 * v.a * std::norm(p.z)) - v.d / (2.0 * v.a);
}

struct DriveSamples {
  std::vector<cplx> xi;
  std::vector<double> k;
};

// Joint integration of the regular drive quadrature Xi and its phase part K.
DriveSamples integrate_drive(const FrameConstants& k, const CharacteristicBasis& basis,
                             const CoefficientSet& set, const OdeOptions& options) {
  const std::size_t n = basis.grid.size();
  DriveSamples out{std::vector<cplx>(n, 0.0), std::vector<double>(n, 0.0)};
  if (set.f.is_zero() && set.g.is_zero()) return out;

  const double b02 = k.beta0 * k.beta0;
  auto rhs = [&](double t, const OdeState<3>& y) -> OdeState<3> {
    const CoefficientValues v = eval_coeffs(set, t);
    const ZPoint p = z_from(k, basis.at(t), basis.mu1_init);
    const double alpha = alpha_from(p, v);
    const cplx dxi = (v.f + 2.0 * v.g * alpha) * std::conj(p.z) / p.lambda -
                     kI * v.g * b02 * p.lambda / p.z;
    const cplx zeta = k.c3 + kI * cplx{y[0], y[1]};
    const double nz = std::norm(p.z);
    const double delta = p.lambda * std::imag(zeta * p.z) / nz;
    const double dk = v.g * delta + std::imag(zeta * p.z * dxi) * std::imag(p.z) / (b02 * nz);
    return {dxi.real(), dxi.imag(), dk};
  };
  const auto dense = integrate_dopri5<3>(rhs, 0.0, OdeState<3>{0.0, 0.0, 0.0}, basis.grid.back(),
                                         options, "ermakov");
  for (std::size_t i = 1; i < n; ++i) {
    const auto y = dense(basis.grid[i]);
    out.xi[i] = {y[0], y[1]};
    out.k[i] = y[2];
  }
  return out;
}

double mu0_guard(const CharacteristicBasis& basis) {
  return kHomogeneousGuard * basis.max_abs_mu0();
}

double scaled(double l, double r) {
  return std::abs(l - r) / std::max({1.0, std::abs(l), std::abs(r)});
}

double scaled(cplx l, cplx r) {
  return std::abs(l - r) / std::max({1.0, std::abs(l), std::abs(r)});
}

}  // namespace

void ErmakovInit::validate() const {
  const double v[] = {alpha0, beta0, gamma0, delta0, eps0, kappa0};
  const char* names[] = {"alpha0", "beta0", "gamma0", "delta0", "epsilon0", "kappa0"};
  for (int i = 0; i < 6; ++i) {
    if (!std::isfinite(v[i])) throw ConfigError(std::string("init.") + names[i], "must be finite");
  }
  if (!(beta0 > 0)) throw ConfigError("init.beta0", "must be positive");
}

ComplexFrame build_frame(const ErmakovInit& init, const CharacteristicBasis& basis,
                         const CoefficientSet& set, const OdeOptions& options) {
  init.validate();
  const CoefficientValues v0 = eval_coeffs(set, 0.0);
  if (v0.a == 0.0) throw CoefficientError("a", 0.0, "a(0) must be nonzero");

  ComplexFrame frame;
  const double shift = init.alpha0 + v0.d / (2.0 * v0.a);
  const double b02 = init.beta0 * init.beta0;
  frame.c1 = {(1.0 + b02) / 2.0, -shift};
  // Re c1 >= 1/2, so 1 - Re c1 is exact and c1 + c2 = 1 holds in floating point.
  frame.c2 = {1.0 - frame.c1.real(), shift};
  frame.c3 = {init.eps0 * init.beta0, init.delta0};
  frame.beta0 = init.beta0;
  const FrameConstants k{frame.c1, frame.c2, frame.c3, frame.beta0};

  const std::size_t n = basis.grid.size();
  frame.e.resize(n);
  frame.estar.resize(n);
  frame.z.resize(n);
  frame.zp.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const BasisPoint bp = basis.at_index(i);
    frame.e[i] = {bp.mu1 / basis.mu1_init, bp.mu0};
    frame.estar[i] = std::conj(frame.e[i]);
    const ZPoint p = z_from(k, bp, basis.mu1_init);
    frame.z[i] = p.z;
    frame.zp[i] = p.zp;
  }

  frame.arg_z.assign(n, 0.0);
  frame.arg_z[0] = std::arg(frame.z[0]);
  for (std::size_t i = 1; i < n; ++i) {
    double step = std::arg(frame.z[i] / frame.z[i - 1]);
    if (std::abs(step) > std::numbers::pi / 4) {
      // Coarse sampling: follow z through the interval on the dense basis.
      constexpr int kSub = 64;
      step = 0.0;
      cplx prev = frame.z[i - 1];
      for (int j = 1; j <= kSub; ++j) {
        const double t = basis.grid[i - 1] + (basis.grid[i] - basis.grid[i - 1]) * j / kSub;
        const cplx cur = j == kSub ? frame.z[i] : z_from(k, basis.at(t), basis.mu1_init).z;
        step += std::arg(cur / prev);
        prev = cur;
      }
    }
    frame.arg_z[i] = frame.arg_z[i - 1] + step;
  }

  auto drive = integrate_drive(k, basis, set, options);
  frame.drive = std::move(drive.xi);
  frame.drive_phase = std::move(drive.k);
  frame.zeta_regular.resize(n);
  frame.zeta.resize(n);
  const bool driven = !(set.f.is_zero() && set.g.is_zero());
  const double guard = mu0_guard(basis);
  for (std::size_t i = 0; i < n; ++i) {
    frame.zeta_regular[i] = frame.c3 + kI * frame.drive[i];
    if (!driven) {
      frame.zeta[i] = frame.c3;
    } else if (i == 0) {
      frame.zeta[i] = frame.c3 - kI * v0.g / (2.0 * v0.a);
    } else if (std::abs(basis.mu0[i]) <= guard) {
      frame.zeta[i] = {kNaN, kNaN};
    } else {
      const cplx xi = frame.drive[i];
      const double eps0 = xi.real() + xi.imag() * frame.z[i].real() / (b02 * basis.mu0[i]);
      frame.zeta[i] = frame.c3 + kI * eps0;
    }
  }
  return frame;
}

std::pair<cplx, cplx> frame_z_at(const ComplexFrame& frame, const CharacteristicBasis& basis,
                                 double t) {
  const ZPoint p = z_from({frame.c1, frame.c2, frame.c3, frame.beta0}, basis.at(t),
                          basis.mu1_init);
  return {p.z, p.zp};
}

double closed_form_alpha(const ComplexFrame& frame, const CharacteristicBasis& basis,
                         const CoefficientSet& set, double t) {
  const ZPoint p = z_from({frame.c1, frame.c2, frame.c3, frame.beta0}, basis.at(t),
                          basis.mu1_init);
  return alpha_from(p, eval_coeffs(set, t));
}

HomogeneousState homogeneous_state(const CharacteristicBasis& basis, const CoefficientSet& set,
                                   double t) {
  const BasisPoint bp = basis.at(t);
  if (std::abs(bp.mu0) <= mu0_guard(basis)) {
    throw SingularityError("ermakov", t, "mu0 vanishes; homogeneous solution is singular");
  }
  const CoefficientValues v = eval_coeffs(set, t);
  const CoefficientValues v0 = eval_coeffs(set, 0.0);
  return {bp.mu0p / (4.0 * v.a * bp.mu0) - v.d / (2.0 * v.a), -bp.lambda / bp.mu0,
          bp.mu1 / (2.0 * basis.mu1_init * bp.mu0) + v0.d / (2.0 * v0.a)};
}

HomogeneousDriven homogeneous_driven(const CharacteristicBasis& basis, const CoefficientSet& set,
                                     const OdeOptions& options) {
  const std::size_t n = basis.grid.size();
  HomogeneousDriven h;
  h.delta0.assign(n, 0.0);
  h.eps0.assign(n, 0.0);
  h.kappa0.assign(n, 0.0);
  h.mu0_delta0.assign(n, 0.0);
  h.regular.assign(n, true);
  if (set.f.is_zero() && set.g.is_zero()) return h;

  // mu0 delta0 = lambda int_0^t [(f - d g / a) mu0 + g mu0' / (2a)] / lambda ds
  const CumulativeIntegral source(
      [&](double s) {
        const CoefficientValues v = eval_coeffs(set, s);
        const BasisPoint bp = basis.at(s);
        return ((v.f - v.d * v.g / v.a) * bp.mu0 + v.g * bp.mu0p / (2.0 * v.a)) / bp.lambda;
      },
      basis.grid);

  const DriveSamples ref = integrate_drive({1.0, 0.0, 0.0, 1.0}, basis, set, options);
  const double guard = mu0_guard(basis);
  const CoefficientValues v0 = eval_coeffs(set, 0.0);
  h.delta0[0] = v0.g / (2.0 * v0.a);
  h.eps0[0] = -h.delta0[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double lam = basis.lambda[i];
    const double mu0 = basis.mu0[i];
    h.mu0_delta0[i] = lam * source.nodes()[i];
    if (std::abs(mu0) <= guard) {
      h.delta0[i] = h.eps0[i] = h.kappa0[i] = kNaN;
      h.regular[i] = false;
      continue;
    }
    const double d0 = h.mu0_delta0[i] / mu0;
    const double re_e = basis.mu1[i] / basis.mu1_init;
    const double re_xi = ref.xi[i].real();
    h.delta0[i] = d0;
    h.eps0[i] = re_xi - d0 * re_e / lam;
    h.kappa0[i] = ref.k[i] - d0 * mu0 * re_xi / lam + d0 * d0 * mu0 * re_e / (2.0 * lam * lam);
  }
  return h;
}

DrivenValues homogeneous_driven_quadrature(const CharacteristicBasis& basis,
                                           const CoefficientSet& set, double t) {
  const CoefficientValues v0 = eval_coeffs(set, 0.0);
  if (t == 0.0) return {v0.g / (2.0 * v0.a), -v0.g / (2.0 * v0.a), 0.0};

  // mu0' must keep its sign on [0, t].
  double max_mu0p = 0.0;
  for (double m : basis.mu0p) max_mu0p = std::max(max_mu0p, std::abs(m));
  const double floor = 1e-8 * max_mu0p;
  constexpr int kScan = 400;
  const double sign0 = std::copysign(1.0, basis.mu0p[0]);
  for (int j = 0; j <= kScan; ++j) {
    const double s = t * j / kScan;
    const double m = basis.at(s).mu0p;
    if (std::abs(m) <= floor || std::copysign(1.0, m) != sign0) {
      throw TurningPointError("ermakov", s, "mu0' vanishes on [0, t]; literal quadrature undefined");
    }
  }
  for (std::size_t i = 0; i < basis.grid.size() && basis.grid[i] <= t; ++i) {
    const double m = basis.mu0p[i];
    if (std::abs(m) <= floor || std::copysign(1.0, m) != sign0) {
      throw TurningPointError("ermakov", basis.grid[i],
                              "mu0' vanishes on [0, t]; literal quadrature undefined");
    }
  }

  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned kDepth = 6;
  constexpr double kTol = 1e-10;
  auto fdg = [&](double s) {
    const CoefficientValues v = eval_coeffs(set, s);
    return v.f - v.d * v.g / v.a;
  };
  // D(s) = mu0(s) delta0(s)
  auto product = [&](double s) {
    if (s == 0.0) return 0.0;
    auto inner = [&](double r) {
      const CoefficientValues v = eval_coeffs(set, r);
      const BasisPoint bp = basis.at(r);
      return ((v.f - v.d * v.g / v.a) * bp.mu0 + v.g * bp.mu0p / (2.0 * v.a)) / bp.lambda;
    };
    return basis.lambda_at(s) * gauss_kronrod<double, 31>::integrate(inner, 0.0, s, kDepth, kTol);
  };

  const BasisPoint bt = basis.at(t);
  if (std::abs(bt.mu0) <= mu0_guard(basis)) {
    throw SingularityError("ermakov", t, "mu0 vanishes; delta0 is singular");
  }
  const double a_t = eval_coeffs(set, t).a;
  const double d_t = product(t);
  const double delta0 = d_t / bt.mu0;

  auto eps_integrand = [&](double s) {
    const CoefficientValues v = eval_coeffs(set, s);
    const BasisPoint bp = basis.at(s);
    const double sig = sigma_at(set, s);
    return 8.0 * v.a * sig * bp.lambda * product(s) / (bp.mu0p * bp.mu0p) +
           2.0 * v.a * bp.lambda * fdg(s) / bp.mu0p;
  };
  auto kappa_integrand = [&](double s) {
    const CoefficientValues v = eval_coeffs(set, s);
    const BasisPoint bp = basis.at(s);
    const double sig = sigma_at(set, s);
    const double p = product(s);
    return -4.0 * v.a * sig * p * p / (bp.mu0p * bp.mu0p) - 2.0 * v.a * p * fdg(s) / bp.mu0p;
  };
  const double eps0 = -2.0 * a_t * bt.lambda * delta0 / bt.mu0p +
                      gauss_kronrod<double, 31>::integrate(eps_integrand, 0.0, t, kDepth, kTol);
  const double kappa0 = a_t * bt.mu0 * delta0 * delta0 / bt.mu0p +
                        gauss_kronrod<double, 31>::integrate(kappa_integrand, 0.0, t, kDepth, kTol);
  return {delta0, eps0, kappa0};
}

ErmakovState solve_ermakov(const ErmakovInit& init, const ComplexFrame& frame,
                           const CharacteristicBasis& basis, const CoefficientSet& set,
                           std::size_t i) {
  const double t = basis.grid[i];
  const CoefficientValues v = eval_coeffs(set, t);
  const cplx z = frame.z[i];
  const double lam = basis.lambda[i];
  const double nz = std::norm(z);
  const double az = std::sqrt(nz);
  const double b02 = frame.beta0 * frame.beta0;
  const cplx zeta = frame.zeta_regular[i];

  ErmakovState s;
  s.t = t;
  s.alpha = alpha_from({z, frame.zp[i], lam}, v);
  s.beta = frame.beta0 * lam / az;
  s.gamma = init.gamma0 - 0.5 * frame.arg_z[i];
  s.delta = lam * std::imag(zeta * z) / nz;
  s.eps = std::real(zeta * z) / (frame.beta0 * az);
  s.kappa = init.kappa0 + frame.drive_phase[i] +
            std::real(zeta * zeta * z) * std::imag(z) / (2.0 * b02 * nz);
  if (!std::isfinite(s.alpha) || !std::isfinite(s.beta) || !std::isfinite(s.delta) ||
      !std::isfinite(s.eps) || !std::isfinite(s.kappa) || !(s.beta > 0)) {
    throw InvalidStateError("ermakov", t, "closed form produced an invalid state");
  }
  return s;
}

ErmakovPath solve_ermakov(const ErmakovInit& init, const ComplexFrame& frame,
                          const CharacteristicBasis& basis, const CoefficientSet& set) {
  ErmakovPath path;
  path.reserve(basis.grid.size());
  for (std::size_t i = 0; i < basis.grid.size(); ++i) {
    path.push_back(solve_ermakov(init, frame, basis, set, i));
  }
  return path;
}

double QuasiInvariantReport::max() const {
  return std::max({max_alpha, max_complex, max_norm, max_kappa});
}

QuasiInvariantReport quasi_invariants(const ErmakovPath& path, const HomogeneousDriven& homogeneous,
                                      const ComplexFrame& frame, const CharacteristicBasis& basis,
                                      const CoefficientSet& set, const ErmakovInit& init,
                                      double t_from) {
  QuasiInvariantReport report;
  const double guard = mu0_guard(basis);
  double first_excluded = kNaN;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const ErmakovState& s = path[i];
    if (s.t < t_from) continue;
    if (!homogeneous.regular[i] || std::abs(basis.mu0[i]) <= guard) {
      if (report.excluded++ == 0) first_excluded = s.t;
      continue;
    }
    const HomogeneousState h = homogeneous_state(basis, set, s.t);
    const cplx z = frame.z[i];
    const double az = std::abs(z);
    const double d0 = homogeneous.delta0[i];
    const double e0 = homogeneous.eps0[i];
    const double k0 = homogeneous.kappa0[i];

    QuasiInvariantRow row;
    row.t = s.t;
    row.alpha_relation = scaled(2.0 * (s.alpha - h.alpha0) * z.imag(), -s.beta * s.beta * z.real());

    const cplx zeta = init.eps0 * init.beta0 + kI * (init.delta0 + e0);
    row.complex_relation =
        scaled(cplx{s.eps, (s.delta - d0) / s.beta}, zeta * z / (init.beta0 * az));

    const double shifted = (s.delta - d0) / s.beta;
    const double start = (init.delta0 + e0) / init.beta0;
    row.norm_relation =
        scaled(s.eps * s.eps + shifted * shifted, init.eps0 * init.eps0 + start * start);

    row.kappa_relation =
        scaled(s.kappa, init.kappa0 + k0 + (s.delta - d0) * s.eps / (2.0 * s.beta) -
                            (e0 + init.delta0) * init.eps0 / (2.0 * init.beta0));

    report.max_alpha = std::max(report.max_alpha, row.alpha_relation);
    report.max_complex = std::max(report.max_complex, row.complex_relation);
    report.max_norm = std::max(report.max_norm, row.norm_relation);
    report.max_kappa = std::max(report.max_kappa, row.kappa_relation);
    report.rows.push_back(row);
  }
  if (report.excluded > 0) {
    report.notes.push_back(std::to_string(report.excluded) +
                           " point(s) excluded near zeros of mu0, first at t=" +
                           format_double(first_excluded));
  }
  return report;
}

void write_ermakov_csv(const ErmakovPath& path, std::ostream& os) {
  CsvWriter csv(os, {"t", "alpha", "beta", "gamma", "delta", "epsilon", "kappa"});
  for (const auto& s : path) csv.row({s.t, s.alpha, s.beta, s.gamma, s.delta, s.eps, s.kappa});
}

void write_quasi_invariant_csv(const QuasiInvariantReport& report, std::ostream& os) {
  CsvWriter csv(os, {"t", "alpha_relation", "complex_relation", "norm_relation", "kappa_relation"});
  for (const auto& r : report.rows) {
    csv.row({r.t, r.alpha_relation, r.complex_relation, r.norm_relation, r.kappa_relation});
  }
}

}  // namespace quadfield
