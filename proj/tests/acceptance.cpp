// One line per acceptance criterion; exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadfield/finite_difference.hpp"
#include "quadfield/scenario.hpp"

using namespace quadfield;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kScenarios = QUADFIELD_SCENARIO_DIR;

const std::vector<std::string> kGallery = {
    "static_oscillator", "squeezed_vacuum",  "caldirola_kanai",   "driven_oscillator",
    "parametric_modulation", "lossy_medium", "noisy_lossy_medium"};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json config(const std::string& name) { return json::parse(read_file(kScenarios / (name + ".json"))); }

Scenario load(const std::string& name) { return load_scenario(kScenarios / (name + ".json")); }

/// Same scenario on a different grid.
Scenario regridded(const std::string& name, double t_max, double dt) {
  json j = config(name);
  j["grid"] = {{"t_max", t_max}, {"dt", dt}};
  return parse_scenario(j.dump(), kScenarios);
}

int failures = 0;

void report(int id, bool ok, const std::string& what, double value, double tol,
            const std::string& detail = "") {
  if (!ok) ++failures;
  std::printf("criterion %2d: %s  %-48s value=%.3e tol=%.1e%s%s\n", id, ok ? "PASS" : "FAIL",
              what.c_str(), value, tol, detail.empty() ? "" : "  ", detail.c_str());
  std::fflush(stdout);
}

struct Deterministic {
  CharacteristicBasis basis;
  ComplexFrame frame;
  ErmakovPath path;
};

Deterministic closed_form(const Scenario& sc) {
  Deterministic d;
  d.basis = integrate_characteristic(sc.set, sc.grid, {sc.ode, 1.0});
  d.frame = build_frame(sc.init, d.basis, sc.set, sc.ode);
  d.path = solve_ermakov(sc.init, d.frame, d.basis, sc.set);
  return d;
}

// 1. closed form vs direct integration, absolute, on [0, 10]
void criterion_1() {
  constexpr double tol = 1e-7;
  double worst = 0;
  std::string where;
  for (const auto& name : kGallery) {
    const Scenario sc = load(name);
    const auto d = closed_form(sc);
    const double dev = compare_paths(d.path, riccati_oracle(sc.init, sc.set, sc.grid, sc.ode)).max();
    if (dev >= worst) {
      worst = dev;
      where = name;
    }
  }
  report(1, worst < tol, "closed form vs direct integration (7 scenarios)", worst, tol,
         "worst " + where);
}

// 2. static oscillator analytics
void criterion_2() {
  constexpr double tol = 1e-9;
  const Scenario sc = load("static_oscillator");
  const auto d = closed_form(sc);
  const auto obs = evaluate_observables(d.path, d.basis, sc.set, 0);
  double err = 0;
  for (std::size_t i = 0; i < sc.grid.size(); ++i) {
    const double t = sc.grid[i];
    const auto& s = d.path[i];
    err = std::max({err, std::abs(d.basis.mu0[i] - std::sin(t)), std::abs(d.basis.mu1[i] - std::cos(t)),
                    std::abs(s.alpha), std::abs(s.beta - 1.0), std::abs(s.gamma + t / 2),
                    std::abs(obs[i].var_x - 0.5), std::abs(obs[i].var_p - 0.5),
                    std::abs(obs[i].product - 0.25), std::abs(obs[i].phase_geo_rate)});
  }
  report(2, err < tol, "static oscillator analytics", err, tol);
}

// 3. commutator along every closed-form and oracle path
void criterion_3() {
  constexpr double tol = 1e-12;
  double worst = 0;
  for (const auto& name : kGallery) {
    const Scenario sc = load(name);
    const auto d = closed_form(sc);
    worst = std::max({worst, commutator_defect(ansatz_path(d.path)),
                      commutator_defect(ansatz_path(riccati_oracle(sc.init, sc.set, sc.grid, sc.ode)))});
  }
  report(3, worst < tol, "commutator u conj(v) - conj(u) v = -i", worst, tol);
}

// 4. Heisenberg residual at dt = 1e-3
void criterion_4() {
  constexpr double tol = 1e-6;
  double worst = 0;
  std::string where;
  for (const auto& name : kGallery) {
    const Scenario sc = regridded(name, 10.0, 1e-3);
    const auto d = closed_form(sc);
    const double r = heisenberg_residual(sc.set, sc.grid, ansatz_path(d.path)).max;
    if (r >= worst) {
      worst = r;
      where = name;
    }
  }
  report(4, worst < tol, "Heisenberg residual, dt = 1e-3", worst, tol, "worst " + where);
}

// 5. uncertainty bound, deterministic and stochastic; equality where alpha = 0
void criterion_5(const EnsembleSummary& noisy) {
  constexpr double bound_tol = 1e-12;
  constexpr double equality_tol = 1e-10;
  double deficit = 0, equality = 0;
  std::size_t instants = 0;
  for (const auto& name : kGallery) {
    const Scenario sc = load(name);
    const auto d = closed_form(sc);
    const int n = sc.fock_index;
    const auto obs = evaluate_observables(d.path, d.basis, sc.set, n);
    const double level = (n + 0.5) * (n + 0.5);
    for (const auto& o : obs) {
      deficit = std::max(deficit, level - o.product);
      if (n == 0 && o.min_uncertainty) {
        equality = std::max(equality, std::abs(o.product - 0.25));
        ++instants;
      }
    }
    if (n != 0) continue;
    for (double t : minimum_uncertainty_instants(d.path, d.frame, d.basis, sc.set)) {
      const double alpha = closed_form_alpha(d.frame, d.basis, sc.set, t);
      const double beta = d.frame.beta0 * d.basis.lambda_at(t) / std::abs(frame_z_at(d.frame, d.basis, t).first);
      equality = std::max(equality, std::abs(0.25 * (1 + 4 * alpha * alpha / std::pow(beta, 4)) - 0.25));
      ++instants;
    }
  }
  deficit = std::max(deficit, 0.25 - noisy.min_product);
  const bool ok = deficit <= bound_tol && equality < equality_tol && instants > 0;
  report(5, ok, "uncertainty bound (deterministic + 256 noisy paths)", std::max(deficit, 0.0), bound_tol,
         "equality at " + std::to_string(instants) + " alpha=0 points: " +
             (std::ostringstream() << equality).str() + " (tol 1e-10)");
}

// 6. quasi-invariants on [0.1, 10]
void criterion_6() {
  constexpr double tol = 1e-7;
  double worst = 0;
  std::string where;
  for (const auto& name : kGallery) {
    const Scenario sc = load(name);
    const auto d = closed_form(sc);
    const auto h = homogeneous_driven(d.basis, sc.set, sc.ode);
    const double q = quasi_invariants(d.path, h, d.frame, d.basis, sc.set, sc.init, 0.1).max();
    if (q >= worst) {
      worst = q;
      where = name;
    }
  }
  report(6, worst < tol, "quasi-invariant residuals on [0.1, 10]", worst, tol, "worst " + where);
}

// 7. Wronskian law over a window of length 20
void criterion_7() {
  constexpr double tol = 1e-8;
  double worst = 0;
  std::string where;
  for (const auto& name : kGallery) {
    const Scenario sc = regridded(name, 20.0, 0.01);
    const auto basis = integrate_characteristic(sc.set, sc.grid, {sc.ode, 1.0});
    const double w = wronskian_drift(basis, sc.set).max_abs_drift;
    if (w >= worst) {
      worst = w;
      where = name;
    }
  }
  report(7, worst < tol, "Wronskian drift on [0, 20]", worst, tol, "worst " + where);
}

// 8. medium coefficients vs the classical mode equation; amplitudes vs q(t)
void criterion_8() {
  constexpr double coeff_tol = 1e-8;
  constexpr double amp_tol = 1e-6;
  json smooth = config("lossy_medium");
  smooth["name"] = "smooth_medium";
  smooth["medium"] = {
      {"xi", {{"type", "sinusoid"}, {"offset", 1.0}, {"amplitude", 0.2}, {"omega", 1.0}}},
      {"eta", {{"type", "sinusoid"}, {"offset", 1.0}, {"amplitude", 0.1}, {"omega", 0.7}, {"phase", 0.5}}},
      {"chi", {{"type", "sinusoid"}, {"offset", 0.1}, {"amplitude", 0.05}, {"omega", 1.3}}},
      {"upsilon", 1.5}};
  smooth["init"] = {{"beta0", 1.2}, {"alpha0", 0.1}, {"epsilon0", 0.5}, {"delta0", -0.3}};
  double coeff = 0, amp = 0;
  for (const Scenario& sc : {load("lossy_medium"), parse_scenario(smooth.dump(), kScenarios)}) {
    coeff = std::max(coeff, classical_mode_equivalence(*sc.medium, sc.grid));
    const auto d = closed_form(sc);
    const auto obs = evaluate_observables(d.path, d.basis, sc.set, sc.fock_index, sc.scales);
    const auto mode = classical_mode_deviation(*sc.medium, sc.set, obs, sc.grid, sc.ode);
    amp = std::max({amp, mode.b_deviation, mode.d_deviation});
  }
  report(8, coeff < coeff_tol && amp < amp_tol, "classical mode equivalence (lossy + smooth)", coeff,
         coeff_tol, "mode amplitudes " + (std::ostringstream() << amp).str() + " (tol 1e-6)");
}

// 9. two routes to the geometric phase over one modulation period
void criterion_9() {
  constexpr double tol = 1e-6;
  const json j = config("parametric_modulation");
  const double omega = j.at("preset").at("omega").get<double>();
  const double period = 2 * std::numbers::pi / omega;
  const Scenario sc = regridded("parametric_modulation", period, 1e-3);
  const auto d = closed_form(sc);
  const auto obs = evaluate_observables(d.path, d.basis, sc.set, sc.fock_index);
  const auto route2 = cumulative_trapezoid(d.path, geometric_rate_from_derivatives(d.path, sc.fock_index));
  const double gap = std::abs(obs.back().phase_geo - route2.back());
  report(9, gap < tol, "geometric phase, two routes, one period", gap, tol,
         "theta(T) = " + (std::ostringstream() << obs.back().phase_geo).str());
}

double rms(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

std::string summary_text(const EnsembleSummary& s) {
  std::ostringstream os;
  write_summary_csv(s, os);
  return os.str();
}

// 10. identical summaries for identical seeds; stderr 256 -> 1024 shrinks by 2 +- 50%
void criterion_10(const Scenario& sc, const EnsembleSummary& first) {
  EnsembleOptions opt;
  opt.ode = sc.ode;
  const EnsembleSummary again = run_ensemble(*sc.noise, *sc.medium, sc.init, sc.fock_index, sc.grid, opt);
  const bool identical = summary_text(first) == summary_text(again) &&
                         first.min_product == again.min_product &&
                         first.max_oracle_deviation == again.max_oracle_deviation;

  NoiseSpec big = *sc.noise;
  big.paths = 4 * sc.noise->paths;
  opt.check_invariants = false;
  const EnsembleSummary large = run_ensemble(big, *sc.medium, sc.init, sc.fock_index, sc.grid, opt);
  double lo = 1e300, hi = 0;
  const Statistic* a[] = {&first.var_x, &first.var_p, &first.product, &first.xbar, &first.pbar};
  const Statistic* b[] = {&large.var_x, &large.var_p, &large.product, &large.xbar, &large.pbar};
  for (int k = 0; k < 5; ++k) {
    const double ratio = rms(a[k]->stderr_) / rms(b[k]->stderr_);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const bool ok = identical && lo >= 1.0 && hi <= 3.0;
  report(10, ok, "ensemble reproducibility and 1/sqrt(N) scaling", hi, 3.0,
         std::string(identical ? "identical reruns" : "RERUN DIFFERS") + ", stderr ratio in [" +
             (std::ostringstream() << lo).str() + ", " + (std::ostringstream() << hi).str() +
             "] (want [1, 3])");
}

}  // namespace

int main(int argc, char** argv) {
  // No argument: all criteria. Otherwise the listed criterion numbers.
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  const auto start = std::chrono::steady_clock::now();
  try {
    std::optional<Scenario> noisy;
    std::optional<EnsembleSummary> ensemble;
    auto noisy_ensemble = [&]() -> const EnsembleSummary& {
      if (!ensemble) {
        noisy = load("noisy_lossy_medium");
        EnsembleOptions opt;
        opt.ode = noisy->ode;
        ensemble = run_ensemble(*noisy->noise, *noisy->medium, noisy->init, noisy->fock_index,
                                noisy->grid, opt);
      }
      return *ensemble;
    };
    for (int id : wanted) {
      switch (id) {
        case 1: criterion_1(); break;
        case 2: criterion_2(); break;
        case 3: criterion_3(); break;
        case 4: criterion_4(); break;
        case 5: criterion_5(noisy_ensemble()); break;
        case 6: criterion_6(); break;
        case 7: criterion_7(); break;
        case 8: criterion_8(); break;
        case 9: criterion_9(); break;
        case 10: {
          const auto& e = noisy_ensemble();
          criterion_10(*noisy, e);
          break;
        }
        default:
          std::printf("unknown criterion %d\n", id);
          return 2;
      }
    }
  } catch (const std::exception& e) {
    std::printf("aborted: %s\n", e.what());
    return 2;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria failed (%.1f s)\n", failures, wanted.size(), secs);
  return failures == 0 ? 0 : 1;
}
