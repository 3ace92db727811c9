// quadfield: scenario runner for time-dependent quadratic Hamiltonians.
//
// Exit status: 0 all checks passed, 1 an invariant check failed,
// 2 configuration error, 3 numerical failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quadfield/characteristic.hpp"
#include "quadfield/csv.hpp"
#include "quadfield/error.hpp"
#include "quadfield/scenario.hpp"
#include "quadfield/stochastic.hpp"

#ifndef QUADFIELD_SCENARIO_DIR
#define QUADFIELD_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;
using namespace quadfield;

namespace {

constexpr int kPass = 0, kFail = 1, kConfig = 2, kNumerical = 3;

void print_checks(const RunResult& r) {
  for (const auto& c : r.checks) {
    std::printf("  %-28s %-4s %.3e (tol %.1e)%s%s\n", c.name.c_str(), c.passed ? "ok" : "FAIL",
                c.value, c.tolerance, c.note.empty() ? "" : "  ", c.note.c_str());
  }
  for (const auto& note : r.notes) std::printf("  note: %s\n", note.c_str());
}

bool ensemble_ok(const EnsembleSummary& s, int n) {
  return s.invariant_violations == 0 && s.min_product >= (n + 0.5) * (n + 0.5) - 1e-12;
}

void print_ensemble(const EnsembleSummary& s) {
  std::printf("  paths %zu, failed %zu, retries %zu, invariant violations %zu\n", s.paths,
              s.failed, s.retries, s.invariant_violations);
  std::printf("  min product %.17g, max oracle deviation %.3e, max Wronskian drift %.3e\n",
              s.min_product, s.max_oracle_deviation, s.max_wronskian_drift);
  std::printf("  gap to deterministic run: xbar %.3e, pbar %.3e, product %.3e\n", s.gap_xbar,
              s.gap_pbar, s.gap_product);
}

int cmd_run(const std::string& config) {
  const Scenario sc = load_scenario(config);
  const RunResult r = run_scenario(sc);
  const fs::path dir = output_directory(sc);
  write_run_outputs(r, dir);
  std::printf("%s: %s -> %s\n", sc.name.c_str(), r.passed() ? "passed" : "FAILED", dir.c_str());
  print_checks(r);
  return r.passed() ? kPass : kFail;
}

EnsembleOptions ensemble_options(const Scenario& sc) {
  EnsembleOptions o;
  o.ode = sc.ode;
  o.wronskian_tolerance = sc.tolerances.wronskian;
  return o;
}

int cmd_verify(const std::string& dir, double tol) {
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) throw ConfigError("scenarios", "no .json configs in " + dir);

  bool all = true;
  for (const auto& path : configs) {
    Scenario sc = load_scenario(path);
    if (tol > 0) sc.tolerances.oracle = tol;
    const RunResult r = run_scenario(sc);
    std::printf("%-24s %s\n", sc.name.c_str(), r.passed() ? "passed" : "FAILED");
    print_checks(r);
    all = all && r.passed();
    if (sc.noise) {
      const EnsembleSummary s =
          run_ensemble(*sc.noise, *sc.medium, sc.init, sc.fock_index, sc.grid, ensemble_options(sc));
      const bool ok = ensemble_ok(s, sc.fock_index);
      std::printf("%-24s ensemble %s\n", sc.name.c_str(), ok ? "passed" : "FAILED");
      print_ensemble(s);
      all = all && ok;
    }
  }
  return all ? kPass : kFail;
}

int cmd_ensemble(const std::string& config, long paths, long long seed) {
  Scenario sc = load_scenario(config);
  if (!sc.noise) throw ConfigError("noise", "ensemble needs a noise section");
  if (paths > 0) sc.noise->paths = static_cast<std::size_t>(paths);
  if (seed >= 0) sc.noise->seed = static_cast<std::uint64_t>(seed);
  const EnsembleSummary s =
      run_ensemble(*sc.noise, *sc.medium, sc.init, sc.fock_index, sc.grid, ensemble_options(sc));
  const fs::path dir = output_directory(sc);
  write_ensemble_outputs(sc, s, dir);
  const bool ok = ensemble_ok(s, sc.fock_index);
  std::printf("%s ensemble: %s -> %s\n", sc.name.c_str(), ok ? "passed" : "FAILED", dir.c_str());
  print_ensemble(s);
  return ok ? kPass : kFail;
}

int cmd_dump_basis(const std::string& config, const std::string& output) {
  const Scenario sc = load_scenario(config);
  const CharacteristicBasis basis = integrate_characteristic(sc.set, sc.grid, {sc.ode, 1.0});
  if (output.empty() || output == "-") {
    write_basis_csv(basis, std::cout);
  } else {
    std::ofstream os(output, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("output", "cannot write " + output);
    write_basis_csv(basis, os);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form quantum dynamics of time-dependent quadratic Hamiltonians"};
  app.require_subcommand(1);
  app.set_version_flag("--version", build_id());

  std::string config;
  auto* run = app.add_subcommand("run", "Run one scenario and write CSV outputs");
  run->add_option("config", config, "Scenario JSON")->required();

  std::string scenario_dir = QUADFIELD_SCENARIO_DIR;
  double tol = 0.0;
  auto* verify = app.add_subcommand("verify", "Run the invariant suites over bundled scenarios");
  verify->add_option("--tol", tol, "Override the closed-form/oracle tolerance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--scenarios", scenario_dir, "Directory of scenario configs");

  long paths = 0;
  long long seed = -1;
  auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo ensemble over a noisy medium");
  ensemble->add_option("config", config, "Scenario JSON with a noise section")->required();
  ensemble->add_option("--paths", paths, "Override the number of paths")->check(CLI::PositiveNumber);
  ensemble->add_option("--seed", seed, "Override the seed")->check(CLI::NonNegativeNumber);

  std::string output;
  auto* dump = app.add_subcommand("dump-basis", "Write mu0, mu1 and lambda as CSV");
  dump->add_option("config", config, "Scenario JSON")->required();
  dump->add_option("-o,--output", output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*run) return cmd_run(config);
    if (*verify) return cmd_verify(scenario_dir, tol);
    if (*ensemble) return cmd_ensemble(config, paths, seed);
    if (*dump) return cmd_dump_basis(config, output);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumerical;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  }
  return kConfig;
}
