#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "quadfield/characteristic.hpp"
#include "quadfield/coefficients.hpp"
#include "quadfield/ermakov.hpp"
#include "quadfield/observables.hpp"
#include "quadfield/stochastic.hpp"
#include "quadfield/verify.hpp"

namespace quadfield {

/// Pass thresholds for the invariant suite.
struct Tolerances {
  double oracle = 1e-7;          // closed form vs direct integration, absolute
  double commutator = 1e-12;
  double heisenberg = 1e-6;
  double uncertainty = 1e-12;    // product >= (n+1/2)^2 - uncertainty
  double min_uncertainty = 1e-10;
  double quasi_invariant = 1e-7;
  double wronskian = 1e-8;
  double classical_mode = 1e-8;  // media only
  double mode_amplitude = 1e-6;  // media only
  double phase = 1e-6;           // two routes to the cumulative geometric phase
};

enum class CoefficientSource { preset, functions, medium, table_file };

struct Scenario {
  std::string name;
  CoefficientSource source = CoefficientSource::preset;
  std::string source_label;  // preset name, "functions", "medium" or the table path
  CoefficientSet set;
  std::optional<MediumProfile> medium;
  ErmakovInit init;
  int fock_index = 0;
  TimeGrid grid;
  OdeOptions ode;
  FieldScales scales;
  Tolerances tolerances;
  std::optional<NoiseSpec> noise;
  std::string output_dir;
  std::string config_text;
};

/// Parses a JSON scenario. Relative table paths resolve against base_dir.
/// Syntax errors report line and column; schema errors name the field.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& path);

struct InvariantCheck {
  std::string name;
  double value;
  double tolerance;
  bool passed;
  std::string note;
};

struct RunResult {
  const Scenario* scenario = nullptr;
  CharacteristicBasis basis;
  ComplexFrame frame;
  ErmakovPath path, oracle;
  HomogeneousDriven homogeneous;
  QuasiInvariantReport quasi;
  HeisenbergReport heisenberg;
  std::vector<FockObservables> observables;
  std::vector<double> phase_geo_route2;
  std::vector<double> min_uncertainty_times;
  std::vector<InvariantCheck> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

/// Deterministic pipeline (noise, if configured, is ignored here).
RunResult run_scenario(const Scenario& scenario);

/// Resolution order: QUADFIELD_OUT_DIR, the config's output_dir, out/<name>.
std::filesystem::path output_directory(const Scenario& scenario);

/// ermakov.csv, observables.csv, invariants.csv, residuals.csv,
/// quasi_invariants.csv, manifest.json.
void write_run_outputs(const RunResult& result, const std::filesystem::path& dir);

/// summary.csv, ensemble_manifest.json.
void write_ensemble_outputs(const Scenario& scenario, const EnsembleSummary& summary,
                            const std::filesystem::path& dir);

std::string build_id();

}  // namespace quadfield
