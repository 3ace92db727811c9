#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "quadfield/coefficients.hpp"
#include "quadfield/ermakov.hpp"
#include "quadfield/grid.hpp"
#include "quadfield/ode.hpp"

namespace quadfield {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                         std::array<std::uint32_t, 2> key);

/// Stream of uniforms and normals keyed by (seed, path, attempt). The
/// sequence depends only on the key, never on scheduling.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint32_t path, std::uint32_t attempt);

  /// Uniform on (0, 1).
  double uniform();
  double normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t path_, attempt_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class NoiseTarget { xi, eta, chi };
enum class NoiseModel { ornstein_uhlenbeck, telegraph };

NoiseTarget parse_noise_target(const std::string& s);
NoiseModel parse_noise_model(const std::string& s);
std::string to_string(NoiseTarget t);
std::string to_string(NoiseModel m);

struct NoiseSpec {
  NoiseTarget target = NoiseTarget::chi;
  NoiseModel model = NoiseModel::ornstein_uhlenbeck;
  double amplitude = 0.0;         // stationary standard deviation
  double correlation_time = 1.0;  // autocorrelation exp(-|s|/correlation_time)
  std::uint64_t seed = 0;
  std::size_t paths = 1;

  void validate() const;
};

/// Stationary noise sampled on the grid.
std::vector<double> sample_noise(const NoiseSpec& spec, const TimeGrid& grid, std::uint32_t path,
                                 std::uint32_t attempt = 0);

/// Base profile with additive noise on the target, tabulated on the grid.
/// Amplitude zero returns the base profile itself.
MediumProfile sample_path(const NoiseSpec& spec, const MediumProfile& base, const TimeGrid& grid,
                          std::uint32_t path, std::uint32_t attempt = 0);

inline constexpr int kRetryBudget = 10;

struct SampledPath {
  MediumProfile profile;
  int attempts = 0;
  bool rejected = false;
};

/// Draws until xi, eta > 0 and chi >= 0 on the grid, at most 1 + kRetryBudget times.
SampledPath sample_valid_path(const NoiseSpec& spec, const MediumProfile& base,
                              const TimeGrid& grid, std::uint32_t path);

struct EnsembleOptions {
  OdeOptions ode;
  bool check_invariants = true;
  double oracle_tolerance = 1e-6;
  double wronskian_tolerance = 1e-8;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Statistic {
  std::vector<double> mean, stderr_;
};

struct EnsembleSummary {
  std::vector<double> t;
  Statistic var_x, var_p, product, xbar, pbar;
  std::size_t paths = 0;
  std::size_t failed = 0;
  std::size_t retries = 0;
  std::size_t invariant_violations = 0;
  double min_product = 0.0;
  double max_oracle_deviation = 0.0;
  double max_wronskian_drift = 0.0;
  /// max over t of |ensemble mean - deterministic value| on the base profile.
  double gap_xbar = 0.0, gap_pbar = 0.0, gap_product = 0.0;
  std::vector<std::string> failures;
};

/// Runs characteristic -> ermakov -> observables per path and aggregates
/// pointwise with pairwise summation in path order. More than 1% failed
/// paths raises EnsembleError.
EnsembleSummary run_ensemble(const NoiseSpec& spec, const MediumProfile& base,
                             const ErmakovInit& init, int n, const TimeGrid& grid,
                             const EnsembleOptions& options = {});

/// Pairwise (cascade) sum.
double pairwise_sum(const double* x, std::size_t n);

/// CSV columns t and <name>_mean,<name>_stderr for var_x,var_p,product,xbar,pbar.
void write_summary_csv(const EnsembleSummary& summary, std::ostream& os);

}  // namespace quadfield
