#include "quadfield/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "quadfield/characteristic.hpp"
#include "quadfield/csv.hpp"
#include "quadfield/error.hpp"
#include "quadfield/observables.hpp"
#include "quadfield/verify.hpp"

namespace quadfield {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                         std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t kM0 = 0xD2511F53, kM1 = 0xCD9E8D57;
  constexpr std::uint32_t kW0 = 0x9E3779B9, kW1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint32_t path, std::uint32_t attempt)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      path_(path),
      attempt_(attempt) {}

double PhiloxStream::uniform() {
  if (used_ == 4) {
    buffer_ = philox4x32({block_++, 0u, path_, attempt_}, key_);
    used_ = 0;
  }
  // 32 random bits centred in (0, 1).
  return (static_cast<double>(buffer_[used_++]) + 0.5) * 0x1p-32;
}

double PhiloxStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

NoiseTarget parse_noise_target(const std::string& s) {
  if (s == "xi") return NoiseTarget::xi;
  if (s == "eta") return NoiseTarget::eta;
  if (s == "chi") return NoiseTarget::chi;
  throw ConfigError("noise.target", "expected xi, eta or chi, got '" + s + "'");
}

NoiseModel parse_noise_model(const std::string& s) {
  if (s == "ornstein_uhlenbeck") return NoiseModel::ornstein_uhlenbeck;
  if (s == "telegraph") return NoiseModel::telegraph;
  throw ConfigError("noise.model", "expected ornstein_uhlenbeck or telegraph, got '" + s + "'");
}

std::string to_string(NoiseTarget t) {
  switch (t) {
    case NoiseTarget::xi: return "xi";
    case NoiseTarget::eta: return "eta";
    case NoiseTarget::chi: return "chi";
  }
  return "?";
}

std::string to_string(NoiseModel m) {
  return m == NoiseModel::telegraph ? "telegraph" : "ornstein_uhlenbeck";
}

void NoiseSpec::validate() const {
  if (!(amplitude >= 0) || !std::isfinite(amplitude)) {
    throw ConfigError("noise.amplitude", "must be finite and nonnegative");
  }
  if (!(correlation_time > 0) || !std::isfinite(correlation_time)) {
    throw ConfigError("noise.correlation_time", "must be positive");
  }
  if (paths == 0) throw ConfigError("noise.paths", "must be positive");
}

std::vector<double> sample_noise(const NoiseSpec& spec, const TimeGrid& grid, std::uint32_t path,
                                 std::uint32_t attempt) {
  std::vector<double> x(grid.size(), 0.0);
  if (spec.amplitude == 0.0) return x;
  PhiloxStream rng(spec.seed, path, attempt);
  const double a = spec.amplitude;
  if (spec.model == NoiseModel::ornstein_uhlenbeck) {
    x[0] = a * rng.normal();
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double rho = std::exp(-(grid[i] - grid[i - 1]) / spec.correlation_time);
      x[i] = rho * x[i - 1] + a * std::sqrt(1.0 - rho * rho) * rng.normal();
    }
    return x;
  }
  // Symmetric two-state process; switching rate 1/(2 tau) gives correlation exp(-t/tau).
  const double rate = 0.5 / spec.correlation_time;
  double state = rng.uniform() < 0.5 ? -a : a;
  double next_switch = -std::log(rng.uniform()) / rate;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (next_switch <= grid[i]) {
      state = -state;
      next_switch += -std::log(rng.uniform()) / rate;
    }
    x[i] = state;
  }
  return x;
}

MediumProfile sample_path(const NoiseSpec& spec, const MediumProfile& base, const TimeGrid& grid,
                          std::uint32_t path, std::uint32_t attempt) {
  if (spec.amplitude == 0.0) return base;
  const auto noise = sample_noise(spec, grid, path, attempt);
  MediumProfile out = base;
  TimeFunction& target = spec.target == NoiseTarget::xi    ? out.xi
                         : spec.target == NoiseTarget::eta ? out.eta
                                                           : out.chi;
  std::vector<double> t(grid.times().begin(), grid.times().end());
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = target(t[i]) + noise[i];
  target = TimeFunction::table(std::move(t), std::move(v));
  return out;
}

SampledPath sample_valid_path(const NoiseSpec& spec, const MediumProfile& base,
                              const TimeGrid& grid, std::uint32_t path) {
  SampledPath out;
  for (int attempt = 0; attempt <= kRetryBudget; ++attempt) {
    out.attempts = attempt + 1;
    out.profile = sample_path(spec, base, grid, path, static_cast<std::uint32_t>(attempt));
    try {
      validate_medium(out.profile, grid);
      return out;
    } catch (const InvalidMediumError&) {
    }
  }
  out.rejected = true;
  return out;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

namespace {

constexpr int kObservables = 5;

struct PathResult {
  bool ok = false;
  int attempts = 0;
  std::string error;
  std::vector<std::array<double, kObservables>> values;  // per t: var_x, var_p, product, xbar, pbar
  double min_product = 0.0;
  double oracle_deviation = 0.0;
  double wronskian_drift = 0.0;
  bool violates = false;
};

std::vector<std::array<double, kObservables>> observe(const MediumProfile& profile,
                                                      const ErmakovInit& init, int n,
                                                      const TimeGrid& grid,
                                                      const EnsembleOptions& options,
                                                      PathResult* checks) {
  const CoefficientSet set = medium_to_hamiltonian(profile, grid);
  const CharacteristicBasis basis = integrate_characteristic(set, grid, {options.ode, 1.0});
  const ComplexFrame frame = build_frame(init, basis, set, options.ode);
  const ErmakovPath path = solve_ermakov(init, frame, basis, set);
  const auto obs = evaluate_observables(path, basis, set, n, profile.scales);
  std::vector<std::array<double, kObservables>> values(obs.size());
  double min_product = obs.front().product;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    values[i] = {obs[i].var_x, obs[i].var_p, obs[i].product, obs[i].xbar, obs[i].pbar};
    min_product = std::min(min_product, obs[i].product);
  }
  if (checks) {
    checks->min_product = min_product;
    if (options.check_invariants) {
      checks->oracle_deviation = compare_paths(path, riccati_oracle(init, set, grid, options.ode)).max();
      checks->wronskian_drift = wronskian_drift(basis, set).max_abs_drift;
      const double bound = (n + 0.5) * (n + 0.5) - 1e-12;
      checks->violates = min_product < bound || checks->oracle_deviation > options.oracle_tolerance ||
                         checks->wronskian_drift > options.wronskian_tolerance;
    }
  }
  return values;
}

void aggregate(const std::vector<PathResult>& results, std::size_t nt, EnsembleSummary& s) {
  Statistic* stats[kObservables] = {&s.var_x, &s.var_p, &s.product, &s.xbar, &s.pbar};
  std::vector<const PathResult*> good;
  for (const auto& r : results) {
    if (r.ok) good.push_back(&r);
  }
  const std::size_t m = good.size();
  std::vector<double> column(m);
  for (int k = 0; k < kObservables; ++k) {
    stats[k]->mean.assign(nt, 0.0);
    stats[k]->stderr_.assign(nt, 0.0);
    if (m == 0) continue;
    for (std::size_t i = 0; i < nt; ++i) {
      // Shifted by the first path so that identical paths give their value
      // and zero spread exactly.
      const double shift = good[0]->values[i][k];
      for (std::size_t p = 0; p < m; ++p) column[p] = good[p]->values[i][k] - shift;
      const double offset = pairwise_sum(column.data(), m) / static_cast<double>(m);
      for (std::size_t p = 0; p < m; ++p) {
        const double dev = column[p] - offset;
        column[p] = dev * dev;
      }
      stats[k]->mean[i] = shift + offset;
      if (m > 1) {
        const double var = pairwise_sum(column.data(), m) / static_cast<double>(m - 1);
        stats[k]->stderr_[i] = std::sqrt(var / static_cast<double>(m));
      }
    }
  }
}

}  // namespace

EnsembleSummary run_ensemble(const NoiseSpec& spec, const MediumProfile& base,
                             const ErmakovInit& init, int n, const TimeGrid& grid,
                             const EnsembleOptions& options) {
  spec.validate();
  init.validate();
  const std::size_t paths = spec.paths;
  std::vector<PathResult> results(paths);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t p = next++; p < paths; p = next++) {
      PathResult& r = results[p];
      try {
        const SampledPath sp = sample_valid_path(spec, base, grid, static_cast<std::uint32_t>(p));
        r.attempts = sp.attempts;
        if (sp.rejected) {
          r.error = "path " + std::to_string(p) + ": positivity not restored within retry budget";
          continue;
        }
        r.values = observe(sp.profile, init, n, grid, options, &r);
        r.ok = true;
      } catch (const Error& e) {
        r.error = "path " + std::to_string(p) + ": " + e.what();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(paths)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  EnsembleSummary s;
  s.t.assign(grid.times().begin(), grid.times().end());
  s.paths = paths;
  s.min_product = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    s.retries += r.attempts > 0 ? static_cast<std::size_t>(r.attempts - 1) : 0;
    if (!r.ok) {
      ++s.failed;
      s.failures.push_back(r.error);
      continue;
    }
    s.min_product = std::min(s.min_product, r.min_product);
    s.max_oracle_deviation = std::max(s.max_oracle_deviation, r.oracle_deviation);
    s.max_wronskian_drift = std::max(s.max_wronskian_drift, r.wronskian_drift);
    if (r.violates) ++s.invariant_violations;
  }
  if (100 * s.failed > paths) {
    throw EnsembleError(std::to_string(s.failed) + " of " + std::to_string(paths) +
                        " paths failed (limit 1%); first: " + s.failures.front());
  }
  aggregate(results, grid.size(), s);

  const auto det = observe(base, init, n, grid, options, nullptr);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s.gap_product = std::max(s.gap_product, std::abs(s.product.mean[i] - det[i][2]));
    s.gap_xbar = std::max(s.gap_xbar, std::abs(s.xbar.mean[i] - det[i][3]));
    s.gap_pbar = std::max(s.gap_pbar, std::abs(s.pbar.mean[i] - det[i][4]));
  }
  return s;
}

void write_summary_csv(const EnsembleSummary& s, std::ostream& os) {
  CsvWriter csv(os, {"t", "var_x_mean", "var_x_stderr", "var_p_mean", "var_p_stderr",
                     "product_mean", "product_stderr", "xbar_mean", "xbar_stderr", "pbar_mean",
                     "pbar_stderr"});
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    csv.row({s.t[i], s.var_x.mean[i], s.var_x.stderr_[i], s.var_p.mean[i], s.var_p.stderr_[i],
             s.product.mean[i], s.product.stderr_[i], s.xbar.mean[i], s.xbar.stderr_[i],
             s.pbar.mean[i], s.pbar.stderr_[i]});
  }
}

}  // namespace quadfield
