#include "quadfield/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quadfield/csv.hpp"
#include "quadfield/error.hpp"

#ifndef QUADFIELD_BUILD_ID
#define QUADFIELD_BUILD_ID "unknown"
#endif

namespace quadfield {

using json = nlohmann::json;

std::string build_id() { return QUADFIELD_BUILD_ID; }

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw ConfigError(join(path, item.key()), "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "required field missing");
  return number(obj.at(key), join(path, key));
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
  return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
}

std::uint64_t unsigned_integer(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "required field missing");
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(join(path, key), "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string string_field(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "required field missing");
  if (!obj.at(key).is_string()) throw ConfigError(join(path, key), "expected a string");
  return obj.at(key).get<std::string>();
}

std::vector<double> number_array(const json& obj, const char* key, const std::string& path) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) throw ConfigError(p, "required field missing");
  if (!obj.at(key).is_array()) throw ConfigError(p, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < obj.at(key).size(); ++i) {
    out.push_back(number(obj.at(key)[i], p + "[" + std::to_string(i) + "]"));
  }
  return out;
}

TimeFunction parse_function(const json& j, const std::string& path) {
  if (j.is_number()) return TimeFunction::constant(number(j, path));
  expect_object(j, path);
  const std::string type = string_field(j, "type", path);
  if (type == "constant") {
    check_keys(j, path, {"type", "value"});
    return TimeFunction::constant(number(j, "value", path));
  }
  if (type == "exponential") {
    check_keys(j, path, {"type", "amplitude", "rate"});
    return TimeFunction::exponential(number(j, "amplitude", path), number(j, "rate", path));
  }
  if (type == "sinusoid") {
    check_keys(j, path, {"type", "offset", "amplitude", "omega", "phase"});
    return TimeFunction::sinusoid(number_or(j, "offset", path, 0.0), number(j, "amplitude", path),
                                  number(j, "omega", path), number_or(j, "phase", path, 0.0));
  }
  if (type == "table") {
    check_keys(j, path, {"type", "t", "values"});
    auto t = number_array(j, "t", path);
    auto v = number_array(j, "values", path);
    if (t.size() != v.size() || t.size() < 3) {
      throw ConfigError(join(path, "values"), "needs at least three samples matching t");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] > t[i - 1])) throw ConfigError(join(path, "t"), "must be strictly increasing");
    }
    return TimeFunction::table(std::move(t), std::move(v));
  }
  throw ConfigError(join(path, "type"), "unknown function type '" + type + "'");
}

CoefficientSet parse_preset(const json& j, TimeWindow window, std::string& label) {
  const std::string path = "preset";
  std::string name;
  json params = json::object();
  if (j.is_string()) {
    name = j.get<std::string>();
  } else {
    expect_object(j, path);
    name = string_field(j, "name", path);
    params = j;
    params.erase("name");
  }
  label = name;
  if (name == "static_oscillator") {
    check_keys(params, path, {});
    return presets::static_oscillator(window);
  }
  if (name == "free_particle") {
    check_keys(params, path, {});
    return presets::free_particle(window);
  }
  if (name == "caldirola_kanai") {
    check_keys(params, path, {"gamma"});
    return presets::caldirola_kanai(number(params, "gamma", path), window);
  }
  if (name == "parametric") {
    check_keys(params, path, {"depth", "omega"});
    return presets::parametric(number(params, "depth", path), number(params, "omega", path), window);
  }
  if (name == "driven_oscillator") {
    check_keys(params, path, {"f", "g"});
    return presets::driven_oscillator(number_or(params, "f", path, 0.0),
                                      number_or(params, "g", path, 0.0), window);
  }
  throw ConfigError(join(path, "name"), "unknown preset '" + name + "'");
}

CoefficientSet parse_functions(const json& j, TimeWindow window) {
  expect_object(j, "functions");
  check_keys(j, "functions", {"a", "b", "c", "d", "f", "g"});
  if (!j.contains("a")) throw ConfigError("functions.a", "required field missing");
  CoefficientSet set;
  set.window = window;
  for (Coefficient c : {Coefficient::a, Coefficient::b, Coefficient::c, Coefficient::d,
                        Coefficient::f, Coefficient::g}) {
    const std::string key(coefficient_name(c));
    if (!j.contains(key)) continue;
    TimeFunction fn = parse_function(j.at(key), "functions." + key);
    switch (c) {
      case Coefficient::a: set.a = fn; break;
      case Coefficient::b: set.b = fn; break;
      case Coefficient::c: set.c = fn; break;
      case Coefficient::d: set.d = fn; break;
      case Coefficient::f: set.f = fn; break;
      case Coefficient::g: set.g = fn; break;
    }
  }
  return set;
}

CoefficientSet parse_table_file(const std::filesystem::path& file, TimeWindow window) {
  std::ifstream in(file);
  if (!in) throw ConfigError("table_file", "cannot open " + file.string());
  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> columns;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      cells.push_back(cell);
    }
    if (header.empty()) {
      header = cells;
      columns.resize(header.size());
      continue;
    }
    if (cells.size() != header.size()) {
      throw ConfigError("table_file", file.string() + ":" + std::to_string(line_no) +
                                          ": expected " + std::to_string(header.size()) + " columns");
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
      char* end = nullptr;
      const double v = std::strtod(cells[k].c_str(), &end);
      if (end == cells[k].c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError("table_file", file.string() + ":" + std::to_string(line_no) +
                                            ": bad number '" + cells[k] + "'");
      }
      columns[k].push_back(v);
    }
  }
  auto find = [&](const std::string& name) -> int {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return static_cast<int>(k);
    }
    return -1;
  };
  const int ti = find("t");
  if (ti < 0 || find("a") < 0) throw ConfigError("table_file", "header must contain t and a");
  for (const auto& h : header) {
    if (h != "t" && h != "a" && h != "b" && h != "c" && h != "d" && h != "f" && h != "g") {
      throw ConfigError("table_file", "unknown column '" + h + "'");
    }
  }
  const auto& t = columns[static_cast<std::size_t>(ti)];
  if (t.size() < 3) throw ConfigError("table_file", "needs at least three rows");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw ConfigError("table_file", "t must be strictly increasing");
  }
  if (t.front() > window.t0 || t.back() < window.t_max) {
    throw ConfigError("table_file", "rows must cover [0, t_max]");
  }
  CoefficientSet set;
  set.window = window;
  auto column = [&](const char* name, TimeFunction& out) {
    const int k = find(name);
    if (k >= 0) out = TimeFunction::table(t, columns[static_cast<std::size_t>(k)]);
  };
  column("a", set.a);
  column("b", set.b);
  column("c", set.c);
  column("d", set.d);
  column("f", set.f);
  column("g", set.g);
  return set;
}

TimeGrid parse_grid(const json& root) {
  if (!root.contains("grid")) throw ConfigError("grid", "required field missing");
  const json& j = root.at("grid");
  expect_object(j, "grid");
  check_keys(j, "grid", {"t_max", "dt", "points"});
  const double t_max = number(j, "t_max", "grid");
  if (!(t_max > 0)) throw ConfigError("grid.t_max", "must be positive");
  const bool has_dt = j.contains("dt");
  const bool has_points = j.contains("points");
  if (has_dt == has_points) throw ConfigError("grid", "give exactly one of dt or points");
  if (has_dt) return TimeGrid::uniform(t_max, number(j, "dt", "grid"));
  const auto points = unsigned_integer(j, "points", "grid");
  if (points < 2) throw ConfigError("grid.points", "must be at least 2");
  return TimeGrid::uniform(t_max, t_max / static_cast<double>(points - 1));
}

std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError("", "JSON " + what + " (" + locate(text, e.byte) + ")");
  }
  expect_object(root, "");
  check_keys(root, "", {"name", "preset", "functions", "medium", "table_file", "init", "fock_index",
                        "grid", "integrator", "field_scales", "tolerances", "noise", "output_dir"});

  Scenario sc;
  sc.config_text = text;
  sc.name = string_field(root, "name", "");
  if (sc.name.empty()) throw ConfigError("name", "must not be empty");
  sc.grid = parse_grid(root);
  const TimeWindow window{0.0, sc.grid.back()};

  if (root.contains("field_scales")) {
    const json& j = root.at("field_scales");
    expect_object(j, "field_scales");
    check_keys(j, "field_scales", {"omega", "varpi"});
    sc.scales.omega = number_or(j, "omega", "field_scales", 1.0);
    sc.scales.varpi = number_or(j, "varpi", "field_scales", 1.0);
  }

  int sources = 0;
  for (const char* k : {"preset", "functions", "medium", "table_file"}) sources += root.contains(k);
  if (sources != 1) {
    throw ConfigError("preset", "exactly one of preset, functions, medium, table_file is required");
  }
  if (root.contains("preset")) {
    sc.source = CoefficientSource::preset;
    sc.set = parse_preset(root.at("preset"), window, sc.source_label);
  } else if (root.contains("functions")) {
    sc.source = CoefficientSource::functions;
    sc.source_label = "functions";
    sc.set = parse_functions(root.at("functions"), window);
  } else if (root.contains("table_file")) {
    sc.source = CoefficientSource::table_file;
    if (!root.at("table_file").is_string()) throw ConfigError("table_file", "expected a string");
    std::filesystem::path file = root.at("table_file").get<std::string>();
    sc.source_label = file.string();
    if (file.is_relative()) file = base_dir / file;
    sc.set = parse_table_file(file, window);
  } else {
    sc.source = CoefficientSource::medium;
    sc.source_label = "medium";
    const json& j = root.at("medium");
    expect_object(j, "medium");
    check_keys(j, "medium", {"xi", "eta", "chi", "upsilon"});
    MediumProfile m;
    if (j.contains("xi")) m.xi = parse_function(j.at("xi"), "medium.xi");
    if (j.contains("eta")) m.eta = parse_function(j.at("eta"), "medium.eta");
    if (j.contains("chi")) m.chi = parse_function(j.at("chi"), "medium.chi");
    m.upsilon = number_or(j, "upsilon", "medium", 1.0);
    m.scales = sc.scales;
    try {
      sc.set = medium_to_hamiltonian(m, sc.grid);
    } catch (const InvalidMediumError& e) {
      throw ConfigError("medium", e.what());
    }
    sc.medium = m;
  }

  if (!root.contains("init")) throw ConfigError("init", "required field missing");
  {
    const json& j = root.at("init");
    expect_object(j, "init");
    check_keys(j, "init", {"alpha0", "beta0", "gamma0", "delta0", "epsilon0", "kappa0"});
    sc.init.alpha0 = number_or(j, "alpha0", "init", 0.0);
    sc.init.beta0 = number(j, "beta0", "init");
    sc.init.gamma0 = number_or(j, "gamma0", "init", 0.0);
    sc.init.delta0 = number_or(j, "delta0", "init", 0.0);
    sc.init.eps0 = number_or(j, "epsilon0", "init", 0.0);
    sc.init.kappa0 = number_or(j, "kappa0", "init", 0.0);
    sc.init.validate();
  }

  if (root.contains("fock_index")) {
    const auto n = unsigned_integer(root, "fock_index", "");
    if (n > 1000000) throw ConfigError("fock_index", "too large");
    sc.fock_index = static_cast<int>(n);
  }

  if (root.contains("integrator")) {
    const json& j = root.at("integrator");
    expect_object(j, "integrator");
    check_keys(j, "integrator", {"rel_tol", "abs_tol", "max_step", "initial_step", "max_steps"});
    sc.ode.rel_tol = number_or(j, "rel_tol", "integrator", sc.ode.rel_tol);
    sc.ode.abs_tol = number_or(j, "abs_tol", "integrator", sc.ode.abs_tol);
    sc.ode.max_step = number_or(j, "max_step", "integrator", sc.ode.max_step);
    sc.ode.initial_step = number_or(j, "initial_step", "integrator", sc.ode.initial_step);
    if (j.contains("max_steps")) sc.ode.max_steps = unsigned_integer(j, "max_steps", "integrator");
    if (!(sc.ode.rel_tol > 0)) throw ConfigError("integrator.rel_tol", "must be positive");
    if (!(sc.ode.abs_tol > 0)) throw ConfigError("integrator.abs_tol", "must be positive");
    if (sc.ode.max_step < 0) throw ConfigError("integrator.max_step", "must be nonnegative");
  }

  if (root.contains("tolerances")) {
    const json& j = root.at("tolerances");
    expect_object(j, "tolerances");
    check_keys(j, "tolerances",
               {"oracle", "commutator", "heisenberg", "uncertainty", "min_uncertainty",
                "quasi_invariant", "wronskian", "classical_mode", "mode_amplitude", "phase"});
    Tolerances& t = sc.tolerances;
    const std::string p = "tolerances";
    t.oracle = number_or(j, "oracle", p, t.oracle);
    t.commutator = number_or(j, "commutator", p, t.commutator);
    t.heisenberg = number_or(j, "heisenberg", p, t.heisenberg);
    t.uncertainty = number_or(j, "uncertainty", p, t.uncertainty);
    t.min_uncertainty = number_or(j, "min_uncertainty", p, t.min_uncertainty);
    t.quasi_invariant = number_or(j, "quasi_invariant", p, t.quasi_invariant);
    t.wronskian = number_or(j, "wronskian", p, t.wronskian);
    t.classical_mode = number_or(j, "classical_mode", p, t.classical_mode);
    t.mode_amplitude = number_or(j, "mode_amplitude", p, t.mode_amplitude);
    t.phase = number_or(j, "phase", p, t.phase);
  }

  if (root.contains("noise")) {
    const json& j = root.at("noise");
    expect_object(j, "noise");
    check_keys(j, "noise", {"target", "model", "amplitude", "correlation_time", "seed", "paths"});
    if (!sc.medium) throw ConfigError("noise", "noise requires a medium coefficient source");
    NoiseSpec spec;
    if (j.contains("target")) spec.target = parse_noise_target(string_field(j, "target", "noise"));
    if (j.contains("model")) spec.model = parse_noise_model(string_field(j, "model", "noise"));
    spec.amplitude = number(j, "amplitude", "noise");
    spec.correlation_time = number(j, "correlation_time", "noise");
    spec.seed = unsigned_integer(j, "seed", "noise");
    spec.paths = unsigned_integer(j, "paths", "noise");
    spec.validate();
    sc.noise = spec;
  }

  if (root.contains("output_dir")) sc.output_dir = string_field(root, "output_dir", "");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(e.field(), std::string(e.what()).substr(e.field().empty() ? 0 : e.field().size() + 2) +
                                     " [" + path.string() + "]");
  }
}

bool RunResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
}

RunResult run_scenario(const Scenario& sc) {
  RunResult r;
  r.scenario = &sc;
  const Tolerances& tol = sc.tolerances;
  const CoefficientSet& set = sc.set;
  const int n = sc.fock_index;
  auto check = [&r](std::string name, double value, double tolerance, std::string note = "") {
    r.checks.push_back({std::move(name), value, tolerance, value <= tolerance, std::move(note)});
  };

  r.basis = integrate_characteristic(set, sc.grid, {sc.ode, 1.0});
  r.frame = build_frame(sc.init, r.basis, set, sc.ode);
  r.path = solve_ermakov(sc.init, r.frame, r.basis, set);
  r.oracle = riccati_oracle(sc.init, set, sc.grid, sc.ode);
  r.homogeneous = homogeneous_driven(r.basis, set, sc.ode);
  r.observables = evaluate_observables(r.path, r.basis, set, n, sc.scales);

  const PathDeviation dev = compare_paths(r.path, r.oracle);
  check("oracle_deviation", dev.max(), tol.oracle, "worst at t=" + format_double(dev.t_worst));

  const auto closed_ops = ansatz_path(r.path);
  check("commutator_closed_form", commutator_defect(closed_ops), tol.commutator);
  check("commutator_oracle", commutator_defect(ansatz_path(r.oracle)), tol.commutator);

  r.heisenberg = heisenberg_residual(set, sc.grid, closed_ops);
  check("heisenberg_residual", r.heisenberg.max, tol.heisenberg,
        "dt=" + format_double(sc.grid.step()));

  check("wronskian_drift", wronskian_drift(r.basis, set).max_abs_drift, tol.wronskian);

  const double level = (n + 0.5) * (n + 0.5);
  double deficit = 0.0;
  for (const auto& o : r.observables) deficit = std::max(deficit, level - o.product);
  check("uncertainty_bound", deficit, tol.uncertainty, "max of (n+1/2)^2 - product");

  if (n == 0) {
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& o : r.observables) {
      if (o.min_uncertainty) {
        worst = std::max(worst, std::abs(o.product - 0.25));
        ++count;
      }
    }
    r.min_uncertainty_times = minimum_uncertainty_instants(r.path, r.frame, r.basis, set);
    for (double t : r.min_uncertainty_times) {
      const double alpha = closed_form_alpha(r.frame, r.basis, set, t);
      const double beta = r.frame.beta0 * r.basis.lambda_at(t) / std::abs(frame_z_at(r.frame, r.basis, t).first);
      const double product = 0.25 * (1.0 + 4.0 * alpha * alpha / std::pow(beta, 4));
      worst = std::max(worst, std::abs(product - 0.25));
      ++count;
    }
    check("minimum_uncertainty", worst, tol.min_uncertainty,
          std::to_string(count) + " instant(s) with alpha = 0");
  }

  r.quasi = quasi_invariants(r.path, r.homogeneous, r.frame, r.basis, set, sc.init);
  check("quasi_invariants", r.quasi.max(), tol.quasi_invariant,
        r.quasi.notes.empty() ? "" : r.quasi.notes.front());
  for (const auto& note : r.quasi.notes) r.notes.push_back(note);

  r.phase_geo_route2 = cumulative_trapezoid(r.path, geometric_rate_from_derivatives(r.path, n));
  double phase_gap = 0.0;
  for (std::size_t i = 0; i < r.observables.size(); ++i) {
    phase_gap = std::max(phase_gap, std::abs(r.observables[i].phase_geo - r.phase_geo_route2[i]));
  }
  check("geometric_phase_routes", phase_gap, tol.phase);

  if (sc.medium) {
    check("classical_mode_equivalence", classical_mode_equivalence(*sc.medium, sc.grid),
          tol.classical_mode);
    if (!set.is_driven()) {
      const auto mode = classical_mode_deviation(*sc.medium, set, r.observables, sc.grid, sc.ode);
      check("mode_amplitude_b", mode.b_deviation, tol.mode_amplitude);
      check("mode_amplitude_d", mode.d_deviation, tol.mode_amplitude);
    }
  }
  if (sc.noise) r.notes.push_back("noise ignored by the deterministic run; use the ensemble command");
  return r;
}

std::filesystem::path output_directory(const Scenario& sc) {
  if (const char* env = std::getenv("QUADFIELD_OUT_DIR"); env && *env) {
    return std::filesystem::path(env) / sc.name;
  }
  if (!sc.output_dir.empty()) return sc.output_dir;
  return std::filesystem::path("out") / sc.name;
}

namespace {

void open_for_write(std::ofstream& os, const std::filesystem::path& file) {
  os.open(file, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("output_dir", "cannot write " + file.string());
}

json scenario_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["source"] = sc.source_label;
  j["fock_index"] = sc.fock_index;
  j["grid"] = {{"t_max", sc.grid.back()}, {"points", sc.grid.size()}};
  j["init"] = {{"alpha0", sc.init.alpha0}, {"beta0", sc.init.beta0}, {"gamma0", sc.init.gamma0},
               {"delta0", sc.init.delta0}, {"epsilon0", sc.init.eps0}, {"kappa0", sc.init.kappa0}};
  j["integrator"] = {{"rel_tol", sc.ode.rel_tol}, {"abs_tol", sc.ode.abs_tol},
                     {"max_step", sc.ode.max_step}};
  j["config"] = json::parse(sc.config_text);
  j["build"] = build_id();
  return j;
}

}  // namespace

void write_run_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream os;
  open_for_write(os, dir / "ermakov.csv");
  write_ermakov_csv(r.path, os);
  os.close();
  open_for_write(os, dir / "observables.csv");
  write_observables_csv(r.observables, os);
  os.close();
  open_for_write(os, dir / "residuals.csv");
  write_residual_csv(r.heisenberg, os);
  os.close();
  open_for_write(os, dir / "quasi_invariants.csv");
  write_quasi_invariant_csv(r.quasi, os);
  os.close();
  open_for_write(os, dir / "invariants.csv");
  {
    CsvWriter csv(os, {"check", "value", "tolerance", "passed"});
    for (const auto& c : r.checks) csv.row(c.name, {c.value, c.tolerance, c.passed ? 1.0 : 0.0});
  }
  os.close();

  json m = scenario_json(*r.scenario);
  m["passed"] = r.passed();
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance},
                      {"passed", c.passed}, {"note", c.note}});
  }
  m["checks"] = checks;
  m["notes"] = r.notes;
  m["minimum_uncertainty_times"] = r.min_uncertainty_times;
  open_for_write(os, dir / "manifest.json");
  os << m.dump(2) << '\n';
}

void write_ensemble_outputs(const Scenario& sc, const EnsembleSummary& s,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream os;
  open_for_write(os, dir / "summary.csv");
  write_summary_csv(s, os);
  os.close();
  json m = scenario_json(sc);
  const NoiseSpec& spec = *sc.noise;
  m["noise"] = {{"target", to_string(spec.target)}, {"model", to_string(spec.model)},
                {"amplitude", spec.amplitude}, {"correlation_time", spec.correlation_time},
                {"seed", spec.seed}, {"paths", spec.paths}};
  m["ensemble"] = {{"paths", s.paths},
                   {"failed", s.failed},
                   {"retries", s.retries},
                   {"invariant_violations", s.invariant_violations},
                   {"min_product", s.min_product},
                   {"max_oracle_deviation", s.max_oracle_deviation},
                   {"max_wronskian_drift", s.max_wronskian_drift},
                   {"gap_xbar", s.gap_xbar},
                   {"gap_pbar", s.gap_pbar},
                   {"gap_product", s.gap_product}};
  m["failures"] = s.failures;
  open_for_write(os, dir / "ensemble_manifest.json");
  os << m.dump(2) << '\n';
}

}  // namespace quadfield
