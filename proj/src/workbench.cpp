#include "polariton/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace polariton {

using nlohmann::json;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string coupling_name(CouplingForm form) { return form == CouplingForm::Full ? "full" : "rotating_wave"; }

CouplingForm coupling_from(const std::string& name) {
  if (name == "full") return CouplingForm::Full;
  if (name == "rotating_wave") return CouplingForm::RotatingWave;
  throw std::invalid_argument("unknown coupling form '" + name + "'");
}

BranchSign branch_from(const std::string& name) {
  if (name == "physical") return BranchSign::Physical;
  if (name == "uniform") return BranchSign::Uniform;
  throw std::invalid_argument("unknown branch sign '" + name + "'");
}

json transition_map_to_json(const std::map<Transition, double>& m) {
  json j = json::object();
  for (const auto& [t, v] : m) j[to_string(t)] = v;
  return j;
}

// Accepts {"plus_ground": x, ...} or a three-element array in scheme order.
std::map<Transition, double> transition_map_from_json(const json& j, CavityConfig config) {
  std::map<Transition, double> out;
  const auto order = scheme_transitions(config);
  if (j.is_array()) {
    if (j.size() != order.size()) throw std::invalid_argument("expected one value per pulse (three)");
    for (std::size_t i = 0; i < order.size(); ++i) out[order[i]] = j.at(i).get<double>();
    return out;
  }
  if (!j.is_object()) throw std::invalid_argument("expected an object keyed by transition or an array");
  for (const auto& [key, value] : j.items()) {
    const Transition t = transition_from_string(key);
    if (std::find(order.begin(), order.end(), t) == order.end())
      throw std::invalid_argument("transition '" + key + "' does not belong to this cavity configuration");
    out[t] = value.get<double>();
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double to_tau0(double t) { return t / kRotationalPeriod; }

}  // namespace

void ExperimentConfig::validate() const {
  molecule.validate();
  cavity.validate();
  if (!(dw_over_g > 0.0)) throw std::invalid_argument("bandwidth dw_over_g must be positive");
  for (double d : dw_grid_over_g)
    if (!(d > 0.0) || d > 1.0) throw std::invalid_argument("bandwidth grid values must lie in (0, 1]");
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be >= 0 (0 selects the default)");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!(window_tau0 > 0.0)) throw std::invalid_argument("observation window must be positive");
  if (!(sample_spacing > 0.0)) throw std::invalid_argument("sample spacing must be positive");
  if (phase_resolution < 2) throw std::invalid_argument("phase resolution must be >= 2");
  if (output_dir.empty()) throw std::invalid_argument("output directory must not be empty");
  const auto order = scheme_transitions(cavity.configuration);
  if (delays_tau0 && delays_tau0->size() != order.size())
    throw std::invalid_argument("delays need one value per pulse");
}

DelayMap ExperimentConfig::resolved_delays() const {
  if (!delays_tau0) return default_delays(cavity.configuration);
  DelayMap d;
  for (const auto& [t, v] : *delays_tau0) d[t] = v * kRotationalPeriod;
  return d;
}

std::vector<double> ExperimentConfig::resolved_dw_grid() const {
  if (!dw_grid_over_g.empty()) return dw_grid_over_g;
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);
  return grid;
}

ExperimentConfig default_config(CavityConfig config) {
  ExperimentConfig c;
  c.cavity.configuration = config;
  c.output_dir = "runs/" + to_string(config);
  return c;
}

ExperimentConfig config_from_json(const json& j) {
  const json cav = j.value("cavity", json::object());
  const CavityConfig configuration = cavity_config_from_string(cav.value("configuration", "fundamental"));
  ExperimentConfig c = default_config(configuration);
  c.cavity.coupling_g = cav.value("g_over_B", c.cavity.coupling_g);

  const json mol = j.value("molecule", json::object());
  c.molecule.rotational_constant_cm1 = mol.value("B_cm1", c.molecule.rotational_constant_cm1);
  c.molecule.dipole_debye = mol.value("mu_debye", c.molecule.dipole_debye);

  const json pulses = j.value("pulses", json::object());
  c.dw_over_g = pulses.value("dw_over_g", c.dw_over_g);
  if (pulses.contains("dw_grid_over_g")) c.dw_grid_over_g = pulses.at("dw_grid_over_g").get<std::vector<double>>();
  if (pulses.contains("phases_rad") && !pulses.at("phases_rad").is_null())
    c.phases = transition_map_from_json(pulses.at("phases_rad"), configuration);
  if (pulses.contains("delays_tau0") && !pulses.at("delays_tau0").is_null())
    c.delays_tau0 = transition_map_from_json(pulses.at("delays_tau0"), configuration);

  const json num = j.value("numerics", json::object());
  c.dt = num.value("dt_internal", c.dt);
  c.n_max = num.value("n_max", c.n_max);
  c.window_tau0 = num.value("window_tau0", c.window_tau0);
  c.sample_spacing = num.value("sample_spacing", c.sample_spacing);
  c.model = drive_kind_from_string(num.value("model", to_string(c.model)));
  c.coupling = coupling_from(num.value("coupling", coupling_name(c.coupling)));
  c.branch = branch_from(num.value("branch_sign", to_string(c.branch)));

  const json sweep = j.value("sweep", json::object());
  c.phase_resolution = sweep.value("phase_resolution", c.phase_resolution);

  const json out = j.value("output", json::object());
  c.output_dir = out.value("dir", c.output_dir);

  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["molecule"] = {{"B_cm1", c.molecule.rotational_constant_cm1}, {"mu_debye", c.molecule.dipole_debye}};
  j["cavity"] = {{"configuration", to_string(c.cavity.configuration)}, {"g_over_B", c.cavity.coupling_g}};
  json pulses;
  pulses["dw_over_g"] = c.dw_over_g;
  pulses["dw_grid_over_g"] = c.dw_grid_over_g;
  pulses["phases_rad"] = c.phases ? transition_map_to_json(*c.phases) : json(nullptr);
  pulses["delays_tau0"] = c.delays_tau0 ? transition_map_to_json(*c.delays_tau0) : json(nullptr);
  j["pulses"] = pulses;
  j["numerics"] = {{"dt_internal", c.dt},
                   {"n_max", c.n_max},
                   {"window_tau0", c.window_tau0},
                   {"sample_spacing", c.sample_spacing},
                   {"model", to_string(c.model)},
                   {"coupling", coupling_name(c.coupling)},
                   {"branch_sign", to_string(c.branch)}};
  j["sweep"] = {{"phase_resolution", c.phase_resolution}};
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::vector<LevelLabel> reported_levels(CavityConfig config) {
  if (config == CavityConfig::Fundamental)
    return {LevelLabel::ground(), LevelLabel::minus(0), LevelLabel::plus(0), LevelLabel::direct(2, 0),
            LevelLabel::minus(1), LevelLabel::plus(1)};
  return {LevelLabel::ground(), LevelLabel::direct(1, 0), LevelLabel::plus(0), LevelLabel::minus(0),
          LevelLabel::direct(0, 1)};
}

LevelLabel level_from_name(const std::string& name) {
  const auto semi = name.find(';');
  if (semi == std::string::npos || semi == 0 || semi + 1 >= name.size())
    throw std::invalid_argument("bad level name '" + name + "'");
  const std::string head = name.substr(0, semi);
  const int n = std::stoi(name.substr(semi + 1));
  if (head == "+") return LevelLabel::plus(n);
  if (head == "-") return LevelLabel::minus(n);
  const int j = std::stoi(head);
  if (j == 0 && n == 0) return LevelLabel::ground();
  return LevelLabel::direct(j, n);
}

PulseTrain build_train(const ExperimentConfig& config, double dw_over_g, const std::optional<PhaseMap>& phases) {
  const double bandwidth = dw_over_g * config.cavity.coupling_g;
  const DelayMap delays = config.resolved_delays();
  PulseTrain designed = design_train(config.cavity, bandwidth, delays);
  if (!phases && !config.phases) return designed;

  PhaseMap merged;
  for (const auto& p : designed.pulses) merged[p.transition] = p.carrier_phase;
  if (config.phases)
    for (const auto& [t, v] : *config.phases) merged[t] = v;
  if (phases)
    for (const auto& [t, v] : *phases) merged[t] = v;
  return synthesize(required_areas(config.cavity.configuration), merged, bandwidth, delays, config.cavity);
}

namespace {

DriveModel drive_model(const ExperimentConfig& config) {
  DriveModel m;
  m.kind = config.model;
  m.cavity = config.cavity;
  m.n_max = config.n_max;
  m.coupling = config.coupling;
  m.branch = config.branch;
  return m;
}

std::vector<LevelLabel> available_levels(const CompiledDrive& drive, const std::vector<LevelLabel>& wanted) {
  std::vector<LevelLabel> out;
  for (const auto& l : wanted)
    for (const auto& d : drive.levels())
      if (d.label == l) {
        out.push_back(l);
        break;
      }
  return out;
}

int snapshot_stride(const ExperimentConfig& config, double dt) {
  return std::max(1, static_cast<int>(std::lround(config.sample_spacing / dt)));
}

}  // namespace

ScenarioResult run_scenario(const ExperimentConfig& config, double dw_over_g, const std::optional<PhaseMap>& phases,
                            bool keep_trajectory) {
  config.validate();
  ScenarioResult r;
  r.train = build_train(config, dw_over_g, phases);
  const CompiledDrive drive(drive_model(config), r.train);
  r.dt = config.dt > 0.0 ? config.dt : default_dt(drive);
  r.span = default_window(r.train, config.window_tau0 * kRotationalPeriod);

  PropagationOptions options;
  options.stride = snapshot_stride(config, r.dt);
  Trajectory traj;
  try {
    traj = propagate(drive, {drive.ground_state(), r.span.start}, r.span, r.dt, options);
  } catch (const IntegrationError& e) {
    r.error = e.what();
    return r;
  }
  r.norm_drift = traj.max_norm_drift;
  r.series = orientation_series(traj, drive);
  r.max = post_pulse_max(r.series);
  try {
    r.revival = revival_period(r.series);
  } catch (const ObservableError&) {
    r.revival.reset();
  }
  r.final_state = traj.final_state();
  const auto levels = available_levels(drive, reported_levels(config.cavity.configuration));
  r.populations = dressed_populations(r.final_state, drive.levels(), levels);
  r.phases = coefficient_phases(r.final_state, drive.levels(), levels);
  if (keep_trajectory) r.trajectory = std::move(traj);
  return r;
}

const Table& SweepResult::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw std::out_of_range("sweep has no table '" + name + "'");
}

namespace {

// Every grid point lands in its own slot; failures are recorded, not thrown.
template <class Fn>
std::vector<std::optional<ScenarioResult>> run_points(std::size_t count, Execution execution,
                                                      std::vector<std::string>& errors, Fn&& make) {
  std::vector<std::optional<ScenarioResult>> out(count);
  std::vector<std::string> slot_errors(count);
  for_each_index(count, execution, [&](std::size_t i) {
    try {
      ScenarioResult r = make(i);
      if (!r.ok()) slot_errors[i] = r.error;
      out[i] = std::move(r);
    } catch (const std::exception& e) {
      slot_errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < count; ++i)
    if (!slot_errors[i].empty()) errors.push_back("point " + std::to_string(i) + ": " + slot_errors[i]);
  return out;
}

bool usable(const std::optional<ScenarioResult>& r) { return r && r->ok(); }

json grid_json(const std::vector<double>& grid) { return json(grid); }

}  // namespace

SweepResult bandwidth_sweep(const ExperimentConfig& config, const std::vector<double>& dw_grid, Execution execution) {
  config.validate();
  if (dw_grid.empty()) throw std::invalid_argument("bandwidth grid is empty");
  for (double d : dw_grid)
    if (!(d > 0.0) || d > 1.0) throw std::invalid_argument("bandwidth grid values must lie in (0, 1]");

  SweepResult result;
  result.figure = "orientation_vs_bandwidth";
  const auto points = run_points(dw_grid.size(), execution, result.errors,
                                 [&](std::size_t i) { return run_scenario(config, dw_grid[i]); });

  Table summary{"max_orientation", {"dw_over_g", "max_cos_theta", "t_max_tau0", "revival_tau0", "norm_drift", "ok"}, {}};
  Table heat{"orientation_heatmap", {"dw_over_g", "t_tau0", "cos_theta"}, {}};
  const double heat_spacing = 0.05 * kRotationalPeriod;
  for (std::size_t i = 0; i < dw_grid.size(); ++i) {
    const auto& r = points[i];
    if (!usable(r)) {
      summary.rows.push_back({dw_grid[i], kNaN, kNaN, kNaN, kNaN, 0.0});
      continue;
    }
    summary.rows.push_back({dw_grid[i], r->max.value, to_tau0(r->max.time),
                            r->revival ? to_tau0(*r->revival) : kNaN, r->norm_drift, 1.0});
    double next = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r->series.times.size(); ++k) {
      const double t = r->series.times[k];
      if (t < r->series.post_pulse_start || t < next) continue;
      heat.rows.push_back({dw_grid[i], to_tau0(t), r->series.values[k]});
      next = t + heat_spacing - 1e-9;
    }
  }
  result.tables = {summary, heat};
  result.manifest = run_manifest(config, result.figure, {{"dw_grid_over_g", grid_json(dw_grid)}});
  return result;
}

SweepResult population_phase_vs_bandwidth(const ExperimentConfig& config, const std::vector<double>& dw_grid,
                                          const std::vector<LevelLabel>& levels, Execution execution) {
  config.validate();
  if (dw_grid.empty()) throw std::invalid_argument("bandwidth grid is empty");
  if (levels.empty()) throw std::invalid_argument("no levels requested");

  ExperimentConfig local = config;
  SweepResult result;
  result.figure = "populations_phases_vs_bandwidth";
  const auto points = run_points(dw_grid.size(), execution, result.errors, [&](std::size_t i) {
    ScenarioResult r = run_scenario(local, dw_grid[i]);
    if (r.ok()) {
      // re-project on the requested levels
      const CompiledDrive drive(drive_model(local), r.train);
      const auto avail = available_levels(drive, levels);
      r.populations = dressed_populations(r.final_state, drive.levels(), avail);
      r.phases = coefficient_phases(r.final_state, drive.levels(), avail);
    }
    return r;
  });

  Table pops{"populations", {"dw_over_g"}, {}};
  Table phases{"phases", {"dw_over_g"}, {}};
  std::vector<LevelLabel> phase_levels;
  for (const auto& l : levels) {
    pops.columns.push_back(l.name());
    if (!(l == LevelLabel::ground())) {
      phases.columns.push_back(l.name());
      phase_levels.push_back(l);
    }
  }
  pops.columns.push_back("total");

  for (std::size_t i = 0; i < dw_grid.size(); ++i) {
    std::vector<double> prow{dw_grid[i]};
    std::vector<double> frow{dw_grid[i]};
    const auto& r = points[i];
    for (const auto& l : levels) {
      double p = kNaN;
      if (usable(r))
        for (const auto& [label, value] : r->populations.populations)
          if (label == l) p = value;
      prow.push_back(p);
    }
    prow.push_back(usable(r) ? r->populations.total() : kNaN);
    for (const auto& l : phase_levels) {
      double f = kNaN;
      if (usable(r)) {
        const auto it = r->phases.phases.find(l);
        if (it != r->phases.phases.end()) f = it->second;
      }
      frow.push_back(f);
    }
    pops.rows.push_back(prow);
    phases.rows.push_back(frow);
  }
  result.tables = {pops, phases};
  std::vector<std::string> names;
  for (const auto& l : levels) names.push_back(l.name());
  result.manifest = run_manifest(config, result.figure,
                                 {{"dw_grid_over_g", grid_json(dw_grid)}, {"levels", names}});
  return result;
}

SweepResult single_run(const ExperimentConfig& config) {
  const ScenarioResult r = run_scenario(config, config.dw_over_g, std::nullopt, true);
  SweepResult result;
  result.figure = "single_scenario";
  if (!r.ok()) {
    result.errors.push_back(r.error);
    result.manifest = run_manifest(config, result.figure);
    return result;
  }
  const CompiledDrive drive(drive_model(config), r.train);
  const auto levels = available_levels(drive, reported_levels(config.cavity.configuration));

  Table orientation_table{"orientation", {"t_tau0", "cos_theta"}, {}};
  for (std::size_t k = 0; k < r.series.times.size(); ++k)
    orientation_table.rows.push_back({to_tau0(r.series.times[k]), r.series.values[k]});

  Table pops{"populations", {"t_tau0"}, {}};
  for (const auto& l : levels) pops.columns.push_back(l.name());
  for (const auto& snap : r.trajectory->snapshots) {
    std::vector<double> row{to_tau0(snap.time)};
    for (const auto& [l, p] : dressed_populations(snap, drive.levels(), levels).populations) row.push_back(p);
    pops.rows.push_back(row);
  }

  Table phases{"phases", {}, {}};
  std::vector<double> prow;
  for (const auto& l : levels) {
    if (l == LevelLabel::ground()) continue;
    phases.columns.push_back(l.name());
    const auto it = r.phases.phases.find(l);
    prow.push_back(it == r.phases.phases.end() ? kNaN : it->second);
  }
  phases.rows.push_back(prow);

  Table traj{"trajectory", {"t_tau0"}, {}};
  for (const auto& name : basis_labels(drive)) {
    traj.columns.push_back("re_" + name);
    traj.columns.push_back("im_" + name);
  }
  for (const auto& snap : r.trajectory->snapshots) {
    std::vector<double> row{to_tau0(snap.time)};
    for (int k = 0; k < snap.amplitudes.size(); ++k) {
      row.push_back(snap.amplitudes(k).real());
      row.push_back(snap.amplitudes(k).imag());
    }
    traj.rows.push_back(row);
  }

  Table summary{"summary",
                {"dw_over_g", "max_cos_theta", "t_max_tau0", "revival_tau0", "norm_drift", "dt_internal"},
                {{config.dw_over_g, r.max.value, to_tau0(r.max.time), r.revival ? to_tau0(*r.revival) : kNaN,
                  r.norm_drift, r.dt}}};
  result.tables = {summary, orientation_table, pops, phases, traj};
  result.manifest = run_manifest(config, result.figure,
                                 {{"dt_used", r.dt},
                                  {"window_internal", {r.span.start, r.span.end}},
                                  {"snapshot_stride", snapshot_stride(config, r.dt)}});
  return result;
}

PhaseAxes phase_axes(CavityConfig config) {
  PhaseAxes a;
  if (config == CavityConfig::Fundamental) {
    a.a = Transition::PlusGround;
    a.b = Transition::DirectPlus;
    a.fixed = Transition::MinusGround;
    a.cut_b_for_a = 5.0 * kPi / 9.0;
    a.cut_a_for_b = 5.0 * kPi / 9.0;
    a.label_a = "phi_plus0";
    a.label_b = "phi_2plus";
  } else {
    a.a = Transition::MinusOne;
    a.b = Transition::PlusOne;
    a.fixed = Transition::OneGround;
    a.offset_a = kSecondHarmonicDelayPhase;
    a.cut_b_for_a = 0.55 * kPi;
    a.cut_a_for_b = 0.35 * kPi;
    a.label_a = "dphi_1minus";
    a.label_b = "phi_1plus";
  }
  return a;
}

PhaseMap reference_phases(CavityConfig config) {
  if (config == CavityConfig::Fundamental)
    return {{Transition::PlusGround, kPi / 3.0}, {Transition::MinusGround, kPi},
            {Transition::DirectPlus, wrap_phase(-kPi / 3.0)}};
  return {{Transition::OneGround, 0.0}, {Transition::PlusOne, 0.45 * kPi},
          {Transition::MinusOne, wrap_phase(1.55 * kPi + kSecondHarmonicDelayPhase)}};
}

std::vector<double> phase_grid(int resolution) {
  if (resolution < 2) throw std::invalid_argument("phase grid needs at least two points");
  std::vector<double> g;
  for (int k = 0; k < resolution; ++k) g.push_back(2.0 * kPi * k / (resolution - 1));
  return g;
}

namespace {

PhaseMap phases_at(const ExperimentConfig& config, const PhaseAxes& axes, double a, double b) {
  const PhaseMap base = config.phases ? *config.phases : reference_phases(config.cavity.configuration);
  PhaseMap p = reference_phases(config.cavity.configuration);
  for (const auto& [t, v] : base) p[t] = v;
  p[axes.a] = a + axes.offset_a;
  p[axes.b] = b + axes.offset_b;
  return p;
}

Table cut_table(const std::string& name, const std::string& axis, const std::vector<double>& grid,
                const std::vector<std::optional<ScenarioResult>>& points) {
  Table t{name, {axis, "max_cos_theta"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.rows.push_back({grid[i], usable(points[i]) ? points[i]->max.value : kNaN});
  return t;
}

std::pair<Table, Table> cut_lines(const ExperimentConfig& config, const std::vector<double>& grid,
                                  Execution execution, std::vector<std::string>& errors) {
  const auto axes = phase_axes(config.cavity.configuration);
  const std::size_t n = grid.size();
  // first half: a varies at b = cut_b_for_a; second half: b varies at a = cut_a_for_b
  const auto points = run_points(2 * n, execution, errors, [&](std::size_t i) {
    const PhaseMap p = i < n ? phases_at(config, axes, grid[i], axes.cut_b_for_a)
                             : phases_at(config, axes, axes.cut_a_for_b, grid[i - n]);
    return run_scenario(config, config.dw_over_g, p);
  });
  std::vector<std::optional<ScenarioResult>> first(points.begin(), points.begin() + n);
  std::vector<std::optional<ScenarioResult>> second(points.begin() + n, points.end());
  return {cut_table("cut_a", axes.label_a, grid, first), cut_table("cut_b", axes.label_b, grid, second)};
}

json axes_json(const PhaseAxes& axes) {
  return {{"a", to_string(axes.a)},          {"b", to_string(axes.b)},
          {"fixed", to_string(axes.fixed)},  {"offset_a", axes.offset_a},
          {"offset_b", axes.offset_b},       {"cut_b_for_a", axes.cut_b_for_a},
          {"cut_a_for_b", axes.cut_a_for_b}, {"label_a", axes.label_a},
          {"label_b", axes.label_b}};
}

}  // namespace

SweepResult phase_map(const ExperimentConfig& config, const std::vector<double>& grid_a,
                      const std::vector<double>& grid_b, Execution execution) {
  config.validate();
  if (grid_a.empty() || grid_b.empty()) throw std::invalid_argument("phase grids must be nonempty");
  const auto axes = phase_axes(config.cavity.configuration);
  SweepResult result;
  result.figure = "orientation_phase_map";

  const std::size_t nb = grid_b.size();
  const auto points = run_points(grid_a.size() * nb, execution, result.errors, [&](std::size_t i) {
    return run_scenario(config, config.dw_over_g, phases_at(config, axes, grid_a[i / nb], grid_b[i % nb]));
  });
  Table map{"map", {axes.label_a, axes.label_b, "max_cos_theta"}, {}};
  for (std::size_t i = 0; i < points.size(); ++i)
    map.rows.push_back({grid_a[i / nb], grid_b[i % nb], usable(points[i]) ? points[i]->max.value : kNaN});

  auto [cut_a, cut_b] = cut_lines(config, grid_a, execution, result.errors);
  result.tables = {map, cut_a, cut_b};
  result.manifest = run_manifest(config, result.figure,
                                 {{"grid_a", grid_json(grid_a)}, {"grid_b", grid_json(grid_b)}, {"axes", axes_json(axes)}});
  return result;
}

SweepResult phase_cuts(const ExperimentConfig& config, const std::vector<double>& grid, Execution execution) {
  config.validate();
  if (grid.empty()) throw std::invalid_argument("phase grid must be nonempty");
  const auto axes = phase_axes(config.cavity.configuration);
  SweepResult result;
  result.figure = "orientation_phase_cuts";
  auto [cut_a, cut_b] = cut_lines(config, grid, execution, result.errors);
  result.tables = {cut_a, cut_b};
  result.manifest = run_manifest(config, result.figure, {{"grid", grid_json(grid)}, {"axes", axes_json(axes)}});
  return result;
}

CutArgmax cut_argmax(const Table& cut) {
  CutArgmax best{kNaN, -1.0};
  for (const auto& row : cut.rows)
    if (!std::isnan(row[1]) && row[1] > best.value) best = {row[0], row[1]};
  if (std::isnan(best.argmax)) throw std::runtime_error("cut line " + cut.name + " has no valid points");
  return best;
}

std::string content_hash(const json& value) {
  const std::string text = value.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

json run_manifest(const ExperimentConfig& config, const std::string& figure, const json& extra) {
  json m;
  m["figure"] = figure;
  m["code_version"] = kCodeVersion;
  m["config"] = config_to_json(config);
  m["numerics"] = {{"integrator", "rk4_fixed_step"},
                   {"dt_internal", config.dt},
                   {"dt_rule", "0.02 / max Bohr frequency when dt_internal is 0"},
                   {"n_max", config.n_max},
                   {"window", "[-6 tau, t_last + 6 tau + window_tau0 * tau0]"},
                   {"window_tau0", config.window_tau0},
                   {"post_pulse_start", "t_last + 4 tau"},
                   {"sample_spacing", config.sample_spacing},
                   {"abort_norm_drift", PropagationOptions{}.abort_norm_drift}};
  m["seeds"] = {{"brute_force", BruteForceOptions{}.seed}};
  m["run"] = extra;
  m["hash"] = content_hash(m);
  return m;
}

void write_table_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
}

Table read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Table t;
  t.name = path.stem().string();
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) return t;
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(cell == "nan" ? kNaN : std::stod(cell));
    t.rows.push_back(row);
  }
  return t;
}

void write_sweep(const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : result.tables) write_table_csv(t, dir / (t.name + ".csv"));
  json manifest = result.manifest;
  json files = json::array();
  for (const auto& t : result.tables) files.push_back(t.name + ".csv");
  // outputs and errors sit next to the hashed record, outside the hash
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  json wrapper = manifest;
  wrapper["outputs"] = files;
  wrapper["errors"] = result.errors;
  out << wrapper.dump(2) << '\n';
}

void write_train_csv(const PulseTrain& train, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "transition,peak_rabi_B,center_tau0,width_tau0,carrier_B,phase_rad\n";
  for (const auto& p : train.pulses)
    out << to_string(p.transition) << ',' << format_number(p.peak_rabi) << ',' << format_number(to_tau0(p.center))
        << ',' << format_number(to_tau0(p.width)) << ',' << format_number(p.carrier_frequency) << ','
        << format_number(p.carrier_phase) << '\n';
}

std::vector<std::string> basis_labels(const CompiledDrive& drive) {
  std::vector<std::string> names;
  if (drive.model().kind == DriveKind::FullProduct) {
    const ProductBasis basis(drive.model().n_max);
    for (int i = 0; i < basis.dimension(); ++i) {
      const auto [j, n] = basis.state(i);
      names.push_back("J" + std::to_string(j) + "n" + std::to_string(n));
    }
  } else {
    for (const auto& l : drive.levels()) names.push_back(l.label.name());
  }
  return names;
}

void write_trajectory_csv(const Trajectory& trajectory, const std::vector<std::string>& labels,
                          const std::filesystem::path& path) {
  Table t{"trajectory", {"t_tau0"}, {}};
  const int dim = trajectory.snapshots.empty() ? 0 : static_cast<int>(trajectory.snapshots.front().amplitudes.size());
  for (int k = 0; k < dim; ++k) {
    const std::string name = k < static_cast<int>(labels.size()) ? labels[k] : std::to_string(k);
    t.columns.push_back("re_" + name);
    t.columns.push_back("im_" + name);
  }
  for (const auto& s : trajectory.snapshots) {
    std::vector<double> row{to_tau0(s.time)};
    for (int k = 0; k < dim; ++k) {
      row.push_back(s.amplitudes(k).real());
      row.push_back(s.amplitudes(k).imag());
    }
    t.rows.push_back(row);
  }
  write_table_csv(t, path);
}

void write_series_csv(const OrientationSeries& series, const std::filesystem::path& path) {
  Table t{"orientation", {"t_tau0", "cos_theta"}, {}};
  for (std::size_t k = 0; k < series.times.size(); ++k) t.rows.push_back({to_tau0(series.times[k]), series.values[k]});
  write_table_csv(t, path);
}

SweepResult replay_manifest(const json& manifest, Execution execution) {
  const ExperimentConfig config = config_from_json(manifest.at("config"));
  const std::string figure = manifest.at("figure").get<std::string>();
  const json& run = manifest.at("run");
  if (figure == "orientation_vs_bandwidth")
    return bandwidth_sweep(config, run.at("dw_grid_over_g").get<std::vector<double>>(), execution);
  if (figure == "populations_phases_vs_bandwidth") {
    std::vector<LevelLabel> levels;
    for (const auto& name : run.at("levels")) levels.push_back(level_from_name(name.get<std::string>()));
    return population_phase_vs_bandwidth(config, run.at("dw_grid_over_g").get<std::vector<double>>(), levels,
                                         execution);
  }
  if (figure == "orientation_phase_map")
    return phase_map(config, run.at("grid_a").get<std::vector<double>>(), run.at("grid_b").get<std::vector<double>>(),
                     execution);
  if (figure == "orientation_phase_cuts")
    return phase_cuts(config, run.at("grid").get<std::vector<double>>(), execution);
  if (figure == "single_scenario") return single_run(config);
  throw std::invalid_argument("manifest figure '" + figure + "' cannot be replayed");
}

}  // namespace polariton
