#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polariton/observables.hpp"
#include "polariton/parallel.hpp"
#include "polariton/propagator.hpp"
#include "polariton/pulse.hpp"

namespace polariton {

inline constexpr const char* kCodeVersion = "polariton-orientation 1.0.0";

// Phase used to undo the delay-induced shift on the lower branch pulse of
// the second-harmonic scheme when plotting Delta phi_{1,-} = phi_{1,-} - phi_tau.
inline constexpr double kSecondHarmonicDelayPhase = 0.1905 * kPi;

struct ExperimentConfig {
  MoleculeSpec molecule;
  CavitySpec cavity;

  double dw_over_g = 0.1;
  std::vector<double> dw_grid_over_g;     // empty: 0.05, 0.10, ..., 1.00
  std::optional<PhaseMap> phases;          // carrier phase overrides (rad)
  std::optional<DelayMap> delays_tau0;     // pulse centers in tau0; empty: scheme defaults

  DriveKind model = DriveKind::FullProduct;
  CouplingForm coupling = CouplingForm::RotatingWave;
  BranchSign branch = BranchSign::Physical;
  double dt = 0.0;  // 0: 0.02 / max Bohr frequency
  int n_max = 3;
  double window_tau0 = 10.0;  // observation after the last pulse, besides 6 tau
  double sample_spacing = 0.05;  // internal time between stored snapshots

  int phase_resolution = 37;  // points per axis over [0, 2 pi]
  std::string output_dir = "runs/default";

  void validate() const;
  /// Pulse centers in internal time units.
  DelayMap resolved_delays() const;
  std::vector<double> resolved_dw_grid() const;
};

ExperimentConfig default_config(CavityConfig config);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Levels reported in population/phase tables, leakage states included.
std::vector<LevelLabel> reported_levels(CavityConfig config);

struct ScenarioResult {
  PulseTrain train;
  double dt = 0.0;
  TimeSpan span;
  OrientationSeries series;
  PostPulseMax max;
  std::optional<double> revival;
  PopulationRecord populations;
  PhaseRecord phases;
  double norm_drift = 0.0;
  StateVector final_state;
  std::optional<Trajectory> trajectory;  // kept only on request
  std::string error;                     // non-empty when the integrator failed

  bool ok() const { return error.empty(); }
};

PulseTrain build_train(const ExperimentConfig& config, double dw_over_g,
                       const std::optional<PhaseMap>& phases);

ScenarioResult run_scenario(const ExperimentConfig& config, double dw_over_g,
                            const std::optional<PhaseMap>& phases = std::nullopt,
                            bool keep_trajectory = false);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct SweepResult {
  std::string figure;
  std::vector<Table> tables;
  std::vector<std::string> errors;  // one entry per failed grid point
  nlohmann::json manifest;

  const Table& table(const std::string& name) const;
};

// Per bandwidth: design, propagate, record the orientation series (long
// form) and the post-pulse maximum.
SweepResult bandwidth_sweep(const ExperimentConfig& config, const std::vector<double>& dw_grid,
                            Execution execution = Execution::Parallel);

/// Final dressed populations and relative phases per bandwidth.
SweepResult population_phase_vs_bandwidth(const ExperimentConfig& config,
                                          const std::vector<double>& dw_grid,
                                          const std::vector<LevelLabel>& levels,
                                          Execution execution = Execution::Parallel);

/// One propagation as tables: orientation, populations and phases over
/// time, plus the raw trajectory.
SweepResult single_run(const ExperimentConfig& config);

LevelLabel level_from_name(const std::string& name);

struct PhaseAxes {
  Transition a;
  Transition b;
  Transition fixed;
  double offset_a = 0.0;  // axis value = carrier phase - offset
  double offset_b = 0.0;
  double cut_b_for_a = 0.0;  // cut line over a at this b
  double cut_a_for_b = 0.0;  // cut line over b at this a
  std::string label_a;
  std::string label_b;
};

PhaseAxes phase_axes(CavityConfig config);

/// Carrier phases used as the base of the phase maps (only the fixed one matters).
PhaseMap reference_phases(CavityConfig config);

/// resolution points from 0 to 2 pi inclusive (37 gives a pi/18 step)
std::vector<double> phase_grid(int resolution);

// Post-pulse maximum on the (a, b) grid plus the two cut lines.
SweepResult phase_map(const ExperimentConfig& config, const std::vector<double>& grid_a,
                      const std::vector<double>& grid_b, Execution execution = Execution::Parallel);

/// Only the two cut lines (tables "cut_a" and "cut_b").
SweepResult phase_cuts(const ExperimentConfig& config, const std::vector<double>& grid,
                       Execution execution = Execution::Parallel);

struct CutArgmax {
  double argmax = 0.0;
  double value = 0.0;
};
CutArgmax cut_argmax(const Table& cut);

// Every numeric choice of a run plus a SHA-256 over the canonical JSON.
nlohmann::json run_manifest(const ExperimentConfig& config, const std::string& figure,
                            const nlohmann::json& extra = nlohmann::json::object());
std::string content_hash(const nlohmann::json& value);

void write_table_csv(const Table& table, const std::filesystem::path& path);
Table read_table_csv(const std::filesystem::path& path);
/// Writes <dir>/<table>.csv for every table and <dir>/manifest.json.
void write_sweep(const SweepResult& result, const std::filesystem::path& dir);

void write_train_csv(const PulseTrain& train, const std::filesystem::path& path);
void write_trajectory_csv(const Trajectory& trajectory, const std::vector<std::string>& basis_labels,
                          const std::filesystem::path& path);
/// Names of the active basis states of a drive ("J0n1" or dressed labels).
std::vector<std::string> basis_labels(const CompiledDrive& drive);
void write_series_csv(const OrientationSeries& series, const std::filesystem::path& path);

/// Reruns the sweep recorded in a manifest.
SweepResult replay_manifest(const nlohmann::json& manifest, Execution execution = Execution::Parallel);

/// Minimal SVG renderings for a run directory; cosmetic only.
std::vector<std::filesystem::path> render_run(const std::filesystem::path& dir);

}  // namespace polariton
