#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polariton/magnus.hpp"
#include "polariton/workbench.hpp"

namespace fs = std::filesystem;
using namespace polariton;
using nlohmann::json;

namespace {

Execution execution_of(bool serial) { return serial ? Execution::Serial : Execution::Parallel; }

void report_errors(const SweepResult& r) {
  for (const auto& e : r.errors) std::cerr << "warning: " << e << '\n';
}

int cmd_design(const ExperimentConfig& config) {
  // kept apart from propagate, which writes its own manifest into output_dir
  const fs::path dir = fs::path(config.output_dir) / "design";
  fs::create_directories(dir);
  const PulseTrain train = build_train(config, config.dw_over_g, std::nullopt);
  write_train_csv(train, dir / "pulse_train.csv");

  const double bandwidth = config.dw_over_g * config.cavity.coupling_g;
  double last = 0.0;
  for (const auto& [t, d] : config.resolved_delays()) last = std::max(last, d);
  const TargetState target = optimal_target_state(config.cavity, canonical_target_time(last + 6.0 / bandwidth));
  const TrainVerdict verdict = verify_train(train, config.cavity, config.branch);

  json areas = json::object();
  for (const auto& p : train.pulses) {
    const auto a = pulse_area(train, p.transition, config.cavity, config.branch);
    areas[to_string(p.transition)] = {{"abs", std::abs(a.value)}, {"arg", std::arg(a.value)}};
  }
  json levels = json::array();
  for (int i = 0; i < 4; ++i)
    levels.push_back({{"level", target.levels[i].name()},
                      {"amplitude", target.amplitudes[i]},
                      {"phase_rad", target.phases[i]},
                      {"energy_B", target.energies[i]}});
  json extra = {{"target_time_tau0", target.t_f / kRotationalPeriod},
                {"target", levels},
                {"relative_phases", target.relative_phases()},
                {"numeric_areas", areas},
                {"verifier", {{"predicted_max", verdict.predicted_max},
                              {"time_of_max_tau0", verdict.time_of_max / kRotationalPeriod},
                              {"optimal", verdict.optimal}}}};
  SweepResult r;
  r.figure = "pulse_design";
  r.manifest = run_manifest(config, r.figure, extra);
  write_sweep(r, dir);

  std::cout << "pulse train written to " << (dir / "pulse_train.csv").string() << '\n'
            << "Magnus prediction: max |<cos theta>| = " << verdict.predicted_max
            << (verdict.optimal ? " (optimal)" : " (not optimal)") << '\n';
  return 0;
}

int cmd_propagate(const ExperimentConfig& config) {
  const fs::path dir = config.output_dir;
  const SweepResult r = single_run(config);
  report_errors(r);
  write_sweep(r, dir);
  write_train_csv(build_train(config, config.dw_over_g, std::nullopt), dir / "pulse_train.csv");
  if (!r.errors.empty()) return 2;
  const auto& s = r.table("summary").rows.front();
  std::cout << "post-pulse max |<cos theta>| = " << s[1] << " at t = " << s[2] << " tau0\n"
            << "revival period = " << s[3] << " tau0, norm drift = " << s[4] << '\n';
  render_run(dir);
  return 0;
}

int cmd_sweep_bandwidth(const ExperimentConfig& config, bool serial) {
  const fs::path dir = config.output_dir;
  const auto grid = config.resolved_dw_grid();
  const SweepResult orientation = bandwidth_sweep(config, grid, execution_of(serial));
  report_errors(orientation);
  write_sweep(orientation, dir / orientation.figure);
  render_run(dir / orientation.figure);

  const SweepResult pops =
      population_phase_vs_bandwidth(config, grid, reported_levels(config.cavity.configuration), execution_of(serial));
  report_errors(pops);
  write_sweep(pops, dir / pops.figure);
  render_run(dir / pops.figure);

  for (const auto& row : orientation.table("max_orientation").rows)
    std::cout << "dw/g = " << row[0] << "  max |<cos theta>| = " << row[1] << '\n';
  return orientation.errors.empty() && pops.errors.empty() ? 0 : 2;
}

int cmd_sweep_phase(ExperimentConfig config, bool serial, bool cuts_only, int resolution) {
  if (resolution > 0) config.phase_resolution = resolution;
  const fs::path dir = config.output_dir;
  const auto grid = phase_grid(config.phase_resolution);
  const SweepResult r = cuts_only ? phase_cuts(config, grid, execution_of(serial))
                                  : phase_map(config, grid, grid, execution_of(serial));
  report_errors(r);
  write_sweep(r, dir / r.figure);
  render_run(dir / r.figure);
  const auto axes = phase_axes(config.cavity.configuration);
  const auto a = cut_argmax(r.table("cut_a"));
  const auto b = cut_argmax(r.table("cut_b"));
  std::cout << axes.label_a << " argmax = " << a.argmax / kPi << " pi (value " << a.value << ")\n"
            << axes.label_b << " argmax = " << b.argmax / kPi << " pi (value " << b.value << ")\n";
  return r.errors.empty() ? 0 : 2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cmd_report(const fs::path& dir, bool verify, bool serial) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + dir.string());
  json manifest;
  in >> manifest;
  json hashed = manifest;
  hashed.erase("outputs");
  hashed.erase("errors");
  hashed.erase("hash");
  const bool hash_ok = content_hash(hashed) == manifest.at("hash").get<std::string>();

  std::cout << "figure:        " << manifest.at("figure").get<std::string>() << '\n'
            << "configuration: " << manifest.at("config").at("cavity").at("configuration").get<std::string>() << '\n'
            << "model:         " << manifest.at("config").at("numerics").at("model").get<std::string>() << '\n'
            << "code version:  " << manifest.at("code_version").get<std::string>() << '\n'
            << "hash:          " << manifest.at("hash").get<std::string>() << (hash_ok ? " (ok)" : " (MISMATCH)") << '\n';
  if (manifest.contains("errors") && !manifest.at("errors").empty())
    std::cout << "errors:        " << manifest.at("errors").size() << " failed grid points\n";
  for (const auto& f : render_run(dir)) std::cout << "rendered " << f.string() << '\n';

  if (!verify) return hash_ok ? 0 : 3;
  const SweepResult replay = replay_manifest(manifest, execution_of(serial));
  const fs::path tmp = fs::temp_directory_path() / ("polariton-replay-" + manifest.at("hash").get<std::string>());
  fs::remove_all(tmp);
  write_sweep(replay, tmp);
  bool identical = true;
  for (const auto& t : replay.tables) {
    const std::string name = t.name + ".csv";
    const bool same = slurp(dir / name) == slurp(tmp / name);
    identical = identical && same;
    std::cout << "replay " << name << (same ? ": identical" : ": DIFFERS") << '\n';
  }
  fs::remove_all(tmp);
  return hash_ok && identical ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity molecular-polariton orientation: pulse design and propagation"};
  app.require_subcommand(1);

  std::string config_path;
  bool serial = false;
  bool cuts_only = false;
  bool verify = false;
  int resolution = 0;
  std::string run_dir;

  auto* design = app.add_subcommand("design", "design the three-pulse train and check it with the Magnus oracle");
  auto* propagate = app.add_subcommand("propagate", "propagate one scenario and write trajectory tables");
  auto* sweep_bw = app.add_subcommand("sweep-bandwidth", "orientation, populations and phases versus bandwidth");
  auto* sweep_ph = app.add_subcommand("sweep-phase", "post-pulse maximum versus two carrier phases");
  auto* report = app.add_subcommand("report", "summarize, render and optionally replay a run directory");
  for (auto* sub : {design, propagate, sweep_bw, sweep_ph})
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  for (auto* sub : {sweep_bw, sweep_ph, report}) sub->add_flag("--serial", serial, "use the serial reference path");
  sweep_ph->add_flag("--cuts-only", cuts_only, "only the two cut lines");
  sweep_ph->add_option("--resolution", resolution, "grid points per phase axis over [0, 2 pi]");
  report->add_option("--run", run_dir, "run directory holding manifest.json")->required()->check(CLI::ExistingDirectory);
  report->add_flag("--verify", verify, "rerun from the manifest and compare CSV bytes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*report) return cmd_report(run_dir, verify, serial);
    const ExperimentConfig config = load_config(config_path);
    if (*design) return cmd_design(config);
    if (*propagate) return cmd_propagate(config);
    if (*sweep_bw) return cmd_sweep_bandwidth(config, serial);
    if (*sweep_ph) return cmd_sweep_phase(config, serial, cuts_only, resolution);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
