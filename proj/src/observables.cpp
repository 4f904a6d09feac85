#include "polariton/observables.hpp"

#include <algorithm>
#include <cmath>

namespace polariton {

double orientation(const Eigen::VectorXcd& psi, const Eigen::MatrixXd& cos_theta) {
  if (psi.size() != cos_theta.rows()) throw ObservableError("state and operator dimensions differ");
  return psi.dot(cos_theta.cast<std::complex<double>>() * psi).real();
}

double post_pulse_start(const PulseTrain& train) { return train.last_center() + 4.0 * train.max_width(); }

OrientationSeries orientation_series(const Trajectory& trajectory, const CompiledDrive& drive) {
  OrientationSeries s;
  s.post_pulse_start = post_pulse_start(drive.train());
  s.times.reserve(trajectory.snapshots.size());
  s.values.reserve(trajectory.snapshots.size());
  const Eigen::MatrixXcd c = drive.cos_theta().cast<std::complex<double>>();
  for (const auto& snap : trajectory.snapshots) {
    s.times.push_back(snap.time);
    s.values.push_back(snap.amplitudes.dot(c * snap.amplitudes).real());
  }
  return s;
}

double PopulationRecord::operator[](const LevelLabel& label) const {
  for (const auto& [l, p] : populations)
    if (l == label) return p;
  throw ObservableError("population of " + label.name() + " was not recorded");
}

double PopulationRecord::total() const {
  double s = 0.0;
  for (const auto& [l, p] : populations) s += p;
  return s;
}

namespace {

std::complex<double> projection(const StateVector& state, const DressedLevel& level) {
  if (level.coefficients.size() != state.amplitudes.size())
    throw ObservableError("level " + level.label.name() + " lives in a different basis");
  return level.coefficients.cast<std::complex<double>>().dot(state.amplitudes);
}

}  // namespace

PopulationRecord dressed_populations(const StateVector& state, const std::vector<DressedLevel>& levels,
                                     const std::vector<LevelLabel>& requested) {
  PopulationRecord r;
  r.time = state.time;
  for (const auto& label : requested) r.populations.emplace_back(label, std::norm(projection(state, find_level(levels, label))));
  return r;
}

PhaseRecord coefficient_phases(const StateVector& state, const std::vector<DressedLevel>& levels,
                               const std::vector<LevelLabel>& requested) {
  auto interaction = [&](const DressedLevel& level) {
    return projection(state, level) * std::exp(std::complex<double>(0.0, level.energy * state.time));
  };
  const std::complex<double> ground = interaction(find_level(levels, LevelLabel::ground()));
  PhaseRecord r;
  for (const auto& label : requested) {
    if (label == LevelLabel::ground()) continue;
    const std::complex<double> c = interaction(find_level(levels, label));
    if (std::abs(c) < 1e-8 || std::abs(ground) < 1e-8) {
      r.undefined.push_back(label);
      continue;
    }
    r.phases[label] = wrap_phase(std::arg(c * std::conj(ground)));
  }
  return r;
}

double revival_period(const OrientationSeries& series) {
  std::vector<double> t;
  std::vector<double> v;
  for (std::size_t i = 0; i < series.times.size(); ++i)
    if (series.times[i] >= series.post_pulse_start) {
      t.push_back(series.times[i]);
      v.push_back(series.values[i]);
    }
  if (v.size() < 3) throw ObservableError("post-pulse window too short for a revival period");

  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (-*lo > *hi)
    for (double& x : v) x = -x;
  const double top = std::max(-*lo, *hi);

  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > 0.9 * top)) continue;
    // parabola through the three samples
    const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
    const double shift = denom != 0.0 ? 0.5 * (v[i - 1] - v[i + 1]) / denom : 0.0;
    const double h = 0.5 * (t[i + 1] - t[i - 1]);
    peaks.push_back(t[i] + shift * h);
  }
  if (peaks.size() < 2) throw ObservableError("fewer than two revival peaks in the post-pulse window");

  std::vector<double> spacing;
  for (std::size_t i = 1; i < peaks.size(); ++i) spacing.push_back(peaks[i] - peaks[i - 1]);
  std::sort(spacing.begin(), spacing.end());
  const std::size_t n = spacing.size();
  return n % 2 == 1 ? spacing[n / 2] : 0.5 * (spacing[n / 2 - 1] + spacing[n / 2]);
}

PostPulseMax post_pulse_max(const OrientationSeries& series) {
  PostPulseMax best;
  bool any = false;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    if (series.times[i] < series.post_pulse_start) continue;
    const double a = std::abs(series.values[i]);
    if (!any || a > best.value) {
      best = {a, series.times[i]};
      any = true;
    }
  }
  if (!any) throw ObservableError("post-pulse window is empty");
  return best;
}

}  // namespace polariton
