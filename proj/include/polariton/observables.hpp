#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "polariton/propagator.hpp"

namespace polariton {

class ObservableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// <psi| cos(theta) |psi>, evaluated as Re(psi^dagger C psi) with symmetric C.
double orientation(const Eigen::VectorXcd& psi, const Eigen::MatrixXd& cos_theta);

struct OrientationSeries {
  std::vector<double> times;
  std::vector<double> values;
  double post_pulse_start = 0.0;
};

/// t_last + 4 tau
double post_pulse_start(const PulseTrain& train);

OrientationSeries orientation_series(const Trajectory& trajectory, const CompiledDrive& drive);

struct PopulationRecord {
  double time = 0.0;
  std::vector<std::pair<LevelLabel, double>> populations;

  double operator[](const LevelLabel& label) const;
  double total() const;
};

PopulationRecord dressed_populations(const StateVector& state, const std::vector<DressedLevel>& levels,
                                     const std::vector<LevelLabel>& requested);

struct PhaseRecord {
  std::map<LevelLabel, double> phases;  // relative to the ground coefficient, [0, 2 pi)
  std::vector<LevelLabel> undefined;    // |C| < 1e-8
};

// Interaction-picture phases arg(<level|psi> e^{+i E t}) relative to the
// ground level. The ground level itself is the reference and not listed.
PhaseRecord coefficient_phases(const StateVector& state, const std::vector<DressedLevel>& levels,
                               const std::vector<LevelLabel>& requested);

// Median spacing of successive local maxima of the signed orientation above
// 0.9 x the global maximum inside the post-pulse window. The series is
// negated first when its negative excursion dominates. Peak times are
// refined by quadratic interpolation.
double revival_period(const OrientationSeries& series);

struct PostPulseMax {
  double value = 0.0;
  double time = 0.0;
};

/// Max of |<cos theta>| over t >= post_pulse_start; earliest time on ties.
PostPulseMax post_pulse_max(const OrientationSeries& series);

}  // namespace polariton
