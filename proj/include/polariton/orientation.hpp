#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polariton/parallel.hpp"
#include "polariton/rotor_cavity.hpp"

namespace polariton {

/// The four dressed levels spanning the minimal orientation model, in the
/// order used throughout: Fundamental (0;0, -;0, +;0, 2;0), SecondHarmonic
/// (0;0, 1;0, +;0, -;0).
std::array<LevelLabel, 4> target_levels(CavityConfig config);

struct TransitionMoment {
  LevelLabel upper;
  LevelLabel lower;
  double value = 0.0;  // <upper|cos(theta)|lower>, dipole factored out
};

struct TransitionMomentSet {
  CavityConfig config = CavityConfig::Fundamental;
  std::array<LevelLabel, 4> levels{};
  std::vector<TransitionMoment> moments;

  double get(const LevelLabel& a, const LevelLabel& b) const;
  /// sqrt of the sum of squared moments.
  double norm() const;
};

TransitionMomentSet transition_moments(CavityConfig config);

struct TargetState {
  CavityConfig config = CavityConfig::Fundamental;
  std::array<LevelLabel, 4> levels{};
  std::array<double, 4> energies{};    // units of B
  std::array<double, 4> amplitudes{};  // |C|
  std::array<double, 4> phases{};      // arg C, ground fixed at 0, in [0, 2 pi)
  double t_f = 0.0;

  std::array<std::complex<double>, 4> coefficients() const;
  /// Conventional relative phases: phi_+0, phi_-0, phi_2+, phi_2- (Fundamental)
  /// or phi_10, phi_1+, phi_1- (SecondHarmonic), each reduced to [0, 2 pi).
  std::map<std::string, double> relative_phases() const;
};

double wrap_phase(double phase);

/// Amplitudes maximizing the orientation for the given moments (top
/// eigenvector of the coupling graph); also returns lambda_max.
std::pair<std::array<double, 4>, double> optimal_amplitudes(const TransitionMomentSet& moments);

/// Target state at t_f with optimal amplitudes and phases solving the phase
/// conditions for k = 0.
TargetState optimal_target_state(const CavitySpec& cavity, double t_f);

/// Interaction-picture coefficients evolved freely to time t and contracted
/// with the transition moments.
double orientation_of_superposition(const TargetState& state, const TransitionMomentSet& moments,
                                    double t);
double orientation_of_superposition(const TargetState& state, double t);

struct BruteForceOptions {
  int restarts = 20;
  std::uint64_t seed = 20240917;
  int grid_points_per_phase = 8;
  Execution execution = Execution::Parallel;
};

struct BruteForceResult {
  double value = 0.0;
  TargetState state;
  bool converged = true;
  double restart_spread = 0.0;  // |best - second best| over distinct restarts
  std::uint64_t seed = 0;
};

// Independent maximizer of the four-level orientation: multi-start simplex
// ascent over four unnormalized amplitudes and three relative phases,
// seeded from a coarse phase grid plus random restarts.
BruteForceResult brute_force_max_orientation(const TransitionMomentSet& moments,
                                             const BruteForceOptions& options = {});

}  // namespace polariton
