#pragma once

#include <array>
#include <complex>

#include "polariton/orientation.hpp"
#include "polariton/pulse.hpp"

namespace polariton {

struct FourStateAmplitudes {
  CavityConfig config = CavityConfig::Fundamental;
  std::array<LevelLabel, 4> levels{};
  std::array<std::complex<double>, 4> coefficients{};

  double norm() const;
  std::complex<double> operator[](const LevelLabel& label) const;
};

// First-order Magnus wavefunctions of the V2 and 2V schemes. Areas follow
// the exp(-i omega t) kernel of numeric_complex_area, so the coefficients
// carry conjugated areas. Below |theta| < 1e-8 sin(x)/x is replaced by its
// series.
FourStateAmplitudes magnus_state_fundamental(std::complex<double> theta_plus0,
                                             std::complex<double> theta_minus0,
                                             std::complex<double> theta_1);
FourStateAmplitudes magnus_state_second_harmonic(std::complex<double> theta_0,
                                                 std::complex<double> theta_plus1,
                                                 std::complex<double> theta_minus1);

/// Areas integrated from the train, then the scheme's Magnus state.
FourStateAmplitudes magnus_state(const PulseTrain& train, const CavitySpec& cavity,
                                 BranchSign branch = BranchSign::Physical);

/// Orientation of four-level interaction-picture amplitudes after free
/// evolution to time t (t measured on the same clock as the areas).
double free_orientation(const FourStateAmplitudes& state, const CavitySpec& cavity, double t);

struct TrainVerdict {
  double predicted_max = 0.0;  // max over one revival period
  double time_of_max = 0.0;
  bool optimal = false;        // within `tolerance` of sqrt(3/5)
};

// Verifier for a pulse train: Magnus amplitudes followed by free evolution
// over one revival period (10 tau0) after the last pulse.
TrainVerdict verify_train(const PulseTrain& train, const CavitySpec& cavity,
                          BranchSign branch = BranchSign::Physical, double tolerance = 2e-3);

}  // namespace polariton
