#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polariton/orientation.hpp"
#include "polariton/rotor_cavity.hpp"

namespace polariton {

enum class Transition {
  PlusGround,   // |0;0> -> |+;0>          (theta_{+,0})
  MinusGround,  // |0;0> -> |-;0>          (theta_{-,0})
  DirectPlus,   // |+;0> -> |2;0>          (theta_1, Fundamental)
  OneGround,    // |0;0> -> |1;0>          (theta_0, SecondHarmonic)
  PlusOne,      // |1;0> -> |+;0>          (theta_{+,1})
  MinusOne,     // |1;0> -> |-;0>          (theta_{-,1})
};

std::string to_string(Transition transition);
Transition transition_from_string(const std::string& name);

/// The three transitions driven in each scheme, in pulse order.
std::vector<Transition> scheme_transitions(CavityConfig config);

// How the dipole sign of the lower doublet branch enters a four-state drive.
// Physical: the sign follows <-;0|cos(theta)|.> (negative). Uniform: both
// branches are driven with the same positive dipole while the orientation
// still uses the physical moments.
enum class BranchSign { Physical, Uniform };

std::string to_string(BranchSign sign);

struct TransitionInfo {
  Transition transition{};
  LevelLabel lower;
  LevelLabel upper;
  double frequency = 0.0;  // units of B
  double dipole = 0.0;     // |<upper|cos(theta)|lower>|
  double sign = 1.0;       // sign of that matrix element
};

TransitionInfo transition_info(Transition transition, const CavitySpec& cavity);

struct PulseAreaSet {
  CavityConfig config = CavityConfig::Fundamental;
  std::map<Transition, std::complex<double>> areas;

  /// theta_0 = sqrt(|theta_+0|^2 + |theta_-0|^2) (Fundamental) or
  /// theta_1 = sqrt(|theta_+1|^2 + |theta_-1|^2) (SecondHarmonic).
  double composite() const;
};

PulseAreaSet required_areas(CavityConfig config);

struct GaussianPulse {
  Transition transition{};
  double peak_rabi = 0.0;  // units of B: dipole * field at the peak
  double center = 0.0;     // internal time
  double width = 1.0;      // tau = 1 / bandwidth
  double carrier_frequency = 1.0;
  double carrier_phase = 0.0;
  double dipole = 1.0;  // |transition moment|, used to recover the bare field

  double envelope(double t) const;
  double rabi(double t) const;
  /// mu * E(t) in units of B (the field with the transition moment divided out).
  double field(double t) const { return rabi(t) / dipole; }
};

struct PulseTrain {
  CavityConfig config = CavityConfig::Fundamental;
  std::vector<GaussianPulse> pulses;

  void validate() const;
  const GaussianPulse& pulse(Transition transition) const;
  double last_center() const;
  double max_width() const;
};

using PhaseMap = std::map<Transition, double>;
using DelayMap = std::map<Transition, double>;

/// Center times used for the reproduced figures (internal time units).
DelayMap default_delays(CavityConfig config);

/// First revival multiple 10 tau0 * m at or after `t_min`.
double canonical_target_time(double t_min);

// Carrier phases such that the propagated interaction-picture coefficients
// carry the target phases: phi_c = omega * tau_c + pi/2 + arg(sign) - phi_target,
// reduced to [0, 2 pi).
PhaseMap carrier_phases(const CavitySpec& cavity, const TargetState& target, const DelayMap& delays);

/// Gaussian synthesis: peak Rabi sqrt(2/pi) * bandwidth * |theta|, width 1/bandwidth.
PulseTrain synthesize(const PulseAreaSet& areas, const PhaseMap& phases, double bandwidth,
                      const DelayMap& delays, const CavitySpec& cavity);

/// Designed train for the scheme: required areas, optimal target at the
/// canonical revival time, carrier phases from the mapping above.
PulseTrain design_train(const CavitySpec& cavity, double bandwidth,
                        const DelayMap& delays);

/// Sum over pulses of the Rabi waveforms.
double field_value(const PulseTrain& train, double t);
/// Sum over pulses of mu * E(t); this is what multiplies cos(theta).
double electric_field(const PulseTrain& train, double t);

struct ComplexArea {
  std::complex<double> value;
  double clipped_mass = 0.0;  // Gaussian mass outside [t0, t1]
  std::optional<std::string> warning;
};

// theta = sign * integral_{t0}^{t1} Omega(t) exp(-i omega t) dt for the pulse
// driving `transition`, by adaptive Simpson (absolute tolerance 1e-10).
// With this kernel the first-order Magnus coefficients take the conjugate
// form i theta^* sin|theta| / |theta|.
ComplexArea numeric_complex_area(const PulseTrain& train, Transition transition, double omega,
                                 double t0, double t1, double sign = 1.0);

/// Area over +-6 widths around the pulse at its own transition frequency and sign.
ComplexArea pulse_area(const PulseTrain& train, Transition transition, const CavitySpec& cavity,
                       BranchSign branch = BranchSign::Physical);

// Frequency-weighted phase relations between the complex areas, evaluated as
// residuals modulo 2 g pi. Diagnostic only; design uses the target phases.
std::vector<double> phase_condition_residuals(const CavitySpec& cavity,
                                              const std::map<Transition, std::complex<double>>& areas);

}  // namespace polariton
