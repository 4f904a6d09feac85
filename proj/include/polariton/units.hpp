#pragma once

// Internal unit system: hbar = 1, energies in units of the rotational
// constant B, times in units of 1/B. One rotational period tau0 = pi/B is
// therefore pi in internal time. Physical units appear only at I/O.

#include <numbers>
#include <string>

namespace polariton {

inline constexpr double kPi = std::numbers::pi;

/// Rotational period tau0 = pi / B expressed in internal time units.
inline constexpr double kRotationalPeriod = kPi;

namespace units {

inline constexpr double kSpeedOfLightCmPerPs = 2.99792458e-2;
// 2 pi c, rad/ps per cm^-1
inline constexpr double kWavenumberToRadPerPs = 2.0 * kPi * kSpeedOfLightCmPerPs;
inline constexpr double kPlanckTimesC_JoulesCm = 1.98644586e-23;
inline constexpr double kDebyeToCoulombMeter = 3.33564e-30;

double wavenumber_to_angular_frequency(double wavenumber_cm1);

}  // namespace units

struct MoleculeSpec {
  double rotational_constant_cm1 = 0.20286;
  double dipole_debye = 0.715;

  static MoleculeSpec ocs() { return {}; }
  void validate() const;
  /// B as an angular frequency in rad/ps.
  double b_rad_per_ps() const;
};

enum class CavityConfig { Fundamental, SecondHarmonic };

std::string to_string(CavityConfig config);
CavityConfig cavity_config_from_string(const std::string& name);

struct CavitySpec {
  CavityConfig configuration = CavityConfig::Fundamental;
  // g1 or g2 in units of B; already includes the rotational dipole matrix
  // element of the resonant pair.
  double coupling_g = 0.2;

  /// omega_c in units of B: 2 for the fundamental cavity, 4 for the second harmonic.
  double frequency() const { return configuration == CavityConfig::Fundamental ? 2.0 : 4.0; }
  void validate() const;
};

double internal_time_to_ps(double t_internal, const MoleculeSpec& molecule);
double ps_to_internal_time(double t_ps, const MoleculeSpec& molecule);
double rotational_period_ps(const MoleculeSpec& molecule);

// Output-side conversion of a Rabi coupling mu*E (units of B) into a field
// strength in kV/cm using the permanent dipole of the molecule.
double rabi_to_field_kv_per_cm(double rabi_over_b, const MoleculeSpec& molecule);

}  // namespace polariton
