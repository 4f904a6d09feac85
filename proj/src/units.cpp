#include "polariton/units.hpp"

#include <cmath>
#include <stdexcept>

namespace polariton {

double units::wavenumber_to_angular_frequency(double wavenumber_cm1) {
  return wavenumber_cm1 * kWavenumberToRadPerPs;
}

void MoleculeSpec::validate() const {
  if (!(rotational_constant_cm1 > 0.0) || !std::isfinite(rotational_constant_cm1))
    throw std::invalid_argument("rotational constant B must be positive");
  if (!(dipole_debye > 0.0) || !std::isfinite(dipole_debye))
    throw std::invalid_argument("dipole moment must be positive");
}

double MoleculeSpec::b_rad_per_ps() const {
  return units::wavenumber_to_angular_frequency(rotational_constant_cm1);
}

std::string to_string(CavityConfig config) {
  return config == CavityConfig::Fundamental ? "fundamental" : "second_harmonic";
}

CavityConfig cavity_config_from_string(const std::string& name) {
  if (name == "fundamental" || name == "Fundamental") return CavityConfig::Fundamental;
  if (name == "second_harmonic" || name == "SecondHarmonic") return CavityConfig::SecondHarmonic;
  throw std::invalid_argument("unknown cavity configuration '" + name + "'");
}

void CavitySpec::validate() const {
  if (!(coupling_g > 0.0) || !std::isfinite(coupling_g))
    throw std::invalid_argument("cavity coupling g must be positive");
}

double internal_time_to_ps(double t_internal, const MoleculeSpec& molecule) {
  molecule.validate();
  return t_internal / molecule.b_rad_per_ps();
}

double ps_to_internal_time(double t_ps, const MoleculeSpec& molecule) {
  molecule.validate();
  return t_ps * molecule.b_rad_per_ps();
}

double rotational_period_ps(const MoleculeSpec& molecule) {
  return internal_time_to_ps(kRotationalPeriod, molecule);
}

double rabi_to_field_kv_per_cm(double rabi_over_b, const MoleculeSpec& molecule) {
  molecule.validate();
  const double energy_j = rabi_over_b * molecule.rotational_constant_cm1 * units::kPlanckTimesC_JoulesCm;
  const double volts_per_m = energy_j / (molecule.dipole_debye * units::kDebyeToCoulombMeter);
  return volts_per_m * 1e-5;
}

}  // namespace polariton
