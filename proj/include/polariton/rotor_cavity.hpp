#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polariton/units.hpp"

namespace polariton {

// |J, M=0> (x) |n> with J in [0, j_max] and n in [0, n_max]; flat index J*(n_max+1)+n.
class ProductBasis {
 public:
  explicit ProductBasis(int n_max, int j_max = 2);

  int j_max() const { return j_max_; }
  int n_max() const { return n_max_; }
  int dimension() const { return (j_max_ + 1) * (n_max_ + 1); }
  int index(int j, int n) const;
  std::pair<int, int> state(int index) const;

 private:
  int j_max_;
  int n_max_;
};

/// <J|cos(theta)|J'> for M = 0, truncated to J <= j_max.
Eigen::MatrixXd cos_theta_matrix(int j_max);

/// cos(theta) (x) 1_photon on the product basis.
Eigen::MatrixXd cos_theta_product(const ProductBasis& basis);

enum class CouplingForm {
  RotatingWave,  // resonant Jaynes-Cummings exchange only
  Full,          // every dipole-allowed term of cos(theta)(a + a^dagger)
};

// Rotor + cavity Hamiltonian in units of B. The cavity term is written as
// +g0 mu cos(theta)(a + a^dagger), i.e. with the photon phase convention
// |n> -> (-1)^n |n>, so that the symmetric doublet combination is the upper
// (+) level. g0 mu is fixed by the configuration: the resonant pair element
// equals g sqrt(n+1).
Eigen::MatrixXd bare_hamiltonian(const CavitySpec& cavity, const ProductBasis& basis,
                                 CouplingForm form = CouplingForm::RotatingWave);

struct LevelLabel {
  enum class Kind { Ground, Plus, Minus, Direct };

  Kind kind = Kind::Ground;
  int j = 0;
  int n = 0;

  static LevelLabel ground() { return {Kind::Ground, 0, 0}; }
  static LevelLabel plus(int n) { return {Kind::Plus, -1, n}; }
  static LevelLabel minus(int n) { return {Kind::Minus, -1, n}; }
  static LevelLabel direct(int j, int n) { return {Kind::Direct, j, n}; }

  /// Ket-style name without brackets: "0;0", "+;1", "2;0".
  std::string name() const;

  auto operator<=>(const LevelLabel&) const = default;
};

struct DressedLevel {
  LevelLabel label;
  double energy = 0.0;
  Eigen::VectorXd coefficients;  // over the ProductBasis
};

/// Analytic Jaynes-Cummings levels. The list spans the truncated basis,
/// including the unpaired edge state at the photon cutoff.
std::vector<DressedLevel> dressed_levels_analytic(const CavitySpec& cavity, int n_max);

const DressedLevel& find_level(const std::vector<DressedLevel>& levels, const LevelLabel& label);

struct LevelMatchWarning {
  LevelLabel label;
  double overlap = 0.0;
};

struct NumericDressedLevels {
  std::vector<DressedLevel> levels;  // labeled, same order as the analytic list
  std::vector<LevelMatchWarning> warnings;
};

// Direct diagonalization of the bare Hamiltonian; eigenvectors are assigned
// to analytic labels by maximal overlap (ties go to the lower energy) and
// their sign is fixed to make the overlap positive.
NumericDressedLevels dressed_levels_numeric(const CavitySpec& cavity, int n_max,
                                            CouplingForm form = CouplingForm::RotatingWave);

}  // namespace polariton
