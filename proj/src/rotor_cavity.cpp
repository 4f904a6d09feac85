#include "polariton/rotor_cavity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace polariton {

namespace {

const double kHalfSqrt2 = std::sqrt(0.5);

double cos_element(int j) {
  // <J|cos|J+1> for M = 0
  return (j + 1.0) / std::sqrt((2.0 * j + 1.0) * (2.0 * j + 3.0));
}

}  // namespace

ProductBasis::ProductBasis(int n_max, int j_max) : j_max_(j_max), n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("photon cutoff n_max must be >= 1");
  if (j_max < 1) throw std::invalid_argument("j_max must be >= 1");
}

int ProductBasis::index(int j, int n) const {
  if (j < 0 || j > j_max_ || n < 0 || n > n_max_)
    throw std::out_of_range("product state outside the truncated basis");
  return j * (n_max_ + 1) + n;
}

std::pair<int, int> ProductBasis::state(int index) const {
  if (index < 0 || index >= dimension()) throw std::out_of_range("basis index out of range");
  return {index / (n_max_ + 1), index % (n_max_ + 1)};
}

Eigen::MatrixXd cos_theta_matrix(int j_max) {
  if (j_max < 1) throw std::invalid_argument("j_max must be >= 1");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(j_max + 1, j_max + 1);
  for (int j = 0; j < j_max; ++j) c(j, j + 1) = c(j + 1, j) = cos_element(j);
  return c;
}

Eigen::MatrixXd cos_theta_product(const ProductBasis& basis) {
  const Eigen::MatrixXd rotor = cos_theta_matrix(basis.j_max());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(basis.dimension(), basis.dimension());
  for (int j = 0; j <= basis.j_max(); ++j)
    for (int k = 0; k <= basis.j_max(); ++k) {
      if (rotor(j, k) == 0.0) continue;
      for (int n = 0; n <= basis.n_max(); ++n) c(basis.index(j, n), basis.index(k, n)) = rotor(j, k);
    }
  return c;
}

Eigen::MatrixXd bare_hamiltonian(const CavitySpec& cavity, const ProductBasis& basis,
                                 CouplingForm form) {
  cavity.validate();
  const int dim = basis.dimension();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double wc = cavity.frequency();
  for (int j = 0; j <= basis.j_max(); ++j)
    for (int n = 0; n <= basis.n_max(); ++n) h(basis.index(j, n), basis.index(j, n)) = j * (j + 1.0) + wc * n;

  // g is quoted per resonant pair, so g0*mu = g / <J|cos|J+1> of that pair.
  const int resonant_j = cavity.configuration == CavityConfig::Fundamental ? 0 : 1;
  const double g0mu = cavity.coupling_g / cos_element(resonant_j);

  for (int j = 0; j < basis.j_max(); ++j) {
    const double c = cos_element(j);
    for (int n = 0; n <= basis.n_max(); ++n)
      for (int m = 0; m <= basis.n_max(); ++m) {
        if (std::abs(n - m) != 1) continue;
        if (form == CouplingForm::RotatingWave) {
          // the Jaynes-Cummings exchange of the resonant pair: |J, n+1> <-> |J+1, n>
          if (j != resonant_j || n != m + 1) continue;
        }
        const double v = g0mu * c * std::sqrt(static_cast<double>(std::max(n, m)));
        h(basis.index(j, n), basis.index(j + 1, m)) += v;
        h(basis.index(j + 1, m), basis.index(j, n)) += v;
      }
  }
  return h;
}

std::string LevelLabel::name() const {
  switch (kind) {
    case Kind::Ground: return "0;0";
    case Kind::Plus: return "+;" + std::to_string(n);
    case Kind::Minus: return "-;" + std::to_string(n);
    case Kind::Direct: return std::to_string(j) + ";" + std::to_string(n);
  }
  return "?";
}

std::vector<DressedLevel> dressed_levels_analytic(const CavitySpec& cavity, int n_max) {
  cavity.validate();
  const ProductBasis basis(n_max);
  const int dim = basis.dimension();
  const double g = cavity.coupling_g;
  std::vector<DressedLevel> levels;

  auto unit = [&](int j, int n) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v(basis.index(j, n)) = 1.0;
    return v;
  };
  auto doublet = [&](int j, int n, double sign) {
    // sqrt(2)/2 (|J, n+1> +- |J+1, n>)
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v(basis.index(j, n + 1)) = kHalfSqrt2;
    v(basis.index(j + 1, n)) = sign * kHalfSqrt2;
    return v;
  };

  levels.push_back({LevelLabel::ground(), 0.0, unit(0, 0)});
  if (cavity.configuration == CavityConfig::Fundamental) {
    for (int n = 0; n < n_max; ++n) {
      const double centre = 2.0 * (n + 1);
      const double split = g * std::sqrt(n + 1.0);
      levels.push_back({LevelLabel::minus(n), centre - split, doublet(0, n, -1.0)});
      levels.push_back({LevelLabel::plus(n), centre + split, doublet(0, n, 1.0)});
    }
    for (int n = 0; n <= n_max; ++n) levels.push_back({LevelLabel::direct(2, n), 6.0 + 2.0 * n, unit(2, n)});
    levels.push_back({LevelLabel::direct(1, n_max), 2.0 + 2.0 * n_max, unit(1, n_max)});
  } else {
    for (int n = 1; n <= n_max; ++n) levels.push_back({LevelLabel::direct(0, n), 4.0 * n, unit(0, n)});
    levels.push_back({LevelLabel::direct(1, 0), 2.0, unit(1, 0)});
    for (int n = 0; n < n_max; ++n) {
      const double centre = 4.0 * n + 6.0;
      const double split = g * std::sqrt(n + 1.0);
      levels.push_back({LevelLabel::minus(n), centre - split, doublet(1, n, -1.0)});
      levels.push_back({LevelLabel::plus(n), centre + split, doublet(1, n, 1.0)});
    }
    levels.push_back({LevelLabel::direct(2, n_max), 6.0 + 4.0 * n_max, unit(2, n_max)});
  }
  return levels;
}

const DressedLevel& find_level(const std::vector<DressedLevel>& levels, const LevelLabel& label) {
  const auto it = std::find_if(levels.begin(), levels.end(),
                               [&](const DressedLevel& l) { return l.label == label; });
  if (it == levels.end()) throw std::out_of_range("dressed level " + label.name() + " not in list");
  return *it;
}

NumericDressedLevels dressed_levels_numeric(const CavitySpec& cavity, int n_max, CouplingForm form) {
  if (n_max < 2) throw std::invalid_argument("numeric dressed levels need n_max >= 2");
  const ProductBasis basis(n_max);
  const auto analytic = dressed_levels_analytic(cavity, n_max);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(bare_hamiltonian(cavity, basis, form));
  const Eigen::VectorXd& energies = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const int dim = basis.dimension();

  // (overlap desc, eigen index asc) so ties go to the lower eigenvalue
  std::vector<std::tuple<double, int, int>> pairs;
  for (int a = 0; a < dim; ++a)
    for (int e = 0; e < dim; ++e)
      pairs.emplace_back(std::abs(analytic[a].coefficients.dot(vectors.col(e))), e, a);
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
    return std::get<2>(x) < std::get<2>(y);
  });

  std::vector<int> eigen_of(dim, -1);
  std::vector<bool> taken(dim, false);
  for (const auto& [overlap, e, a] : pairs) {
    if (eigen_of[a] >= 0 || taken[e]) continue;
    eigen_of[a] = e;
    taken[e] = true;
  }

  NumericDressedLevels out;
  for (int a = 0; a < dim; ++a) {
    const int e = eigen_of[a];
    Eigen::VectorXd v = vectors.col(e);
    double overlap = analytic[a].coefficients.dot(v);
    if (overlap < 0.0) {
      v = -v;
      overlap = -overlap;
    }
    if (overlap < 0.9) out.warnings.push_back({analytic[a].label, overlap});
    out.levels.push_back({analytic[a].label, energies(e), v});
  }
  return out;
}

}  // namespace polariton
