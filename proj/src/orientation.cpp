#include "polariton/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <gsl/gsl_multimin.h>

namespace polariton {

std::array<LevelLabel, 4> target_levels(CavityConfig config) {
  if (config == CavityConfig::Fundamental)
    return {LevelLabel::ground(), LevelLabel::minus(0), LevelLabel::plus(0), LevelLabel::direct(2, 0)};
  return {LevelLabel::ground(), LevelLabel::direct(1, 0), LevelLabel::plus(0), LevelLabel::minus(0)};
}

double TransitionMomentSet::get(const LevelLabel& a, const LevelLabel& b) const {
  for (const auto& m : moments)
    if ((m.upper == a && m.lower == b) || (m.upper == b && m.lower == a)) return m.value;
  return 0.0;
}

double TransitionMomentSet::norm() const {
  double s = 0.0;
  for (const auto& m : moments) s += m.value * m.value;
  return std::sqrt(s);
}

TransitionMomentSet transition_moments(CavityConfig config) {
  // coefficients do not depend on g
  const CavitySpec cavity{config, 0.2};
  const int n_max = 2;
  const auto levels = dressed_levels_analytic(cavity, n_max);
  const Eigen::MatrixXd c = cos_theta_product(ProductBasis(n_max));

  TransitionMomentSet set;
  set.config = config;
  set.levels = target_levels(config);
  for (int i = 0; i < 4; ++i)
    for (int k = i + 1; k < 4; ++k) {
      const auto& lower = find_level(levels, set.levels[i]);
      const auto& upper = find_level(levels, set.levels[k]);
      const double v = upper.coefficients.dot(c * lower.coefficients);
      if (std::abs(v) > 1e-12) set.moments.push_back({upper.label, lower.label, v});
    }
  return set;
}

namespace {

Eigen::Matrix4d moment_matrix(const TransitionMomentSet& moments) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      if (i != k) m(i, k) = moments.get(moments.levels[i], moments.levels[k]);
  return m;
}

int level_index(const std::array<LevelLabel, 4>& levels, const LevelLabel& label) {
  for (int i = 0; i < 4; ++i)
    if (levels[i] == label) return i;
  throw std::out_of_range("level " + label.name() + " not in the four-level model");
}

std::array<double, 4> level_energies(const CavitySpec& cavity, const std::array<LevelLabel, 4>& labels) {
  const auto levels = dressed_levels_analytic(cavity, 2);
  std::array<double, 4> e{};
  for (int i = 0; i < 4; ++i) e[i] = find_level(levels, labels[i]).energy;
  return e;
}

}  // namespace

double wrap_phase(double phase) {
  double r = std::fmod(phase, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

std::array<std::complex<double>, 4> TargetState::coefficients() const {
  std::array<std::complex<double>, 4> c{};
  for (int i = 0; i < 4; ++i) c[i] = std::polar(amplitudes[i], phases[i]);
  return c;
}

std::map<std::string, double> TargetState::relative_phases() const {
  std::map<std::string, double> r;
  const auto& p = phases;
  if (config == CavityConfig::Fundamental) {
    // order: 0;0, -;0, +;0, 2;0
    r["phi_+0"] = wrap_phase(p[2] - p[0]);
    r["phi_-0"] = wrap_phase(p[1] - p[0]);
    r["phi_2+"] = wrap_phase(p[3] - p[2]);
    r["phi_2-"] = wrap_phase(p[3] - p[1]);
  } else {
    // order: 0;0, 1;0, +;0, -;0
    r["phi_10"] = wrap_phase(p[1] - p[0]);
    r["phi_1+"] = wrap_phase(p[2] - p[1]);
    r["phi_1-"] = wrap_phase(p[3] - p[1]);
  }
  return r;
}

std::pair<std::array<double, 4>, double> optimal_amplitudes(const TransitionMomentSet& moments) {
  const Eigen::Matrix4d m = moment_matrix(moments).cwiseAbs();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(m);
  const Eigen::Vector4d top = solver.eigenvectors().col(3);
  std::array<double, 4> a{};
  for (int i = 0; i < 4; ++i) a[i] = std::abs(top(i));
  return {a, solver.eigenvalues()(3)};
}

TargetState optimal_target_state(const CavitySpec& cavity, double t_f) {
  if (t_f < 0.0) throw std::invalid_argument("target time must be >= 0");
  const auto moments = transition_moments(cavity.configuration);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(moment_matrix(moments));
  Eigen::Vector4d top = solver.eigenvectors().col(3);
  if (top(0) < 0.0) top = -top;

  TargetState s;
  s.config = cavity.configuration;
  s.levels = moments.levels;
  s.energies = level_energies(cavity, s.levels);
  s.t_f = t_f;
  const auto [amplitudes, lambda] = optimal_amplitudes(moments);
  (void)lambda;
  s.amplitudes = amplitudes;
  // interaction-picture phases: phi_l = E_l t_f (+ pi where the eigenvector is negative)
  for (int i = 0; i < 4; ++i) s.phases[i] = wrap_phase(s.energies[i] * t_f + (top(i) < 0.0 ? kPi : 0.0));
  return s;
}

double orientation_of_superposition(const TargetState& state, const TransitionMomentSet& moments,
                                    double t) {
  double value = 0.0;
  for (const auto& m : moments.moments) {
    const int u = level_index(state.levels, m.upper);
    const int l = level_index(state.levels, m.lower);
    const double w = state.energies[u] - state.energies[l];
    value += 2.0 * state.amplitudes[u] * state.amplitudes[l] * m.value *
             std::cos(state.phases[u] - state.phases[l] - w * t);
  }
  return value;
}

double orientation_of_superposition(const TargetState& state, double t) {
  return orientation_of_superposition(state, transition_moments(state.config), t);
}

namespace {

struct Objective {
  Eigen::Matrix4d m;
};

// x = (a0, a1, a2, a3, p1, p2, p3); value = psi^dagger M psi / psi^dagger psi at t = 0
double quadratic_form(const double* x, const Eigen::Matrix4d& m) {
  std::array<std::complex<double>, 4> c{};
  c[0] = x[0];
  for (int i = 1; i < 4; ++i) c[i] = x[i] * std::exp(std::complex<double>(0.0, x[3 + i]));
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < 4; ++i) {
    den += std::norm(c[i]);
    for (int k = 0; k < 4; ++k) num += m(i, k) * std::real(std::conj(c[i]) * c[k]);
  }
  return den > 0.0 ? num / den : 0.0;
}

double gsl_objective(const gsl_vector* v, void* params) {
  const auto* obj = static_cast<const Objective*>(params);
  return -quadratic_form(v->data, obj->m);
}

using Point = std::array<double, 7>;

struct Ascent {
  Point x{};
  double value = 0.0;
};

Ascent simplex_ascent(const Objective& objective, Point start) {
  gsl_multimin_function f{&gsl_objective, 7, const_cast<Objective*>(&objective)};
  gsl_vector* x = gsl_vector_alloc(7);
  gsl_vector* step = gsl_vector_alloc(7);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 7);
  Ascent out;
  // restarting the simplex a few times shakes it out of degenerate collapses
  for (int round = 0; round < 4; ++round) {
    for (int i = 0; i < 7; ++i) {
      gsl_vector_set(x, i, start[i]);
      gsl_vector_set(step, i, round == 0 ? 0.3 : 0.05);
    }
    gsl_multimin_fminimizer_set(s, &f, x, step);
    for (int iter = 0; iter < 20000; ++iter) {
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
    }
    for (int i = 0; i < 7; ++i) start[i] = gsl_vector_get(s->x, i);
  }
  out.x = start;
  out.value = -s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return out;
}

}  // namespace

BruteForceResult brute_force_max_orientation(const TransitionMomentSet& moments,
                                             const BruteForceOptions& options) {
  if (options.restarts < 2) throw std::invalid_argument("brute force needs at least two restarts");
  const Objective objective{moment_matrix(moments)};

  // Coarse grid over the three phases at equal amplitudes; its best point
  // joins the random starts.
  const int g = std::max(options.grid_points_per_phase, 1);
  Point grid_best{};
  double grid_value = -1e300;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      for (int k = 0; k < g; ++k) {
        const Point p{0.5, 0.5, 0.5, 0.5, 2 * kPi * i / g, 2 * kPi * j / g, 2 * kPi * k / g};
        const double v = quadratic_form(p.data(), objective.m);
        if (v > grid_value) {
          grid_value = v;
          grid_best = p;
        }
      }

  std::vector<Point> starts{grid_best};
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> amp(0.05, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (int r = 0; r < options.restarts; ++r) {
    Point p{};
    for (int i = 0; i < 4; ++i) p[i] = amp(rng);
    for (int i = 4; i < 7; ++i) p[i] = phase(rng);
    starts.push_back(p);
  }

  std::vector<Ascent> results(starts.size());
  for_each_index(starts.size(), options.execution,
                 [&](std::size_t i) { results[i] = simplex_ascent(objective, starts[i]); });

  // best value, then lowest restart index
  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return results[a].value > results[b].value; });
  const Ascent& best = results[order[0]];

  BruteForceResult out;
  out.value = best.value;
  out.seed = options.seed;
  out.restart_spread = best.value - results[order[1]].value;
  out.converged = out.restart_spread <= 1e-8;

  TargetState& s = out.state;
  s.config = moments.config;
  s.levels = moments.levels;
  s.energies = {0.0, 0.0, 0.0, 0.0};
  double norm = 0.0;
  for (int i = 0; i < 4; ++i) norm += best.x[i] * best.x[i];
  norm = std::sqrt(norm);
  std::array<double, 4> raw_phase{0.0, best.x[4], best.x[5], best.x[6]};
  for (int i = 0; i < 4; ++i) {
    s.amplitudes[i] = std::abs(best.x[i]) / norm;
    raw_phase[i] += best.x[i] < 0.0 ? kPi : 0.0;
  }
  for (int i = 0; i < 4; ++i) s.phases[i] = wrap_phase(raw_phase[i] - raw_phase[0]);
  return out;
}

}  // namespace polariton
