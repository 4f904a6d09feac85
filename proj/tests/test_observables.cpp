#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "polariton/observables.hpp"
#include "polariton/workbench.hpp"

using namespace polariton;
using Complex = std::complex<double>;
using testing::circular_distance;
using testing::kMaxOrientation;

namespace {

const CavitySpec kFund{CavityConfig::Fundamental, 0.2};
const CavitySpec kSecond{CavityConfig::SecondHarmonic, 0.2};

// Product-basis state of a four-level target at its target time.
StateVector product_state(const TargetState& target, int n_max) {
  const auto levels = dressed_levels_analytic({target.config, 0.2}, n_max);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ProductBasis(n_max).dimension());
  for (int i = 0; i < 4; ++i) {
    const Complex c = std::polar(target.amplitudes[i], target.phases[i] - target.energies[i] * target.t_f);
    psi += c * find_level(levels, target.levels[i]).coefficients.cast<Complex>();
  }
  return {psi, target.t_f};
}

OrientationSeries synthetic(double omega, double amplitude, double t_end, double dt = 0.05) {
  OrientationSeries s;
  for (double t = 0.0; t <= t_end; t += dt) {
    s.times.push_back(t);
    s.values.push_back(amplitude * std::cos(omega * t));
  }
  return s;
}

PulseTrain zero_train(const CavitySpec& cav) {
  PulseAreaSet a;
  a.config = cav.configuration;
  PhaseMap p;
  for (Transition t : scheme_transitions(cav.configuration)) a.areas[t] = p[t] = 0.0;
  return synthesize(a, p, 0.02, default_delays(cav.configuration), cav);
}

}  // namespace

TEST_CASE("orientation of simple product states") {
  const ProductBasis basis(3);
  const Eigen::MatrixXd c = cos_theta_product(basis);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(basis.dimension());
  g(basis.index(0, 0)) = 1.0;
  CHECK(orientation(g, c) == 0.0);

  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(basis.dimension());
  s(basis.index(0, 0)) = s(basis.index(1, 0)) = 1.0 / std::sqrt(2.0);
  CHECK(orientation(s, c) == doctest::Approx(0.577350).epsilon(1e-6));
  CHECK(std::abs(orientation(s, c) - 1.0 / std::sqrt(3.0)) <= 1e-15);

  CHECK_THROWS_AS(orientation(Eigen::VectorXcd::Zero(3), c), ObservableError);
}

TEST_CASE("orientation of the optimal target state") {
  for (const auto& cav : {kFund, kSecond}) {
    const auto target = optimal_target_state(cav, 230.0 * kPi);
    const auto psi = product_state(target, 3);
    CHECK(std::abs(psi.amplitudes.norm() - 1.0) <= 1e-12);
    CHECK(orientation(psi.amplitudes, cos_theta_product(ProductBasis(3))) == doctest::Approx(0.774597).epsilon(1e-6));
  }
}

TEST_CASE("orientation does not depend on the basis") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (const auto& cav : {kFund, kSecond}) {
    const CompiledDrive four({DriveKind::PerTransition, cav}, zero_train(cav));
    const auto levels = dressed_levels_analytic(cav, 3);
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXcd c(4);
      for (int i = 0; i < 4; ++i) c(i) = Complex(gauss(rng), gauss(rng));
      c.normalize();
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ProductBasis(3).dimension());
      for (int i = 0; i < 4; ++i) psi += c(i) * find_level(levels, four.levels()[i].label).coefficients.cast<Complex>();
      CHECK(std::abs(orientation(psi, cos_theta_product(ProductBasis(3))) - orientation(c, four.cos_theta())) <= 1e-12);
    }
  }
}

TEST_CASE("dressed populations") {
  const ProductBasis basis(3);
  const auto levels = dressed_levels_analytic(kFund, 3);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(basis.dimension());
  g(0) = 1.0;
  const auto r = dressed_populations({g, 0.0}, levels, {LevelLabel::ground()});
  CHECK(r[LevelLabel::ground()] == 1.0);
  CHECK_THROWS_AS(r[LevelLabel::plus(0)], ObservableError);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  for (const auto& cav : {kFund, kSecond}) {
    const auto all = dressed_levels_analytic(cav, 3);
    std::vector<LevelLabel> labels;
    for (const auto& l : all) labels.push_back(l.label);
    for (int k = 0; k < 50; ++k) {
      Eigen::VectorXcd psi(basis.dimension());
      for (int i = 0; i < psi.size(); ++i) psi(i) = Complex(gauss(rng), gauss(rng));
      psi.normalize();
      CHECK(std::abs(dressed_populations({psi, 1.0}, all, labels).total() - 1.0) <= 1e-9);
      CHECK(dressed_populations({psi, 1.0}, all, {labels[0], labels[3]}).total() <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("coefficient phases") {
  const auto levels = dressed_levels_analytic(kFund, 3);
  const std::vector<LevelLabel> four{LevelLabel::plus(0), LevelLabel::minus(0), LevelLabel::direct(2, 0)};

  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(12);
  g(0) = 1.0;
  const auto ground_only = coefficient_phases({g, 17.0}, levels, {LevelLabel::ground()});
  CHECK(ground_only.phases.empty());
  CHECK(ground_only.undefined.empty());
  const auto stationary = coefficient_phases({g, 17.0}, levels, four);
  CHECK(stationary.phases.empty());
  CHECK(stationary.undefined.size() == 3);

  const auto target = optimal_target_state(kFund, 230.0 * kPi);
  const auto psi = product_state(target, 3);
  const auto r = coefficient_phases(psi, levels, four);
  REQUIRE(r.phases.size() == 3);
  CHECK(circular_distance(r.phases.at(LevelLabel::plus(0)), 0.0) <= 0.05);
  CHECK(circular_distance(r.phases.at(LevelLabel::minus(0)), kPi) <= 0.05);
  CHECK(circular_distance(r.phases.at(LevelLabel::direct(2, 0)), 0.0) <= 0.05);

  for (double alpha : {0.4, 2.0, -1.3}) {
    const StateVector shifted{psi.amplitudes * std::polar(1.0, alpha), psi.time};
    const auto s = coefficient_phases(shifted, levels, four);
    for (const auto& [label, phase] : r.phases) CHECK(circular_distance(s.phases.at(label), phase) <= 1e-12);
  }
}

TEST_CASE("revival period of synthetic signals") {
  CHECK(revival_period(synthetic(0.2, 0.7, 60.0 * kPi)) == doctest::Approx(10.0 * kPi).epsilon(1e-5));
  CHECK(revival_period(synthetic(0.4, 0.577, 40.0 * kPi)) == doctest::Approx(5.0 * kPi).epsilon(1e-5));

  // two frequencies: period 2 pi / gcd(0.4, 0.6) = 10 pi
  OrientationSeries two;
  for (double t = 0.0; t <= 60.0 * kPi; t += 0.05) {
    two.times.push_back(t);
    two.values.push_back(0.3 * std::cos(0.4 * t) + 0.3 * std::cos(0.6 * t));
  }
  CHECK(revival_period(two) == doctest::Approx(10.0 * kPi).epsilon(1e-5));

  // negative-dominated signals are measured on their mirror image
  CHECK(revival_period(synthetic(0.2, -0.7, 60.0 * kPi)) == doctest::Approx(10.0 * kPi).epsilon(1e-5));

  auto window = synthetic(0.2, 0.7, 60.0 * kPi);
  window.post_pulse_start = 55.0 * kPi;
  CHECK_THROWS_AS(revival_period(window), ObservableError);
}

TEST_CASE("post-pulse maximum") {
  OrientationSeries zero;
  zero.post_pulse_start = 2.0;
  for (int i = 0; i < 100; ++i) {
    zero.times.push_back(0.1 * i);
    zero.values.push_back(0.0);
  }
  const auto m = post_pulse_max(zero);
  CHECK(m.value == 0.0);
  CHECK(m.time == doctest::Approx(2.0));

  OrientationSeries ties = zero;
  ties.values[40] = -0.5;
  ties.values[70] = 0.5;
  ties.values[10] = 0.9;  // before the window
  const auto t = post_pulse_max(ties);
  CHECK(t.value == 0.5);
  CHECK(t.time == doctest::Approx(4.0));

  OrientationSeries empty = zero;
  empty.post_pulse_start = 100.0;
  CHECK_THROWS_AS(post_pulse_max(empty), ObservableError);
}

TEST_CASE("fundamental scenario observables") {
  const auto r = run_scenario(default_config(CavityConfig::Fundamental), 0.1);
  REQUIRE(r.ok());
  CHECK(r.max.value >= 0.770);
  REQUIRE(r.revival);
  CHECK(*r.revival / kPi == doctest::Approx(10.0).epsilon(0.02));
  CHECK(r.populations[LevelLabel::ground()] == doctest::Approx(0.278).epsilon(0.01 / 0.278));
  CHECK(std::abs(r.populations[LevelLabel::ground()] - 0.278) <= 0.01);
  CHECK(std::abs(r.populations[LevelLabel::minus(0)] - 0.25) <= 0.01);
  CHECK(std::abs(r.populations[LevelLabel::plus(0)] - 0.25) <= 0.01);
  CHECK(std::abs(r.populations[LevelLabel::direct(2, 0)] - 0.222) <= 0.01);
  for (double v : r.series.values) CHECK(std::abs(v) <= kMaxOrientation + 1e-9);
  CHECK(r.norm_drift <= 1e-8);
}

TEST_CASE("second-harmonic scenario observables") {
  const auto narrow = run_scenario(default_config(CavityConfig::SecondHarmonic), 0.1);
  REQUIRE(narrow.ok());
  CHECK(std::abs(narrow.populations[LevelLabel::ground()] - 0.278) <= 0.01);
  CHECK(std::abs(narrow.populations[LevelLabel::direct(1, 0)] - 0.50) <= 0.01);
  CHECK(std::abs(narrow.populations[LevelLabel::plus(0)] - 0.111) <= 0.01);
  CHECK(std::abs(narrow.populations[LevelLabel::minus(0)] - 0.111) <= 0.01);

  const auto broad = run_scenario(default_config(CavityConfig::SecondHarmonic), 0.5);
  REQUIRE(broad.ok());
  CHECK(broad.max.value >= 0.75);
  for (double v : broad.series.values) CHECK(std::abs(v) <= kMaxOrientation + 1e-9);
}
