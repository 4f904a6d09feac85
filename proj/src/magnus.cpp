#include "polariton/magnus.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace polariton {

namespace {

using Complex = std::complex<double>;
const Complex kI(0.0, 1.0);

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

double FourStateAmplitudes::norm() const {
  double s = 0.0;
  for (const auto& c : coefficients) s += std::norm(c);
  return std::sqrt(s);
}

std::complex<double> FourStateAmplitudes::operator[](const LevelLabel& label) const {
  for (int i = 0; i < 4; ++i)
    if (levels[i] == label) return coefficients[i];
  throw std::out_of_range("no coefficient for level " + label.name());
}

FourStateAmplitudes magnus_state_fundamental(Complex theta_plus0, Complex theta_minus0, Complex theta_1) {
  const double theta_0 = std::hypot(std::abs(theta_plus0), std::abs(theta_minus0));
  const double t1 = std::abs(theta_1);
  const Complex plus_block = kI * std::conj(theta_plus0) * sinc(theta_0);

  FourStateAmplitudes s;
  s.config = CavityConfig::Fundamental;
  s.levels = target_levels(s.config);
  s.coefficients[0] = std::cos(theta_0);
  s.coefficients[1] = kI * std::conj(theta_minus0) * sinc(theta_0);
  s.coefficients[2] = plus_block * std::cos(t1);
  s.coefficients[3] = plus_block * kI * std::conj(theta_1) * sinc(t1);
  return s;
}

FourStateAmplitudes magnus_state_second_harmonic(Complex theta_0, Complex theta_plus1, Complex theta_minus1) {
  const double t0 = std::abs(theta_0);
  const double theta_1 = std::hypot(std::abs(theta_plus1), std::abs(theta_minus1));
  const Complex one_block = kI * std::conj(theta_0) * sinc(t0);

  FourStateAmplitudes s;
  s.config = CavityConfig::SecondHarmonic;
  s.levels = target_levels(s.config);
  s.coefficients[0] = std::cos(t0);
  s.coefficients[1] = one_block * std::cos(theta_1);
  s.coefficients[2] = one_block * kI * std::conj(theta_plus1) * sinc(theta_1);
  s.coefficients[3] = one_block * kI * std::conj(theta_minus1) * sinc(theta_1);
  return s;
}

FourStateAmplitudes magnus_state(const PulseTrain& train, const CavitySpec& cavity, BranchSign branch) {
  if (train.config != cavity.configuration) throw std::invalid_argument("train and cavity disagree");
  auto area = [&](Transition t) { return pulse_area(train, t, cavity, branch).value; };
  if (cavity.configuration == CavityConfig::Fundamental)
    return magnus_state_fundamental(area(Transition::PlusGround), area(Transition::MinusGround),
                                    area(Transition::DirectPlus));
  return magnus_state_second_harmonic(area(Transition::OneGround), area(Transition::PlusOne),
                                      area(Transition::MinusOne));
}

namespace {

struct Term {
  int upper;
  int lower;
  double frequency;
  double moment;
};

std::vector<Term> orientation_terms(CavityConfig config, const CavitySpec& cavity) {
  const auto moments = transition_moments(config);
  const auto levels = dressed_levels_analytic(cavity, 2);
  auto index = [&](const LevelLabel& label) {
    for (int i = 0; i < 4; ++i)
      if (moments.levels[i] == label) return i;
    throw std::out_of_range("level outside the four-level model");
  };
  std::vector<Term> terms;
  for (const auto& m : moments.moments)
    terms.push_back({index(m.upper), index(m.lower),
                     find_level(levels, m.upper).energy - find_level(levels, m.lower).energy, m.value});
  return terms;
}

double evaluate(const FourStateAmplitudes& state, const std::vector<Term>& terms, double t) {
  double value = 0.0;
  for (const auto& term : terms)
    value += 2.0 * term.moment *
             std::real(std::conj(state.coefficients[term.upper]) * state.coefficients[term.lower] *
                       std::exp(kI * term.frequency * t));
  return value;
}

}  // namespace

double free_orientation(const FourStateAmplitudes& state, const CavitySpec& cavity, double t) {
  if (state.config != cavity.configuration) throw std::invalid_argument("state and cavity disagree");
  return evaluate(state, orientation_terms(state.config, cavity), t);
}

TrainVerdict verify_train(const PulseTrain& train, const CavitySpec& cavity, BranchSign branch,
                          double tolerance) {
  const auto state = magnus_state(train, cavity, branch);
  const auto terms = orientation_terms(state.config, cavity);
  const double start = train.last_center();
  const double period = 10.0 * kRotationalPeriod;
  const int samples = 20000;
  TrainVerdict verdict;
  for (int i = 0; i <= samples; ++i) {
    const double t = start + period * i / samples;
    const double v = std::abs(evaluate(state, terms, t));
    if (v > verdict.predicted_max) {
      verdict.predicted_max = v;
      verdict.time_of_max = t;
    }
  }
  verdict.optimal = std::abs(verdict.predicted_max - std::sqrt(0.6)) <= tolerance;
  return verdict;
}

}  // namespace polariton
