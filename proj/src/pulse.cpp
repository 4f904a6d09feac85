#include "polariton/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace polariton {

std::string to_string(Transition transition) {
  switch (transition) {
    case Transition::PlusGround: return "plus_ground";
    case Transition::MinusGround: return "minus_ground";
    case Transition::DirectPlus: return "direct_plus";
    case Transition::OneGround: return "one_ground";
    case Transition::PlusOne: return "plus_one";
    case Transition::MinusOne: return "minus_one";
  }
  return "?";
}

Transition transition_from_string(const std::string& name) {
  for (Transition t : {Transition::PlusGround, Transition::MinusGround, Transition::DirectPlus,
                       Transition::OneGround, Transition::PlusOne, Transition::MinusOne})
    if (to_string(t) == name) return t;
  throw std::invalid_argument("unknown transition '" + name + "'");
}

std::vector<Transition> scheme_transitions(CavityConfig config) {
  if (config == CavityConfig::Fundamental)
    return {Transition::PlusGround, Transition::MinusGround, Transition::DirectPlus};
  return {Transition::OneGround, Transition::PlusOne, Transition::MinusOne};
}

std::string to_string(BranchSign sign) { return sign == BranchSign::Physical ? "physical" : "uniform"; }

namespace {

std::pair<LevelLabel, LevelLabel> endpoints(Transition t) {
  switch (t) {
    case Transition::PlusGround: return {LevelLabel::ground(), LevelLabel::plus(0)};
    case Transition::MinusGround: return {LevelLabel::ground(), LevelLabel::minus(0)};
    case Transition::DirectPlus: return {LevelLabel::plus(0), LevelLabel::direct(2, 0)};
    case Transition::OneGround: return {LevelLabel::ground(), LevelLabel::direct(1, 0)};
    case Transition::PlusOne: return {LevelLabel::direct(1, 0), LevelLabel::plus(0)};
    case Transition::MinusOne: return {LevelLabel::direct(1, 0), LevelLabel::minus(0)};
  }
  throw std::invalid_argument("bad transition");
}

bool belongs_to(Transition t, CavityConfig config) {
  const auto all = scheme_transitions(config);
  return std::find(all.begin(), all.end(), t) != all.end();
}

}  // namespace

TransitionInfo transition_info(Transition transition, const CavitySpec& cavity) {
  if (!belongs_to(transition, cavity.configuration))
    throw std::invalid_argument("transition " + to_string(transition) + " is not part of the " +
                                to_string(cavity.configuration) + " scheme");
  const auto [lower, upper] = endpoints(transition);
  const int n_max = 2;
  const auto levels = dressed_levels_analytic(cavity, n_max);
  const auto& lo = find_level(levels, lower);
  const auto& up = find_level(levels, upper);
  const double m = up.coefficients.dot(cos_theta_product(ProductBasis(n_max)) * lo.coefficients);

  TransitionInfo info;
  info.transition = transition;
  info.lower = lower;
  info.upper = upper;
  info.frequency = up.energy - lo.energy;
  info.dipole = std::abs(m);
  info.sign = m < 0.0 ? -1.0 : 1.0;
  return info;
}

double PulseAreaSet::composite() const {
  auto mag = [&](Transition t) {
    const auto it = areas.find(t);
    return it == areas.end() ? 0.0 : std::abs(it->second);
  };
  if (config == CavityConfig::Fundamental) return std::hypot(mag(Transition::PlusGround), mag(Transition::MinusGround));
  return std::hypot(mag(Transition::PlusOne), mag(Transition::MinusOne));
}

PulseAreaSet required_areas(CavityConfig config) {
  PulseAreaSet set;
  set.config = config;
  const double a0 = std::acos(std::sqrt(10.0) / 6.0);
  if (config == CavityConfig::Fundamental) {
    set.areas[Transition::PlusGround] = std::sqrt(17.0 / 26.0) * a0;
    set.areas[Transition::MinusGround] = std::sqrt(9.0 / 26.0) * a0;
    set.areas[Transition::DirectPlus] = std::acos(3.0 / std::sqrt(17.0));
  } else {
    const double a1 = std::acos(3.0 / std::sqrt(13.0)) / std::sqrt(2.0);
    set.areas[Transition::OneGround] = a0;
    set.areas[Transition::PlusOne] = a1;
    set.areas[Transition::MinusOne] = a1;
  }
  return set;
}

double GaussianPulse::envelope(double t) const {
  const double x = (t - center) / width;
  return std::exp(-0.5 * x * x);
}

double GaussianPulse::rabi(double t) const {
  return peak_rabi * envelope(t) * std::cos(carrier_frequency * (t - center) + carrier_phase);
}

void PulseTrain::validate() const {
  if (pulses.size() != 3) throw std::invalid_argument("a pulse train holds exactly three pulses");
  std::set<Transition> seen;
  for (const auto& p : pulses) {
    if (!belongs_to(p.transition, config))
      throw std::invalid_argument("pulse " + to_string(p.transition) + " does not belong to the scheme");
    if (!seen.insert(p.transition).second) throw std::invalid_argument("duplicate pulse transition");
    if (!(p.width > 0.0)) throw std::invalid_argument("pulse width must be positive");
    if (!(p.carrier_frequency > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
    if (!(p.peak_rabi >= 0.0)) throw std::invalid_argument("peak Rabi amplitude must be >= 0");
    if (!(p.dipole > 0.0)) throw std::invalid_argument("transition dipole must be positive");
  }
}

const GaussianPulse& PulseTrain::pulse(Transition transition) const {
  for (const auto& p : pulses)
    if (p.transition == transition) return p;
  throw std::out_of_range("no pulse drives " + to_string(transition));
}

double PulseTrain::last_center() const {
  if (pulses.empty()) return 0.0;
  double c = pulses.front().center;
  for (const auto& p : pulses) c = std::max(c, p.center);
  return c;
}

double PulseTrain::max_width() const {
  double w = 0.0;
  for (const auto& p : pulses) w = std::max(w, p.width);
  return w;
}

DelayMap default_delays(CavityConfig config) {
  if (config == CavityConfig::Fundamental)
    return {{Transition::PlusGround, 0.0}, {Transition::MinusGround, 0.0},
            {Transition::DirectPlus, 121.053 * kRotationalPeriod}};
  return {{Transition::OneGround, 0.0}, {Transition::PlusOne, 109.524 * kRotationalPeriod},
          {Transition::MinusOne, 109.524 * kRotationalPeriod}};
}

double canonical_target_time(double t_min) {
  const double revival = 10.0 * kRotationalPeriod;
  if (t_min <= 0.0) return 0.0;
  return revival * std::ceil(t_min / revival - 1e-12);
}

PhaseMap carrier_phases(const CavitySpec& cavity, const TargetState& target, const DelayMap& delays) {
  auto phase_of = [&](const LevelLabel& label) {
    for (int i = 0; i < 4; ++i)
      if (target.levels[i] == label) return target.phases[i];
    throw std::out_of_range("target has no level " + label.name());
  };
  PhaseMap out;
  for (Transition t : scheme_transitions(cavity.configuration)) {
    const auto info = transition_info(t, cavity);
    const double wanted = phase_of(info.upper) - phase_of(info.lower);
    const double sign_phase = info.sign < 0.0 ? kPi : 0.0;
    out[t] = wrap_phase(info.frequency * delays.at(t) + 0.5 * kPi + sign_phase - wanted);
  }
  return out;
}

PulseTrain synthesize(const PulseAreaSet& areas, const PhaseMap& phases, double bandwidth,
                      const DelayMap& delays, const CavitySpec& cavity) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (areas.config != cavity.configuration) throw std::invalid_argument("area set and cavity disagree");
  PulseTrain train;
  train.config = cavity.configuration;
  for (Transition t : scheme_transitions(cavity.configuration)) {
    const auto info = transition_info(t, cavity);
    GaussianPulse p;
    p.transition = t;
    p.peak_rabi = std::sqrt(2.0 / kPi) * bandwidth * std::abs(areas.areas.at(t));
    p.center = delays.at(t);
    p.width = 1.0 / bandwidth;
    p.carrier_frequency = info.frequency;
    p.carrier_phase = phases.at(t);
    p.dipole = info.dipole;
    train.pulses.push_back(p);
  }
  train.validate();
  return train;
}

PulseTrain design_train(const CavitySpec& cavity, double bandwidth, const DelayMap& delays) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  double last = 0.0;
  for (const auto& [t, d] : delays) last = std::max(last, d);
  const double t_f = canonical_target_time(last + 6.0 / bandwidth);
  const auto target = optimal_target_state(cavity, t_f);
  return synthesize(required_areas(cavity.configuration), carrier_phases(cavity, target, delays), bandwidth,
                    delays, cavity);
}

double field_value(const PulseTrain& train, double t) {
  double f = 0.0;
  for (const auto& p : train.pulses) f += p.rabi(t);
  return f;
}

double electric_field(const PulseTrain& train, double t) {
  double f = 0.0;
  for (const auto& p : train.pulses) f += p.field(t);
  return f;
}

namespace {

using Complex = std::complex<double>;
using Integrand = std::function<Complex(double)>;

struct Sample {
  double t;
  Complex v;
};

Complex adaptive(const Integrand& f, Sample a, Sample m, Sample b, Complex whole, double tol, int depth) {
  const Sample lm{0.5 * (a.t + m.t), f(0.5 * (a.t + m.t))};
  const Sample rm{0.5 * (m.t + b.t), f(0.5 * (m.t + b.t))};
  const Complex left = (m.t - a.t) / 6.0 * (a.v + 4.0 * lm.v + m.v);
  const Complex right = (b.t - m.t) / 6.0 * (m.v + 4.0 * rm.v + b.v);
  const Complex diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return adaptive(f, a, lm, m, left, 0.5 * tol, depth - 1) + adaptive(f, m, rm, b, right, 0.5 * tol, depth - 1);
}

Complex integrate(const Integrand& f, double t0, double t1, double max_frequency, double tol) {
  // panels of about a quarter oscillation, then adaptive Simpson inside each
  const double panel = 0.5 * kPi / std::max(max_frequency, 1e-3);
  const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / panel)));
  const double h = (t1 - t0) / panels;
  Complex total = 0.0;
  Sample left{t0, f(t0)};
  for (int i = 0; i < panels; ++i) {
    const double b = (i + 1 == panels) ? t1 : t0 + (i + 1) * h;
    const Sample right{b, f(b)};
    const Sample mid{0.5 * (left.t + b), f(0.5 * (left.t + b))};
    const Complex whole = (b - left.t) / 6.0 * (left.v + 4.0 * mid.v + right.v);
    total += adaptive(f, left, mid, right, whole, tol / panels, 40);
    left = right;
  }
  return total;
}

}  // namespace

ComplexArea numeric_complex_area(const PulseTrain& train, Transition transition, double omega, double t0,
                                 double t1, double sign) {
  if (!(t1 > t0)) throw std::invalid_argument("area window needs t1 > t0");
  ComplexArea out;
  const GaussianPulse* pulse = nullptr;
  for (const auto& p : train.pulses)
    if (p.transition == transition) pulse = &p;
  if (pulse == nullptr || pulse->peak_rabi == 0.0) return out;

  const GaussianPulse p = *pulse;
  const Integrand f = [&](double t) { return sign * p.rabi(t) * std::exp(Complex(0.0, -omega * t)); };
  out.value = integrate(f, t0, t1, omega + p.carrier_frequency, 1e-10);

  const double s = std::sqrt(2.0) * p.width;
  out.clipped_mass = 1.0 - 0.5 * (std::erf((t1 - p.center) / s) - std::erf((t0 - p.center) / s));
  if (out.clipped_mass > 1e-6)
    out.warning = "integration window clips " + std::to_string(out.clipped_mass) + " of the Gaussian mass";
  return out;
}

ComplexArea pulse_area(const PulseTrain& train, Transition transition, const CavitySpec& cavity,
                       BranchSign branch) {
  const auto info = transition_info(transition, cavity);
  const auto& p = train.pulse(transition);
  const double sign = branch == BranchSign::Uniform ? 1.0 : info.sign;
  return numeric_complex_area(train, transition, info.frequency, p.center - 6.0 * p.width,
                              p.center + 6.0 * p.width, sign);
}

std::vector<double> phase_condition_residuals(const CavitySpec& cavity,
                                              const std::map<Transition, std::complex<double>>& areas) {
  const double g = cavity.coupling_g;
  const double modulus = 2.0 * g * kPi;
  auto reduce = [&](double x) {
    double r = std::fmod(x, modulus);
    if (r > 0.5 * modulus) r -= modulus;
    if (r < -0.5 * modulus) r += modulus;
    return r;
  };
  auto arg = [&](Transition t) { return std::arg(areas.at(t)); };
  auto freq = [&](Transition t) { return transition_info(t, cavity).frequency; };

  if (cavity.configuration == CavityConfig::Fundamental) {
    const double wp = freq(Transition::PlusGround);
    const double wm = freq(Transition::MinusGround);
    const double w2 = freq(Transition::DirectPlus);  // omega_20 - omega_+0
    return {reduce(-wp * arg(Transition::MinusGround) + wm * arg(Transition::PlusGround)),
            reduce(-w2 * arg(Transition::PlusGround) + wp * arg(Transition::DirectPlus))};
  }
  const double w1 = freq(Transition::OneGround);
  const double wm = w1 + freq(Transition::MinusOne);
  const double wp = w1 + freq(Transition::PlusOne);
  return {reduce((w1 - wm) * arg(Transition::OneGround) + w1 * arg(Transition::MinusOne) - 0.5 * wm * kPi),
          reduce((w1 - wm) * arg(Transition::PlusOne) + (wp - w1) * arg(Transition::MinusOne))};
}

}  // namespace polariton
