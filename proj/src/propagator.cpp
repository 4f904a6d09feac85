#include "polariton/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace polariton {

std::string to_string(DriveKind kind) {
  switch (kind) {
    case DriveKind::PerTransition: return "per_transition";
    case DriveKind::TotalFieldFourState: return "total_field_four_state";
    case DriveKind::FullProduct: return "full_product";
  }
  return "?";
}

DriveKind drive_kind_from_string(const std::string& name) {
  for (DriveKind k : {DriveKind::PerTransition, DriveKind::TotalFieldFourState, DriveKind::FullProduct})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown drive model '" + name + "'");
}

int DriveModel::dimension() const { return kind == DriveKind::FullProduct ? 3 * (n_max + 1) : 4; }

void DriveModel::validate() const {
  cavity.validate();
  if (kind == DriveKind::FullProduct && n_max < 1) throw std::invalid_argument("n_max must be >= 1");
}

SparseOperator SparseOperator::from_dense(const Eigen::MatrixXd& dense, double drop) {
  SparseOperator op;
  for (int r = 0; r < dense.rows(); ++r)
    for (int c = 0; c < dense.cols(); ++c)
      if (std::abs(dense(r, c)) > drop) op.entries_.push_back({r, c, dense(r, c)});
  return op;
}

void SparseOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out, double scale) const {
  for (const auto& e : entries_) out(e.row) += (scale * e.value) * in(e.col);
}

Eigen::MatrixXd SparseOperator::dense(int dimension) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dimension, dimension);
  for (const auto& e : entries_) m(e.row, e.col) += e.value;
  return m;
}

namespace {

Eigen::MatrixXd four_level_moments(CavityConfig config) {
  const auto moments = transition_moments(config);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      if (i != k) c(i, k) = moments.get(moments.levels[i], moments.levels[k]);
  return c;
}

int four_index(CavityConfig config, const LevelLabel& label) {
  const auto levels = target_levels(config);
  for (int i = 0; i < 4; ++i)
    if (levels[i] == label) return i;
  throw std::out_of_range("level outside the four-level model");
}

// -sign * dipole * (|u><l| + |l><u|)
Eigen::MatrixXd transition_coupling(const TransitionInfo& info, BranchSign branch, CavityConfig config) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
  const double sign = branch == BranchSign::Uniform ? 1.0 : info.sign;
  const int u = four_index(config, info.upper);
  const int l = four_index(config, info.lower);
  v(u, l) = v(l, u) = -sign * info.dipole;
  return v;
}

}  // namespace

CompiledDrive::CompiledDrive(const DriveModel& model, const PulseTrain& train) : model_(model), train_(train) {
  model_.validate();
  if (train_.config != model_.cavity.configuration)
    throw std::invalid_argument("pulse train and drive model use different cavity configurations");
  dimension_ = model_.dimension();
  const CavityConfig config = model_.cavity.configuration;

  if (model_.kind == DriveKind::FullProduct) {
    const ProductBasis basis(model_.n_max);
    h0_dense_ = bare_hamiltonian(model_.cavity, basis, model_.coupling);
    cos_theta_ = cos_theta_product(basis);
    levels_ = dressed_levels_analytic(model_.cavity, model_.n_max);
    Channel ch{SparseOperator::from_dense(-cos_theta_), {}};
    for (std::size_t k = 0; k < train_.pulses.size(); ++k) ch.weights.emplace_back(k, 1.0 / train_.pulses[k].dipole);
    channels_.push_back(std::move(ch));
  } else {
    const auto labels = target_levels(config);
    const auto analytic = dressed_levels_analytic(model_.cavity, 2);
    h0_dense_ = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
      e(i) = 1.0;
      const double energy = find_level(analytic, labels[i]).energy;
      h0_dense_(i, i) = energy;
      levels_.push_back({labels[i], energy, e});
    }
    cos_theta_ = four_level_moments(config);

    if (model_.kind == DriveKind::PerTransition) {
      for (std::size_t k = 0; k < train_.pulses.size(); ++k) {
        const auto info = transition_info(train_.pulses[k].transition, model_.cavity);
        channels_.push_back({SparseOperator::from_dense(transition_coupling(info, model_.branch, config)),
                             {{k, 1.0 / train_.pulses[k].dipole}}});
      }
    } else {
      // the summed field drives every listed transition
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
      for (Transition t : scheme_transitions(config))
        v += transition_coupling(transition_info(t, model_.cavity), model_.branch, config);
      Channel ch{SparseOperator::from_dense(v), {}};
      for (std::size_t k = 0; k < train_.pulses.size(); ++k) ch.weights.emplace_back(k, 1.0 / train_.pulses[k].dipole);
      channels_.push_back(std::move(ch));
    }
  }
  h0_ = SparseOperator::from_dense(h0_dense_);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h0_dense_, Eigen::EigenvaluesOnly);
  max_bohr_ = solver.eigenvalues().maxCoeff() - solver.eigenvalues().minCoeff();
}

void CompiledDrive::channel_coefficients(double t, std::vector<double>& out) const {
  out.assign(channels_.size(), 0.0);
  for (std::size_t c = 0; c < channels_.size(); ++c)
    for (const auto& [k, w] : channels_[c].weights) {
      const auto& p = train_.pulses[k];
      // exp underflows to exactly zero well before 40 widths
      if (std::abs(t - p.center) > 40.0 * p.width) continue;
      out[c] += w * p.rabi(t);
    }
}

Eigen::MatrixXcd CompiledDrive::hamiltonian(double t) const {
  std::vector<double> f;
  channel_coefficients(t, f);
  Eigen::MatrixXd h = h0_dense_;
  for (std::size_t c = 0; c < channels_.size(); ++c) h += f[c] * channels_[c].op.dense(dimension_);
  return h.cast<std::complex<double>>();
}

void CompiledDrive::derivative(const std::vector<double>& coefficients, const Eigen::VectorXcd& psi,
                               Eigen::VectorXcd& out) const {
  out.setZero(dimension_);
  h0_.apply(psi, out, 1.0);
  for (std::size_t c = 0; c < channels_.size(); ++c)
    if (coefficients[c] != 0.0) channels_[c].op.apply(psi, out, coefficients[c]);
  out *= std::complex<double>(0.0, -1.0);
}

Eigen::VectorXcd CompiledDrive::ground_state() const {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dimension_);
  psi(0) = 1.0;  // |J=0, n=0> and |0;0> both sit at index 0
  return psi;
}

Eigen::MatrixXcd build_hamiltonian_at(const DriveModel& model, const PulseTrain& train, double t) {
  return CompiledDrive(model, train).hamiltonian(t);
}

Trajectory propagate(const CompiledDrive& drive, const StateVector& initial, TimeSpan span, double dt,
                     const PropagationOptions& options) {
  if (initial.amplitudes.size() != drive.dimension())
    throw std::invalid_argument("initial state has the wrong dimension");
  if (!(dt > 0.0) || !(span.end > span.start)) throw std::invalid_argument("need dt > 0 and a nonempty span");
  if (options.stride < 1) throw std::invalid_argument("stride must be >= 1");

  const double length = span.end - span.start;
  const long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(length / dt - 1e-9)));
  const double h = length / static_cast<double>(steps);
  const double norm0 = initial.amplitudes.norm();

  Trajectory traj;
  traj.dt = h;
  traj.snapshots.reserve(static_cast<std::size_t>(steps / options.stride + 2));
  Eigen::VectorXcd psi = initial.amplitudes;
  traj.snapshots.push_back({psi, span.start});

  const int dim = drive.dimension();
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::vector<double> f_start, f_mid, f_end;
  drive.channel_coefficients(span.start, f_start);

  for (long long i = 0; i < steps; ++i) {
    const double t = span.start + static_cast<double>(i) * h;
    const double t_next = span.start + static_cast<double>(i + 1) * h;
    drive.channel_coefficients(t + 0.5 * h, f_mid);
    drive.channel_coefficients(t_next, f_end);

    drive.derivative(f_start, psi, k1);
    tmp = psi + (0.5 * h) * k1;
    drive.derivative(f_mid, tmp, k2);
    tmp = psi + (0.5 * h) * k2;
    drive.derivative(f_mid, tmp, k3);
    tmp = psi + h * k3;
    drive.derivative(f_end, tmp, k4);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    std::swap(f_start, f_end);

    const double drift = std::abs(psi.norm() - norm0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (!(drift <= options.abort_norm_drift))
      throw IntegrationError("norm drift " + std::to_string(drift) + " at t = " + std::to_string(t_next) +
                             " exceeds the abort threshold");
    if ((i + 1) % options.stride == 0 || i + 1 == steps) traj.snapshots.push_back({psi, t_next});
  }
  return traj;
}

Trajectory propagate(const DriveModel& model, const PulseTrain& train, const StateVector& initial, TimeSpan span,
                     double dt, const PropagationOptions& options) {
  return propagate(CompiledDrive(model, train), initial, span, dt, options);
}

double default_dt(const CompiledDrive& drive) { return 0.02 / std::max(drive.max_bohr_frequency(), 1.0); }

TimeSpan default_window(const PulseTrain& train, double observation) {
  if (train.pulses.empty()) return {0.0, observation};
  double first = train.pulses.front().center;
  for (const auto& p : train.pulses) first = std::min(first, p.center);
  const double w = train.max_width();
  return {first - 6.0 * w, train.last_center() + 6.0 * w + observation};
}

ConvergenceReport convergence_probe(const CompiledDrive& drive, const StateVector& initial, TimeSpan span,
                                    double trial_dt, double tolerance) {
  ConvergenceReport report;
  PropagationOptions options;
  options.stride = 1 << 30;
  // A step too coarse to keep the norm is treated as unconverged, not fatal.
  auto attempt = [&](double step) -> std::optional<Eigen::VectorXcd> {
    try {
      return propagate(drive, initial, span, step, options).final_state().amplitudes;
    } catch (const IntegrationError&) {
      return std::nullopt;
    }
  };
  double dt = trial_dt;
  auto coarse = attempt(dt);
  while (true) {
    if (dt / 2.0 < 1e-5) throw IntegrationError("time step fell below 1e-5 without converging");
    auto fine = attempt(dt / 2.0);
    const double change = coarse && fine ? ((*fine - *coarse).cwiseAbs().maxCoeff())
                                         : std::numeric_limits<double>::infinity();
    report.history.emplace_back(dt, change);
    if (change < tolerance) {
      report.accepted_dt = dt;
      return report;
    }
    dt /= 2.0;
    coarse = std::move(fine);
  }
}

}  // namespace polariton
