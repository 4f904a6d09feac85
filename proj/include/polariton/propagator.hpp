#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polariton/pulse.hpp"
#include "polariton/rotor_cavity.hpp"

namespace polariton {

enum class DriveKind { PerTransition, TotalFieldFourState, FullProduct };

std::string to_string(DriveKind kind);
DriveKind drive_kind_from_string(const std::string& name);

struct DriveModel {
  DriveKind kind = DriveKind::FullProduct;
  CavitySpec cavity;
  int n_max = 3;  // FullProduct only
  CouplingForm coupling = CouplingForm::RotatingWave;
  BranchSign branch = BranchSign::Physical;  // four-state models only

  int dimension() const;
  void validate() const;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Real operator stored as (row, col, value) entries; tiny and mostly empty.
class SparseOperator {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };

  SparseOperator() = default;
  static SparseOperator from_dense(const Eigen::MatrixXd& dense, double drop = 0.0);

  /// out += scale * A * in
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out, double scale) const;
  std::size_t nonzeros() const { return entries_.size(); }
  Eigen::MatrixXd dense(int dimension) const;

 private:
  std::vector<Entry> entries_;
};

// H(t) = H0 + sum_c f_c(t) V_c. Each channel's coefficient is a weighted sum
// of pulse waveforms: f_c(t) = sum_k w_ck envelope_k(t) cos(...).
class CompiledDrive {
 public:
  CompiledDrive(const DriveModel& model, const PulseTrain& train);

  int dimension() const { return dimension_; }
  const DriveModel& model() const { return model_; }
  const PulseTrain& train() const { return train_; }

  const Eigen::MatrixXd& h0() const { return h0_dense_; }
  /// Levels of the active basis: unit vectors for four-state models,
  /// analytic dressed vectors for FullProduct.
  const std::vector<DressedLevel>& levels() const { return levels_; }
  const Eigen::MatrixXd& cos_theta() const { return cos_theta_; }

  void channel_coefficients(double t, std::vector<double>& out) const;
  Eigen::MatrixXcd hamiltonian(double t) const;
  /// out = -i H(t) psi given precomputed channel coefficients.
  void derivative(const std::vector<double>& coefficients, const Eigen::VectorXcd& psi,
                  Eigen::VectorXcd& out) const;

  /// Largest field-free Bohr frequency.
  double max_bohr_frequency() const { return max_bohr_; }
  Eigen::VectorXcd ground_state() const;

 private:
  struct Channel {
    SparseOperator op;
    std::vector<std::pair<std::size_t, double>> weights;  // (pulse index, weight)
  };

  DriveModel model_;
  PulseTrain train_;
  int dimension_ = 0;
  Eigen::MatrixXd h0_dense_;
  SparseOperator h0_;
  std::vector<Channel> channels_;
  std::vector<DressedLevel> levels_;
  Eigen::MatrixXd cos_theta_;
  double max_bohr_ = 0.0;
};

Eigen::MatrixXcd build_hamiltonian_at(const DriveModel& model, const PulseTrain& train, double t);

struct StateVector {
  Eigen::VectorXcd amplitudes;
  double time = 0.0;
};

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<StateVector> snapshots;
  double max_norm_drift = 0.0;

  const StateVector& final_state() const { return snapshots.back(); }
};

struct PropagationOptions {
  int stride = 1;                 // keep every stride-th step (final step always kept)
  double abort_norm_drift = 1e-6;
};

// Classical fixed-step RK4 for i dpsi/dt = H(t) psi. No renormalization:
// the norm drift is a diagnostic, and the run aborts beyond abort_norm_drift.
Trajectory propagate(const CompiledDrive& drive, const StateVector& initial, TimeSpan span,
                     double dt, const PropagationOptions& options = {});
Trajectory propagate(const DriveModel& model, const PulseTrain& train, const StateVector& initial,
                     TimeSpan span, double dt, const PropagationOptions& options = {});

/// 0.02 / max Bohr frequency, the coarsest step the integrator accepts.
double default_dt(const CompiledDrive& drive);

/// [-6 tau, t_last + 6 tau + observation]
TimeSpan default_window(const PulseTrain& train, double observation = 10.0 * kRotationalPeriod);

struct ConvergenceReport {
  double accepted_dt = 0.0;
  std::vector<std::pair<double, double>> history;  // (dt, change against dt/2)
};

// Halve dt until the final state moves by less than `tolerance` (max-abs
// amplitude difference) against the next halving. Gives up below 1e-5.
ConvergenceReport convergence_probe(const CompiledDrive& drive, const StateVector& initial,
                                    TimeSpan span, double trial_dt, double tolerance = 1e-8);

}  // namespace polariton
