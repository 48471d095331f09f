#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "msqw/model.hpp"
#include "msqw/state.hpp"

namespace msqw {

inline constexpr int kMaxWalkQubits = 12;

/// out[z] = exp(-i beta E(z)) in[z]
StateVector phase_propagate(const StateVector& state, const DiagonalEnergies& diag, double beta);
void phase_propagate_inplace(std::span<Complex> amps, const DiagonalEnergies& diag, double beta);

/// exp(-i alpha H_d) = prod_j exp(+i alpha X_j), applied qubit by qubit.
StateVector driver_propagate(const StateVector& state, double alpha);
void driver_propagate_inplace(std::span<Complex> amps, int n, double alpha);

/// Dense real matrix of driver_coeff * H_d + problem_coeff * H_P.
Eigen::MatrixXd hamiltonian_matrix(const DiagonalEnergies& diag, double driver_coeff, double problem_coeff = 1.0);

/// exp(-i (a H_d + b H_P) t) through the eigendecomposition of the (real
/// symmetric) Hamiltonian. Built once, then applied for any t.
class QwPropagator {
 public:
  QwPropagator(const DiagonalEnergies& diag, double driver_coeff, double problem_coeff = 1.0);

  StateVector apply(const StateVector& state, double t) const;

  /// `scratch` is resized as needed; keep one per thread in hot loops.
  void apply_inplace(std::span<Complex> amps, double t, Eigen::MatrixXd& scratch) const;

  Eigen::MatrixXcd unitary(double t) const;

  int qubits() const { return n_; }
  double driver_coeff() const { return driver_coeff_; }
  double problem_coeff() const { return problem_coeff_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

 private:
  int n_ = 0;
  double driver_coeff_ = 0.0;
  double problem_coeff_ = 1.0;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// Per-instance cache of walk decompositions keyed by hopping rate.
/// Insertion is serialized; returned propagators are immutable and shareable.
class QwCache {
 public:
  explicit QwCache(const DiagonalEnergies& diag) : diag_(&diag) {}

  std::shared_ptr<const QwPropagator> get(double gamma);
  std::size_t size() const;

 private:
  const DiagonalEnergies* diag_;
  mutable std::mutex mu_;
  std::map<double, std::shared_ptr<const QwPropagator>> entries_;
};

/// exp(-i (gamma H_d + H_P) t) |psi>. n <= 12.
StateVector qw_propagate(const StateVector& state, const DiagonalEnergies& diag, double gamma, double t);

/// H(t) = A(t/T) H_d + B(t/T) H_P on [0, T].
struct AnnealSchedule {
  std::function<double(double)> a_fn;
  std::function<double(double)> b_fn;
  double t_total = 1.0;
  std::string name;

  static AnnealSchedule linear(double t_total);
  static AnnealSchedule constant(double a, double b, double t_total);

  double a_at_time(double t) const { return a_fn(t / t_total); }
  double b_at_time(double t) const { return b_fn(t / t_total); }
};

/// `steps` piecewise-constant sub-steps, each an exact walk step with the
/// sub-interval midpoint coefficients.
StateVector anneal_propagate(const StateVector& state, const DiagonalEnergies& diag, const AnnealSchedule& schedule,
                             int steps);

/// Same sub-steps as anneal_propagate, accumulated on the full matrix (n <= 8).
Eigen::MatrixXcd anneal_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, int steps);

struct AnnealReference {
  DenseUnitary unitary;
  Eigen::MatrixXcd coarser;  // result at steps / 2
  int steps = 0;
  double last_change = 0.0;  // spectral norm of (unitary - coarser)
};

class ReferenceNotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Doubles the step count from `start_steps` until successive unitaries differ
/// by less than `tol` in spectral norm. Throws ReferenceNotConverged past
/// `max_steps`.
AnnealReference converged_anneal_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule,
                                         double tol = 1e-8, int start_steps = 64, int max_steps = 1 << 20);

using Propagator = std::function<StateVector(const StateVector&)>;

/// Columns are the propagated basis states. n <= 8.
DenseUnitary build_dense_unitary(int n, const Propagator& propagate);

}  // namespace msqw
