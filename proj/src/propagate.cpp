#include "msqw/propagate.hpp"

#include <cmath>
#include <string>

#include "msqw/errors.hpp"

namespace msqw {

namespace {

using RealPairs = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>>;

// Complex amplitudes viewed as an N x 2 real matrix (re, im columns).
RealPairs as_real_pairs(std::span<Complex> amps) {
  return RealPairs(reinterpret_cast<double*>(amps.data()), static_cast<Eigen::Index>(amps.size()), 2);
}

void require_walk_size(int n) {
  if (n > kMaxWalkQubits) {
    throw ConfigError("quantum-walk propagation needs dense diagonalization; n=" + std::to_string(n) +
                      " exceeds the cap of " + std::to_string(kMaxWalkQubits));
  }
}

}  // namespace

void phase_propagate_inplace(std::span<Complex> amps, const DiagonalEnergies& diag, double beta) {
  if (amps.size() != diag.dim()) throw UsageError("phase_propagate: state and energy table sizes differ");
  for (std::size_t z = 0; z < amps.size(); ++z) amps[z] *= std::polar(1.0, -beta * diag.energies[z]);
}

StateVector phase_propagate(const StateVector& state, const DiagonalEnergies& diag, double beta) {
  StateVector out = state;
  phase_propagate_inplace(out.amps(), diag, beta);
  return out;
}

void driver_propagate_inplace(std::span<Complex> amps, int n, double alpha) {
  const Complex c{std::cos(alpha), 0.0};
  const Complex is{0.0, std::sin(alpha)};
  const std::size_t dim = amps.size();
  for (int j = 0; j < n; ++j) {
    const std::size_t mask = std::size_t{1} << j;
    for (std::size_t z = 0; z < dim; ++z) {
      if (z & mask) continue;
      const Complex a0 = amps[z];
      const Complex a1 = amps[z | mask];
      amps[z] = c * a0 + is * a1;
      amps[z | mask] = is * a0 + c * a1;
    }
  }
}

StateVector driver_propagate(const StateVector& state, double alpha) {
  StateVector out = state;
  driver_propagate_inplace(out.amps(), out.qubits(), alpha);
  return out;
}

Eigen::MatrixXd hamiltonian_matrix(const DiagonalEnergies& diag, double driver_coeff, double problem_coeff) {
  const auto dim = static_cast<Eigen::Index>(diag.dim());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index z = 0; z < dim; ++z) {
    h(z, z) = problem_coeff * diag.energies[static_cast<std::size_t>(z)];
    for (int j = 0; j < diag.n; ++j) h(z, z ^ (Eigen::Index{1} << j)) = -driver_coeff;
  }
  return h;
}

QwPropagator::QwPropagator(const DiagonalEnergies& diag, double driver_coeff, double problem_coeff)
    : n_(diag.n), driver_coeff_(driver_coeff), problem_coeff_(problem_coeff) {
  require_walk_size(n_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hamiltonian_matrix(diag, driver_coeff, problem_coeff));
  if (eig.info() != Eigen::Success) throw std::runtime_error("walk Hamiltonian eigendecomposition failed");
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
}

void QwPropagator::apply_inplace(std::span<Complex> amps, double t, Eigen::MatrixXd& scratch) const {
  if (static_cast<Eigen::Index>(amps.size()) != eigenvalues_.size()) {
    throw UsageError("QwPropagator: state dimension does not match the Hamiltonian");
  }
  if (t == 0.0) return;
  auto psi = as_real_pairs(amps);
  scratch.noalias() = eigenvectors_.transpose() * psi;
  for (Eigen::Index k = 0; k < scratch.rows(); ++k) {
    const double c = std::cos(eigenvalues_(k) * t);
    const double s = -std::sin(eigenvalues_(k) * t);
    const double re = scratch(k, 0);
    const double im = scratch(k, 1);
    scratch(k, 0) = c * re - s * im;
    scratch(k, 1) = s * re + c * im;
  }
  psi.noalias() = eigenvectors_ * scratch;
}

StateVector QwPropagator::apply(const StateVector& state, double t) const {
  StateVector out = state;
  Eigen::MatrixXd scratch;
  apply_inplace(out.amps(), t, scratch);
  return out;
}

Eigen::MatrixXcd QwPropagator::unitary(double t) const {
  Eigen::VectorXcd phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -eigenvalues_(k) * t);
  const Eigen::MatrixXcd v = eigenvectors_.cast<Complex>();
  return v * phases.asDiagonal() * v.transpose();
}

std::shared_ptr<const QwPropagator> QwCache::get(double gamma) {
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(gamma); it != entries_.end()) return it->second;
  }
  // Decompose outside the lock; a racing duplicate is discarded on insert.
  auto fresh = std::make_shared<const QwPropagator>(*diag_, gamma, 1.0);
  std::lock_guard lock(mu_);
  auto [it, inserted] = entries_.emplace(gamma, std::move(fresh));
  return it->second;
}

std::size_t QwCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

StateVector qw_propagate(const StateVector& state, const DiagonalEnergies& diag, double gamma, double t) {
  require_walk_size(state.qubits());
  if (t == 0.0) return state;
  return QwPropagator(diag, gamma, 1.0).apply(state, t);
}

AnnealSchedule AnnealSchedule::linear(double t_total) {
  return {[](double s) { return 1.0 - s; }, [](double s) { return s; }, t_total, "linear"};
}

AnnealSchedule AnnealSchedule::constant(double a, double b, double t_total) {
  return {[a](double) { return a; }, [b](double) { return b; }, t_total, "constant"};
}

StateVector anneal_propagate(const StateVector& state, const DiagonalEnergies& diag, const AnnealSchedule& schedule,
                             int steps) {
  if (steps < 1) throw UsageError("anneal_propagate: steps must be >= 1");
  if (schedule.t_total == 0.0) return state;
  const double dt = schedule.t_total / steps;
  StateVector out = state;
  Eigen::MatrixXd scratch;
  for (int k = 0; k < steps; ++k) {
    const double mid = (k + 0.5) * dt;
    QwPropagator step(diag, schedule.a_at_time(mid), schedule.b_at_time(mid));
    step.apply_inplace(out.amps(), dt, scratch);
  }
  return out;
}

Eigen::MatrixXcd anneal_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, int steps) {
  if (steps < 1) throw UsageError("anneal_unitary: steps must be >= 1");
  if (diag.n > kMaxDenseQubits) throw ConfigError("anneal_unitary: n above dense-unitary cap of 8");
  const auto dim = static_cast<Eigen::Index>(diag.dim());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  if (schedule.t_total == 0.0) return u;
  const double dt = schedule.t_total / steps;
  for (int k = 0; k < steps; ++k) {
    const double mid = (k + 0.5) * dt;
    QwPropagator step(diag, schedule.a_at_time(mid), schedule.b_at_time(mid));
    u = step.unitary(dt) * u;
  }
  return u;
}

AnnealReference converged_anneal_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, double tol,
                                         int start_steps, int max_steps) {
  if (start_steps < 1) throw UsageError("converged_anneal_unitary: start_steps must be >= 1");
  Eigen::MatrixXcd prev = anneal_unitary(diag, schedule, start_steps);
  double change = 0.0;
  for (int steps = start_steps * 2; steps <= max_steps; steps *= 2) {
    Eigen::MatrixXcd next = anneal_unitary(diag, schedule, steps);
    change = spectral_norm(next - prev);
    if (change < tol) {
      return {DenseUnitary{diag.n, std::move(next)}, std::move(prev), steps, change};
    }
    prev = std::move(next);
  }
  throw ReferenceNotConverged("annealing reference did not converge: change " + std::to_string(change) +
                              " >= tol " + std::to_string(tol) + " at " + std::to_string(max_steps) +
                              " steps (schedule '" + schedule.name + "', t_total " +
                              std::to_string(schedule.t_total) + ")");
}

DenseUnitary build_dense_unitary(int n, const Propagator& propagate) {
  if (n > kMaxDenseQubits) {
    throw ConfigError("build_dense_unitary: n=" + std::to_string(n) + " above the dense cap of 8");
  }
  const std::size_t dim = dimension_for(n);
  DenseUnitary u{n, Eigen::MatrixXcd(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))};
  for (std::size_t col = 0; col < dim; ++col) {
    const StateVector out = propagate(StateVector::basis(n, static_cast<Basis>(col)));
    if (out.dim() != dim) throw UsageError("build_dense_unitary: propagator changed the dimension");
    for (std::size_t row = 0; row < dim; ++row) {
      u.entries(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = out[row];
    }
  }
  return u;
}

}  // namespace msqw
