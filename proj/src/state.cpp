#include "msqw/state.hpp"

#include <cmath>
#include <string>

#include "msqw/errors.hpp"

namespace msqw {

std::size_t dimension_for(int n) {
  if (n < 1 || n > kMaxStateQubits) {
    throw ConfigError("qubit count " + std::to_string(n) + " outside supported range [1, " +
                      std::to_string(kMaxStateQubits) + "]");
  }
  return std::size_t{1} << n;
}

StateVector::StateVector(int n) : n_(n), amps_(dimension_for(n)) {}

StateVector::StateVector(int n, std::vector<Complex> amps) : n_(n), amps_(std::move(amps)) {
  if (amps_.size() != dimension_for(n)) {
    throw UsageError("amplitude count " + std::to_string(amps_.size()) + " does not match 2^" +
                     std::to_string(n));
  }
}

StateVector StateVector::basis(int n, Basis z) {
  StateVector s(n);
  if (z >= s.dim()) throw UsageError("basis index out of range");
  s.amps_[z] = 1.0;
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

StateVector make_plus_state(int n) {
  StateVector s(n);
  const double amp = std::pow(2.0, -0.5 * n);
  for (auto& a : s.amps()) a = amp;
  return s;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.qubits() != b.qubits()) {
    throw UsageError("inner_product: qubit counts differ (" + std::to_string(a.qubits()) + " vs " +
                     std::to_string(b.qubits()) + ")");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double distance(const StateVector& a, const StateVector& b) {
  if (a.qubits() != b.qubits()) throw UsageError("distance: qubit counts differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw UsageError("spectral_norm: matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() > (1 << kMaxDenseQubits)) {
    throw ConfigError("spectral_norm: dimension above 256");
  }
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double unitarity_defect(const DenseUnitary& u) {
  const auto& m = u.entries;
  Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

}  // namespace msqw
