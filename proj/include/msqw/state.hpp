#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace msqw {

using Complex = std::complex<double>;
using Basis = std::uint32_t;

inline constexpr int kMaxStateQubits = 14;
inline constexpr int kMaxDenseQubits = 8;

/// Amplitudes over the 2^n computational basis states. Index bit b holds the
/// measurement outcome of qubit b, so single-bit-flip neighbours differ by one
/// index bit.
class StateVector {
 public:
  StateVector() = default;

  /// All-zero vector on n qubits. Throws ConfigError outside 1 <= n <= 14.
  explicit StateVector(int n);
  StateVector(int n, std::vector<Complex> amps);

  /// Computational basis state |z>.
  static StateVector basis(int n, Basis z);

  int qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }

  std::span<const Complex> amps() const { return amps_; }
  std::span<Complex> amps() { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](std::size_t i) { return amps_[i]; }

  double norm() const;
  std::vector<double> probabilities() const;

 private:
  int n_ = 0;
  std::vector<Complex> amps_;
};

/// n x n dense complex matrix; used for whole-circuit unitaries (n <= 8).
struct DenseUnitary {
  int n = 0;
  Eigen::MatrixXcd entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

std::size_t dimension_for(int n);

/// |+>^n: every amplitude 2^(-n/2).
StateVector make_plus_state(int n);

/// <a|b>, conjugate-linear in a.
Complex inner_product(const StateVector& a, const StateVector& b);

/// ||a - b||_2
double distance(const StateVector& a, const StateVector& b);

/// Largest singular value of a square matrix (dimension <= 256).
double spectral_norm(const Eigen::MatrixXcd& m);

/// Max |(U^dagger U - I)_ij|.
double unitarity_defect(const DenseUnitary& u);

}  // namespace msqw
