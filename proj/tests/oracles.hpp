// Independent reference computations for the unit tests. Nothing here calls
// into the propagators under test.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "msqw/model.hpp"
#include "msqw/state.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

/// Single-qubit operator on qubit `target`; qubit 0 is the least significant
/// index bit, i.e. the rightmost Kronecker factor.
inline Mat embed(const Mat& op, int target, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) out = kron(out, q == target ? op : Mat::Identity(2, 2));
  return out;
}

inline Mat pauli_x() {
  Mat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

inline Mat pauli_z() {
  Mat z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

/// -sum_j X_j by Kronecker products.
inline Mat driver_matrix(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int j = 0; j < n; ++j) h -= embed(pauli_x(), j, n);
  return h;
}

/// -1/2 sum_{a != b} J_ab Z_a Z_b - sum_b h_b Z_b, built from Pauli matrices
/// with both orderings of every pair.
inline Mat problem_matrix(const msqw::SpinGlassInstance& inst) {
  const int n = inst.n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (const auto& c : inst.couplings) {
    const Mat zz = embed(pauli_z(), c.a, n) * embed(pauli_z(), c.b, n);
    h -= 0.5 * c.j * zz;  // (a, b)
    h -= 0.5 * c.j * zz;  // (b, a)
  }
  for (int b = 0; b < n; ++b) h -= inst.fields[static_cast<std::size_t>(b)] * embed(pauli_z(), b, n);
  return h;
}

/// Energy of one spin configuration, enumerating every ordered pair a != b.
inline double enumerate_energy(const msqw::SpinGlassInstance& inst, unsigned z) {
  const int n = inst.n;
  std::vector<std::vector<double>> jmat(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (const auto& c : inst.couplings) {
    jmat[static_cast<std::size_t>(c.a)][static_cast<std::size_t>(c.b)] = c.j;
    jmat[static_cast<std::size_t>(c.b)][static_cast<std::size_t>(c.a)] = c.j;
  }
  auto s = [&](int q) { return ((z >> q) & 1U) ? -1.0 : 1.0; };
  double e = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b) e -= 0.5 * jmat[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * s(a) * s(b);
    }
  }
  for (int b = 0; b < n; ++b) e -= inst.fields[static_cast<std::size_t>(b)] * s(b);
  return e;
}

/// exp(m) by Taylor series with scaling and squaring.
inline Mat expm_taylor(const Mat& m) {
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm1 * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Mat a = m * scale;
  Mat term = Mat::Identity(m.rows(), m.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

/// exp(-i t H) for Hermitian H by Eigen's complex self-adjoint solver.
inline Mat expm_hermitian(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  Vec phases(h.rows());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -eig.eigenvalues()(k) * t);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Largest singular value by power iteration on M^dagger M.
inline double power_iteration_norm(const Mat& m, int max_iter = 100000, double tol = 1e-14) {
  const Mat g = m.adjoint() * m;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Vec v(g.cols());
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex(nd(rng), nd(rng));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = g * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double next = std::real(w.dot(g * w));
    v = w;
    if (std::abs(next - lambda) <= tol * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

inline Vec to_eigen(const msqw::StateVector& s) {
  Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

inline double l2(const Vec& a, const msqw::StateVector& b) { return (a - to_eigen(b)).norm(); }

inline msqw::StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  msqw::StateVector s(n);
  double norm = 0.0;
  for (auto& a : s.amps()) {
    a = Complex(nd(rng), nd(rng));
    norm += std::norm(a);
  }
  for (auto& a : s.amps()) a /= std::sqrt(norm);
  return s;
}

}  // namespace oracle
