#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

#include "mutinfo/error.hpp"

namespace mutinfo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Largest Hilbert-space dimension accepted for a single factor or composite.
inline constexpr int max_dim = 64;

inline double max_abs_deviation(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double hermitian_deviation(const Matrix& m) {
  return max_abs_deviation(m, m.adjoint());
}

/// Kronecker product A ⊗ B; row index of the result is i_a * rows(B) + i_b.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Traces out factor `subsystem` (1 or 2) of an operator on H1 ⊗ H2.
inline Matrix partial_trace(const Matrix& m, int dim1, int dim2, int subsystem) {
  if (dim1 < 1 || dim2 < 1 || m.rows() != m.cols() || m.rows() != Eigen::Index(dim1) * dim2)
    throw Error(ErrorCode::dimension_mismatch,
                "partial_trace: operator of size " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + " is not on a " + std::to_string(dim1) + "x" +
                    std::to_string(dim2) + " tensor space");
  if (subsystem == 2) {
    Matrix out = Matrix::Zero(dim1, dim1);
    for (int i = 0; i < dim1; ++i)
      for (int j = 0; j < dim1; ++j) out(i, j) = m.block(i * dim2, j * dim2, dim2, dim2).trace();
    return out;
  }
  if (subsystem == 1) {
    Matrix out = Matrix::Zero(dim2, dim2);
    for (int i = 0; i < dim1; ++i) out += m.block(i * dim2, i * dim2, dim2, dim2);
    return out;
  }
  throw Error(ErrorCode::invalid_argument,
              "partial_trace: subsystem must be 1 or 2, got " + std::to_string(subsystem));
}

/// Applies a real function to the spectrum of a Hermitian matrix.
template <typename F>
Matrix hermitian_function(const Matrix& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector mapped = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * mapped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix hermitian_sqrt(const Matrix& h) {
  return hermitian_function(h, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

/// Matrix of i.i.d. standard complex Gaussians (real and imaginary parts N(0, 1/2)).
inline Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

/// Haar-distributed isometry with `cols` orthonormal columns in C^rows
/// (QR of a Ginibre matrix with the R-diagonal phases removed).
inline Matrix haar_isometry(int rows, int cols, Rng& rng) {
  Matrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

inline Matrix haar_unitary(int n, Rng& rng) { return haar_isometry(n, n, rng); }

/// exp(i·ε·H) for a random Hermitian H with unit Frobenius norm.
inline Matrix random_unitary_near_identity(int n, double step, Rng& rng) {
  Matrix g = ginibre(n, n, rng);
  Matrix h = (g + g.adjoint()) * 0.5;
  const double norm = h.norm();
  if (norm > 0.0) h /= norm;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(n);
  for (int k = 0; k < n; ++k) phases(k) = std::polar(1.0, step * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace mutinfo
