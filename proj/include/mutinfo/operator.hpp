#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mutinfo/linalg.hpp"

namespace mutinfo {

namespace tolerance {
inline constexpr double hermitian = 1e-10;
inline constexpr double unit_trace = 1e-10;
inline constexpr double positivity = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate eigenvalue.
inline constexpr double eigenvalue_cluster = 1e-8;
inline constexpr double reconstruction = 1e-9;
}  // namespace tolerance

/// Hermitian, positive semidefinite, unit-trace matrix together with its
/// eigendecomposition (ascending eigenvalues, clamped to [0, 1]).
class DensityOperator {
 public:
  /// Builds from a matrix known to be a state up to rounding: the Hermitian
  /// part is taken, negative eigenvalues are clamped and the trace renormalized.
  static DensityOperator from_trusted(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw Error(ErrorCode::dimension_mismatch, "density operator must be a nonempty square matrix");
    Matrix h = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    RealVector values = es.eigenvalues().cwiseMax(0.0);
    const double total = values.sum();
    if (!(total > 0.0))
      throw Error(ErrorCode::not_positive, "density operator has no positive spectral weight");
    values /= total;
    values = values.cwiseMin(1.0);
    Matrix rebuilt = es.eigenvectors() * values.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return DensityOperator(std::move(rebuilt), std::move(values), es.eigenvectors());
  }

  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
  const Matrix& eigenvectors() const noexcept { return eigenvectors_; }

  static DensityOperator maximally_mixed(int dim) {
    return from_trusted(Matrix::Identity(dim, dim) / double(dim));
  }

  static DensityOperator pure(const Vector& psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0)) throw Error(ErrorCode::invalid_argument, "pure state vector is zero");
    Vector v = psi / norm;
    return from_trusted(v * v.adjoint());
  }

 private:
  DensityOperator(Matrix m, RealVector values, Matrix vectors)
      : matrix_(std::move(m)), eigenvalues_(std::move(values)), eigenvectors_(std::move(vectors)) {}

  Matrix matrix_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
};

/// Checks the state invariants and returns the validated operator.
inline DensityOperator validate_density(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw Error(ErrorCode::dimension_mismatch,
                "expected a nonempty square matrix, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  if (m.rows() > max_dim)
    throw Error(ErrorCode::invalid_argument,
                "dimension " + std::to_string(m.rows()) + " exceeds supported maximum " +
                    std::to_string(max_dim));
  const double herm = hermitian_deviation(m);
  if (herm > tolerance::hermitian)
    throw Error(ErrorCode::not_hermitian,
                "matrix is not Hermitian: max |M - M^dagger| = " + std::to_string(herm));
  const double trace_dev = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_dev > tolerance::unit_trace)
    throw Error(ErrorCode::not_unit_trace,
                "trace deviates from 1 by " + std::to_string(trace_dev));
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tolerance::positivity)
    throw Error(ErrorCode::not_positive,
                "matrix has negative eigenvalue " + std::to_string(min_eig));
  return DensityOperator::from_trusted(m);
}

/// One distinct eigenvalue with an orthonormal basis (columns) of its eigenspace.
struct Eigenspace {
  double value = 0.0;
  Matrix basis;
  int rank() const noexcept { return static_cast<int>(basis.cols()); }
};

/// Groups the spectrum of `rho` into eigenspaces, largest eigenvalue first.
/// Each basis is canonical: Gram-Schmidt over the projected standard basis
/// vectors, pivoting on the largest residual (lowest index on ties).
inline std::vector<Eigenspace> eigenspaces(const DensityOperator& rho,
                                           double cluster_tol = tolerance::eigenvalue_cluster) {
  const RealVector& values = rho.eigenvalues();
  const Matrix& vectors = rho.eigenvectors();
  const int d = rho.dim();
  std::vector<Eigenspace> out;
  int start = 0;
  while (start < d) {
    int stop = start + 1;
    while (stop < d && values(stop) - values(stop - 1) <= cluster_tol) ++stop;
    const int rank = stop - start;
    Matrix raw = vectors.middleCols(start, rank);
    Matrix projector = raw * raw.adjoint();

    Matrix basis(d, rank);
    std::vector<int> pivots;
    Matrix residual = projector;  // column j = P e_j minus components found so far
    for (int r = 0; r < rank; ++r) {
      int best = -1;
      double best_norm = -1.0;
      for (int j = 0; j < d; ++j) {
        const double n = residual.col(j).norm();
        if (n > best_norm + 1e-12) {
          best_norm = n;
          best = j;
        }
      }
      Vector v = residual.col(best) / best_norm;
      basis.col(r) = v;
      pivots.push_back(best);
      residual -= v * (v.adjoint() * residual);
    }
    std::vector<int> order(rank);
    for (int r = 0; r < rank; ++r) order[r] = r;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return pivots[a] < pivots[b]; });
    Matrix sorted(d, rank);
    for (int r = 0; r < rank; ++r) sorted.col(r) = basis.col(order[r]);

    out.push_back({values.segment(start, rank).mean(), std::move(sorted)});
    start = stop;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

/// Distinct eigenvalues with their eigenspace projectors.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Matrix> projectors;

  Matrix recompose() const {
    Matrix out = Matrix::Zero(projectors.front().rows(), projectors.front().cols());
    for (std::size_t k = 0; k < projectors.size(); ++k) out += eigenvalues[k] * projectors[k];
    return out;
  }
};

inline SpectralDecomposition spectral_decompose(const DensityOperator& rho,
                                                double cluster_tol = tolerance::eigenvalue_cluster) {
  SpectralDecomposition out;
  for (const auto& space : eigenspaces(rho, cluster_tol)) {
    out.eigenvalues.push_back(space.value);
    out.projectors.push_back(space.basis * space.basis.adjoint());
  }
  return out;
}

enum class DegeneracyStrategy { canonical, seeded_random };

/// Rank-one refinement rho = sum_k weights[k] |v_k><v_k| with orthonormal v_k.
struct SchattenDecomposition {
  std::vector<double> weights;
  std::vector<Vector> vectors;

  std::size_t size() const noexcept { return weights.size(); }
  int dim() const noexcept { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }
  Matrix projector(std::size_t k) const { return vectors[k] * vectors[k].adjoint(); }

  /// Columns are the decomposition vectors.
  Matrix basis() const {
    Matrix b(dim(), static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) b.col(k) = vectors[k];
    return b;
  }

  Matrix recompose() const {
    Matrix out = Matrix::Zero(dim(), dim());
    for (std::size_t k = 0; k < size(); ++k) out += weights[k] * projector(k);
    return out;
  }
};

/// Schatten decomposition whose degenerate eigenspace bases are rotated by
/// the given unitaries (one per eigenspace of matching rank; empty = canonical).
inline SchattenDecomposition schatten_from_rotations(const std::vector<Eigenspace>& spaces,
                                                     const std::vector<Matrix>& rotations) {
  SchattenDecomposition out;
  for (std::size_t s = 0; s < spaces.size(); ++s) {
    Matrix basis = spaces[s].basis;
    if (s < rotations.size() && rotations[s].size() > 0) basis = basis * rotations[s];
    for (int r = 0; r < spaces[s].rank(); ++r) {
      out.weights.push_back(spaces[s].value);
      out.vectors.push_back(basis.col(r));
    }
  }
  return out;
}

inline SchattenDecomposition schatten_decompose(const DensityOperator& rho,
                                                DegeneracyStrategy strategy = DegeneracyStrategy::canonical,
                                                std::uint64_t seed = 0,
                                                double cluster_tol = tolerance::eigenvalue_cluster) {
  const auto spaces = eigenspaces(rho, cluster_tol);
  std::vector<Matrix> rotations(spaces.size());
  if (strategy == DegeneracyStrategy::seeded_random) {
    Rng rng(seed);
    for (std::size_t s = 0; s < spaces.size(); ++s)
      if (spaces[s].rank() > 1) rotations[s] = haar_unitary(spaces[s].rank(), rng);
  }
  return schatten_from_rotations(spaces, rotations);
}

/// True when every eigenvalue above `floor` is nondegenerate, i.e. the
/// Schatten decomposition is unique on the support.
inline bool has_unique_schatten(const DensityOperator& rho, double floor = tolerance::positivity,
                                double cluster_tol = tolerance::eigenvalue_cluster) {
  for (const auto& space : eigenspaces(rho, cluster_tol))
    if (space.value > floor && space.rank() > 1) return false;
  return true;
}

}  // namespace mutinfo
