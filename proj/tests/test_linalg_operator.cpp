#include <gtest/gtest.h>

#include "mutinfo/operator.hpp"
#include "oracles.hpp"

using namespace mutinfo;

namespace {

Matrix random_matrix(int r, int c, Rng& rng) { return ginibre(r, c, rng); }

}  // namespace

TEST(Tensor, MatchesElementwiseKronecker) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_matrix(2 + trial % 2, 2, rng);
    const Matrix b = random_matrix(3, 1 + trial % 3, rng);
    EXPECT_LT(max_abs_deviation(tensor(a, b), oracle::kron(a, b)), 1e-14);
  }
}

TEST(PartialTrace, MatchesIndexLoops) {
  Rng rng(2);
  for (int d1 = 1; d1 <= 3; ++d1)
    for (int d2 = 1; d2 <= 4; ++d2) {
      const Matrix m = random_matrix(d1 * d2, d1 * d2, rng);
      EXPECT_LT(max_abs_deviation(partial_trace(m, d1, d2, 2), oracle::partial_trace(m, d1, d2, 1)), 1e-13);
      EXPECT_LT(max_abs_deviation(partial_trace(m, d1, d2, 1), oracle::partial_trace(m, d1, d2, 2)), 1e-13);
    }
}

TEST(PartialTrace, ProductStateFactors) {
  std::mt19937_64 gen(3);
  const Matrix a = oracle::random_state(2, gen);
  const Matrix b = oracle::random_state(3, gen);
  const Matrix ab = tensor(a, b);
  EXPECT_LT(max_abs_deviation(partial_trace(ab, 2, 3, 2), a), 1e-14);
  EXPECT_LT(max_abs_deviation(partial_trace(ab, 2, 3, 1), b), 1e-14);
}

TEST(PartialTrace, RejectsBadShapes) {
  const Matrix m = Matrix::Identity(6, 6);
  try {
    partial_trace(m, 4, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  EXPECT_THROW(partial_trace(m, 2, 3, 3), Error);
}

TEST(HaarIsometry, HasOrthonormalColumns) {
  Rng rng(4);
  for (int rows = 1; rows <= 5; ++rows)
    for (int cols = 1; cols <= rows; ++cols) {
      const Matrix v = haar_isometry(rows, cols, rng);
      EXPECT_LT(max_abs_deviation(v.adjoint() * v, Matrix::Identity(cols, cols)), 1e-12);
    }
}

TEST(HaarIsometry, SameSeedSameDraw) {
  Rng a(99), b(99);
  EXPECT_EQ(max_abs_deviation(haar_unitary(4, a), haar_unitary(4, b)), 0.0);
}

TEST(NearIdentityUnitary, IsUnitaryAndClose) {
  Rng rng(5);
  const Matrix u = random_unitary_near_identity(3, 1e-3, rng);
  EXPECT_LT(max_abs_deviation(u.adjoint() * u, Matrix::Identity(3, 3)), 1e-12);
  EXPECT_LT(max_abs_deviation(u, Matrix::Identity(3, 3)), 2e-3);
}

TEST(ValidateDensity, AcceptsStates) {
  std::mt19937_64 gen(6);
  for (int d = 1; d <= 5; ++d) {
    const Matrix rho = oracle::random_state(d, gen);
    const auto op = validate_density(rho);
    EXPECT_EQ(op.dim(), d);
    EXPECT_LT(max_abs_deviation(op.matrix(), rho), 1e-12);
    EXPECT_NEAR(op.eigenvalues().sum(), 1.0, 1e-12);
  }
}

TEST(ValidateDensity, ReportsEachViolation) {
  auto code_of = [](const Matrix& m) {
    try {
      validate_density(m);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_argument;
  };
  Matrix not_herm(2, 2);
  not_herm << 0.5, Complex(0.1, 0.0), Complex(0.2, 0.0), 0.5;
  EXPECT_EQ(code_of(not_herm), ErrorCode::not_hermitian);

  Matrix trace2 = Matrix::Identity(2, 2);
  EXPECT_EQ(code_of(trace2), ErrorCode::not_unit_trace);

  Matrix negative(2, 2);
  negative << 1.2, 0.0, 0.0, -0.2;
  EXPECT_EQ(code_of(negative), ErrorCode::not_positive);

  EXPECT_EQ(code_of(Matrix::Zero(2, 3)), ErrorCode::dimension_mismatch);
  EXPECT_EQ(code_of(Matrix::Identity(65, 65) / 65.0), ErrorCode::invalid_argument);
}

TEST(ValidateDensity, ToleratesRoundoffWithinPinnedBounds) {
  Matrix m = Matrix::Identity(2, 2) * 0.5;
  m(0, 1) = Complex(0.0, 5e-11);
  m(1, 0) = Complex(0.0, -5e-11);
  m(0, 0) += 5e-11;
  EXPECT_NO_THROW(validate_density(m));
  m(0, 0) += 2e-10;
  EXPECT_THROW(validate_density(m), Error);
}

TEST(Eigenspaces, ClusterDegenerateValues) {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << Complex(0.3), Complex(0.3), Complex(0.4), Complex(0.0);
  const auto rho = validate_density(m);
  const auto spaces = eigenspaces(rho);
  ASSERT_EQ(spaces.size(), 3u);
  EXPECT_NEAR(spaces[0].value, 0.4, 1e-14);
  EXPECT_EQ(spaces[1].rank(), 2);
  EXPECT_NEAR(spaces[2].value, 0.0, 1e-14);
  EXPECT_FALSE(has_unique_schatten(rho));
}

TEST(Eigenspaces, CanonicalBasisIsStandardWhenPossible) {
  Matrix m = Matrix::Identity(3, 3) / 3.0;
  const auto spaces = eigenspaces(validate_density(m));
  ASSERT_EQ(spaces.size(), 1u);
  EXPECT_LT(max_abs_deviation(spaces[0].basis.cwiseAbs().cast<Complex>(), Matrix::Identity(3, 3)), 1e-12);
}

TEST(SpectralDecomposition, Recomposes) {
  std::mt19937_64 gen(7);
  for (int d = 1; d <= 5; ++d) {
    const auto rho = validate_density(oracle::random_state(d, gen));
    const auto spec = spectral_decompose(rho);
    EXPECT_LT(max_abs_deviation(spec.recompose(), rho.matrix()), 1e-9);
    for (std::size_t k = 0; k < spec.projectors.size(); ++k) {
      const Matrix& p = spec.projectors[k];
      EXPECT_LT(max_abs_deviation(p * p, p), 1e-10);
    }
  }
}

TEST(SchattenDecomposition, OrthonormalAndRecomposes) {
  std::mt19937_64 gen(8);
  for (int d = 1; d <= 5; ++d) {
    const auto rho = validate_density(oracle::random_state(d, gen));
    const auto e = schatten_decompose(rho);
    EXPECT_EQ(e.size(), std::size_t(d));
    EXPECT_LT(max_abs_deviation(e.basis().adjoint() * e.basis(), Matrix::Identity(d, d)), 1e-10);
    EXPECT_LT(max_abs_deviation(e.recompose(), rho.matrix()), 1e-9);
    EXPECT_TRUE(has_unique_schatten(rho));
  }
}

TEST(SchattenDecomposition, SeededRotationsStayValidAndReproducible) {
  const auto rho = DensityOperator::maximally_mixed(3);
  const auto a = schatten_decompose(rho, DegeneracyStrategy::seeded_random, 11);
  const auto b = schatten_decompose(rho, DegeneracyStrategy::seeded_random, 11);
  const auto c = schatten_decompose(rho, DegeneracyStrategy::seeded_random, 12);
  EXPECT_LT(max_abs_deviation(a.recompose(), rho.matrix()), 1e-12);
  EXPECT_EQ(max_abs_deviation(a.basis(), b.basis()), 0.0);
  EXPECT_GT(max_abs_deviation(a.basis(), c.basis()), 1e-3);
}

TEST(DensityOperator, PureStateFactory) {
  Vector psi(2);
  psi << Complex(3.0), Complex(0.0, 4.0);
  const auto rho = DensityOperator::pure(psi);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 9.0 / 25.0, 1e-14);
  EXPECT_NEAR(rho.eigenvalues().maxCoeff(), 1.0, 1e-14);
  EXPECT_THROW(DensityOperator::pure(Vector::Zero(2)), Error);
}
