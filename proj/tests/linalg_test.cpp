#include "ompsd/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "ompsd/errors.hpp"
#include "oracles.hpp"

namespace ompsd {
namespace {

double orthogonality_defect(const Matrix& u) {
  return (u.transpose() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

TEST(GenerateOrthogonal, OneByOneIsPlusOrMinusOne) {
  int plus = 0;
  constexpr int kDraws = 4000;
  for (int i = 0; i < kDraws; ++i) {
    Rng rng(static_cast<std::uint64_t>(i));
    const Matrix u = generate_orthogonal(1, rng);
    ASSERT_EQ(u.rows(), 1);
    ASSERT_EQ(std::abs(u(0, 0)), 1.0);
    plus += u(0, 0) > 0 ? 1 : 0;
  }
  // Binomial(4000, 1/2): 3 standard errors is about 95.
  EXPECT_NEAR(plus, kDraws / 2, 95);
}

TEST(GenerateOrthogonal, IsOrthogonal) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    EXPECT_LT(orthogonality_defect(generate_orthogonal(4, rng)), 1e-10);
    EXPECT_LT(orthogonality_defect(generate_orthogonal(64, rng)), 1e-10);
  }
}

TEST(GenerateOrthogonal, TopLeftEntryHasZeroMean) {
  // Haar: U_11 has mean 0 and variance 1/L.
  constexpr int kDraws = 10000;
  Rng rng(77);
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) sum += generate_orthogonal(8, rng)(0, 0);
  const double se = std::sqrt(1.0 / 8.0 / kDraws);
  EXPECT_LT(std::abs(sum / kDraws), 3.0 * se);
}

TEST(GenerateOrthogonal, SameSeedSameMatrix) {
  Rng a(12345), b(12345);
  const Matrix ua = generate_orthogonal(16, a);
  const Matrix ub = generate_orthogonal(16, b);
  EXPECT_EQ(std::memcmp(ua.data(), ub.data(), sizeof(double) * ua.size()), 0);
}

TEST(BuildMeasurementMatrix, UnitColumnNorms) {
  Rng rng(9);
  const Matrix a = build_measurement_matrix(256, 128, rng);
  ASSERT_EQ(a.rows(), 128);
  ASSERT_EQ(a.cols(), 256);
  for (Eigen::Index c = 0; c < a.cols(); ++c) EXPECT_NEAR(a.col(c).norm(), 1.0, 1e-12);
}

TEST(BuildMeasurementMatrix, FullSelectionIsOrthogonal) {
  Rng rng(10);
  EXPECT_LT(orthogonality_defect(build_measurement_matrix(32, 32, rng)), 1e-10);
}

TEST(BuildMeasurementMatrix, RowsAreOrthogonalAndRankIsK) {
  Rng rng(11);
  const Matrix a = build_measurement_matrix(4, 2, rng);
  Eigen::FullPivLU<Matrix> lu(a);
  EXPECT_EQ(lu.rank(), 2);
}

TEST(BuildMeasurementMatrix, RejectsBadSizes) {
  Rng rng(1);
  EXPECT_THROW(build_measurement_matrix(4, 5, rng), ParamError);
  EXPECT_THROW(build_measurement_matrix(4, 0, rng), ParamError);
}

TEST(ThinQr, SingleColumn) {
  Matrix m(2, 1);
  m << 3, 4;
  const QrFactors f = thin_qr(m);
  EXPECT_NEAR(f.q(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(f.q(1, 0), 0.8, 1e-15);
  EXPECT_NEAR(f.r(0, 0), 5.0, 1e-15);
}

TEST(ThinQr, Identity) {
  const QrFactors f = thin_qr(Matrix::Identity(3, 3));
  EXPECT_LT((f.q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((f.r - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ThinQr, OrthonormalInputGivesIdentityR) {
  Rng rng(3);
  const Matrix m = testing::gram_schmidt(testing::gaussian(6, 3, rng));
  const QrFactors f = thin_qr(m);
  EXPECT_LT((f.r - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ThinQr, FactorInvariants) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t cols = 1 + rng.below(12);
    const std::size_t rows = cols + rng.below(20);
    const Matrix m = testing::gaussian(rows, cols, rng);
    const QrFactors f = thin_qr(m);
    EXPECT_LT(orthogonality_defect(f.q), 1e-10);
    EXPECT_LT((f.q * f.r - m).norm(), 1e-9);
    for (Eigen::Index i = 0; i < f.r.rows(); ++i) {
      EXPECT_GT(f.r(i, i), 0.0);
      for (Eigen::Index j = 0; j < i; ++j) EXPECT_EQ(f.r(i, j), 0.0);
    }
  }
}

TEST(ThinQr, Deterministic) {
  Rng rng(5);
  const Matrix m = testing::gaussian(20, 7, rng);
  const QrFactors a = thin_qr(m), b = thin_qr(m);
  EXPECT_EQ(std::memcmp(a.q.data(), b.q.data(), sizeof(double) * a.q.size()), 0);
  EXPECT_EQ(std::memcmp(a.r.data(), b.r.data(), sizeof(double) * a.r.size()), 0);
}

TEST(ThinQr, RankDeficientThrows) {
  Matrix m(3, 2);
  m << 1, 2, 2, 4, 3, 6;
  EXPECT_THROW(thin_qr(m), RankDeficient);
  EXPECT_THROW(thin_qr(Matrix::Zero(3, 1)), RankDeficient);
  EXPECT_THROW(thin_qr(Matrix::Ones(2, 3)), ParamError);
}

TEST(LeastSquares, IdentitySystem) {
  Vector y(3);
  y << 1, -2, 0;
  const Vector v = least_squares(Matrix::Identity(3, 3), y);
  EXPECT_LT((v - y).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LeastSquares, MeanOfTwoObservations) {
  const Matrix a = Matrix::Ones(2, 1);
  Vector y(2);
  y << 1, 3;
  EXPECT_NEAR(least_squares(a, y)(0), 2.0, 1e-15);
}

TEST(LeastSquares, ConsistentSystemRecoversSolution) {
  Rng rng(6);
  const Matrix a = testing::gaussian(8, 3, rng);
  Vector x0(3);
  x0 << 0.5, -1.25, 2.0;
  EXPECT_LT((least_squares(a, a * x0) - x0).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(LeastSquares, NormalEquationsHold) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t cols = 1 + rng.below(10);
    const Matrix a = testing::gaussian(cols + 5 + rng.below(10), cols, rng);
    const Vector y = testing::gaussian(static_cast<std::size_t>(a.rows()), 1, rng);
    const Vector v = least_squares(a, y);
    EXPECT_LT((a.transpose() * (y - a * v)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(IncrementalQr, MatchesBatchFactorization) {
  Rng rng(8);
  const Matrix a = testing::gaussian(40, 15, rng);
  const Vector y = testing::gaussian(40, 1, rng);
  IncrementalQr inc(40, 15, y);
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    inc.append(a.col(c));
    const Matrix sub = a.leftCols(c + 1);
    EXPECT_LT((inc.solve() - least_squares(sub, y)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((inc.r() - thin_qr(sub).r).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(IncrementalQr, DependentColumnThrows) {
  Vector y = Vector::Ones(3);
  IncrementalQr inc(3, 2, y);
  Vector c(3);
  c << 1, 2, 3;
  inc.append(c);
  EXPECT_THROW(inc.append(2.0 * c), RankDeficient);
}

}  // namespace
}  // namespace ompsd
