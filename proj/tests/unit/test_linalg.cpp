#include <gtest/gtest.h>

#include <random>

#include "hullscope/linalg.hpp"

using namespace hullscope;
using namespace hullscope::linalg;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = n(rng);
  return m;
}

}  // namespace

TEST(RidgeLeastSquares, MatchesNormalEquations) {
  std::mt19937_64 rng(1);
  const Matrix a = random_matrix(rng, 30, 6);
  const Vector b = random_matrix(rng, 30, 1).col(0);
  const Vector x0 = ridge_least_squares(a, b, 0.0);
  const Vector ref0 = (a.transpose() * a).ldlt().solve(a.transpose() * b);
  EXPECT_LE((x0 - ref0).norm(), 1e-10);
  const Vector x1 = ridge_least_squares(a, b, 0.3);
  const Vector ref1 = (a.transpose() * a + 0.3 * Matrix::Identity(6, 6)).ldlt().solve(a.transpose() * b);
  EXPECT_LE((x1 - ref1).norm(), 1e-10);
}

TEST(RidgeLeastSquares, RankDeficientWithoutRidgeAdvisesRidge) {
  Matrix a(3, 2);
  a << 1, 2, 2, 4, 3, 6;
  const Vector b = Vector::Ones(3);
  try {
    ridge_least_squares(a, b, 0.0);
    FAIL() << "expected RankDeficient";
  } catch (const RankDeficient& e) {
    EXPECT_NE(std::string(e.what()).find("ridge > 0"), std::string::npos);
  }
  EXPECT_NO_THROW(ridge_least_squares(a, b, 1e-8));
}

TEST(ConstrainedLeastSquares, MatchesKktSolution) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 25, 8);
    const Vector b = random_matrix(rng, 25, 1).col(0);
    const Matrix c = random_matrix(rng, 3, 8);
    const Vector d = random_matrix(rng, 3, 1).col(0);
    Matrix kkt = Matrix::Zero(11, 11);
    kkt.topLeftCorner(8, 8) = 2.0 * a.transpose() * a;
    kkt.topRightCorner(8, 3) = c.transpose();
    kkt.bottomLeftCorner(3, 8) = c;
    Vector rhs(11);
    rhs << 2.0 * a.transpose() * b, d;
    const Vector ref = kkt.fullPivLu().solve(rhs).head(8);

    const auto sol = constrained_least_squares(a, b, c, d);
    EXPECT_TRUE(sol.constraints_consistent);
    EXPECT_EQ(sol.constraint_rank, 3);
    EXPECT_LE((sol.x - ref).norm(), 1e-8 * std::max(1.0, ref.norm()));
    EXPECT_LE(sol.constraint_residual, 1e-10);
    EXPECT_NEAR(sol.objective_residual, (a * sol.x - b).norm(), 1e-10);
  }
}

TEST(ConstrainedLeastSquares, FreeDirectionsSpanConstraintNullSpace) {
  std::mt19937_64 rng(3);
  const Matrix a = random_matrix(rng, 4, 10);  // underdetermined objective
  const Matrix c = random_matrix(rng, 2, 10);
  const auto sol = constrained_least_squares(a, Vector::Zero(4), c, Vector::Ones(2));
  ASSERT_EQ(sol.free_directions.cols(), 8);
  EXPECT_LE((c * sol.free_directions).norm(), 1e-10);
  EXPECT_LE((sol.free_directions.transpose() * sol.free_directions - Matrix::Identity(8, 8)).norm(), 1e-10);
  for (Eigen::Index j = 0; j < 8; ++j) {
    EXPECT_NEAR(sol.free_gains(j), (a * sol.free_directions.col(j)).norm(), 1e-10);
    if (j > 0) {
      EXPECT_LE(sol.free_gains(j - 1), sol.free_gains(j) + 1e-12);
    }
  }
  // four directions are invisible to both A and C
  EXPECT_LE(sol.free_gains(3), 1e-10);
  EXPECT_GT(sol.free_gains(4), 1e-6);
  // minimum norm among minimisers: orthogonal to zero-gain directions
  EXPECT_LE((sol.free_directions.leftCols(4).transpose() * sol.x).norm(), 1e-10);
}

TEST(ConstrainedLeastSquares, InconsistentConstraintsAreFlagged) {
  Matrix c(2, 3);
  c << 1, 0, 0, 1, 0, 0;
  Vector d(2);
  d << 1, 2;
  const auto sol = constrained_least_squares(Matrix::Identity(3, 3), Vector::Zero(3), c, d);
  EXPECT_FALSE(sol.constraints_consistent);
  EXPECT_EQ(sol.constraint_rank, 1);
  EXPECT_NEAR(sol.constraint_residual, std::sqrt(0.5), 1e-10);
}
