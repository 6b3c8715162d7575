#include <gtest/gtest.h>

#include <random>

#include "hull_oracle.hpp"
#include "hullscope/hull.hpp"

using namespace hullscope;
using namespace hullscope::hull;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = n(rng);
  return m;
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  return scale * random_matrix(rng, d, 1).col(0);
}

void expect_projection_invariants(const HullProjection& p, const Vector& q, const Matrix& pts) {
  EXPECT_GE(p.coefficients.minCoeff(), 0.0);
  EXPECT_NEAR(p.coefficients.sum(), 1.0, 1e-12);
  EXPECT_LE((pts.transpose() * p.coefficients - p.projection).norm(), 1e-10);
  EXPECT_NEAR((p.projection - q).norm(), p.distance, 1e-12);
  if (p.certificate) {
    EXPECT_TRUE(certificate_separates(*p.certificate, q, pts));
  }
}

Matrix unit_triangle() {
  Matrix t(3, 2);
  t << 0, 0, 1, 0, 0, 1;
  return t;
}

}  // namespace

TEST(Projection, VertexQueryHasZeroDistance) {
  std::mt19937_64 rng(1);
  const Matrix pts = random_matrix(rng, 6, 3);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const Vector q = pts.row(i).transpose();
    const auto p = project_onto_hull(q, pts);
    EXPECT_TRUE(p.converged());
    EXPECT_LE(p.distance, 1e-8);
    EXPECT_FALSE(p.certificate.has_value());
    expect_projection_invariants(p, q, pts);
  }
}

TEST(Projection, SimplexCentroidIsInside) {
  for (Eigen::Index d : {2, 5, 12}) {
    const Matrix pts = Matrix::Identity(d, d);
    const Vector q = Vector::Constant(d, 1.0 / static_cast<double>(d));
    const auto p = project_onto_hull(q, pts);
    EXPECT_LE(p.distance, 1e-8);
    EXPECT_EQ(membership(q, pts).status, Membership::InHull);
  }
}

TEST(Projection, AnalyticExteriorCase) {
  Vector q(2);
  q << 2, 0;
  const auto p = project_onto_hull(q, unit_triangle());
  EXPECT_NEAR(p.distance, 1.0, 1e-9);
  EXPECT_NEAR(p.projection(0), 1.0, 1e-9);
  EXPECT_NEAR(p.projection(1), 0.0, 1e-9);
  ASSERT_TRUE(p.certificate.has_value());
  EXPECT_NEAR(p.certificate->normal(0) / p.certificate->normal.norm(), 1.0, 1e-9);
  EXPECT_NEAR(p.certificate->normal(1), 0.0, 1e-9);
  expect_projection_invariants(p, q, unit_triangle());
  EXPECT_NEAR(distance_to_hull(q, unit_triangle()), 1.0, 1e-9);

  const auto m = membership(q, unit_triangle());
  EXPECT_EQ(m.status, Membership::OutOfHull);
  ASSERT_TRUE(m.certificate.has_value());
  EXPECT_GT(m.certificate->signed_value(q), 0.0);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_LE(m.certificate->signed_value(unit_triangle().row(i).transpose()), 0.0);
}

TEST(Projection, MatchesBruteForceOracleInThreeD) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix pts = random_matrix(rng, 5, 3);
    const Vector q = random_vector(rng, 3, 1.5);
    const auto p = project_onto_hull(q, pts);
    ASSERT_TRUE(p.converged());
    EXPECT_NEAR(p.distance, oracle::brute_force_hull_distance(q, pts), 1e-6);
    expect_projection_invariants(p, q, pts);
  }
}

TEST(Projection, OracleEquivalenceOnSmallInstances) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> nd(1, 8), dd(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix pts = random_matrix(rng, nd(rng), dd(rng));
    const Vector q = random_vector(rng, pts.cols(), 2.0);
    const auto p = project_onto_hull(q, pts);
    ASSERT_TRUE(p.converged()) << "trial " << trial;
    EXPECT_NEAR(p.distance, oracle::brute_force_hull_distance(q, pts), 1e-6) << "trial " << trial;
  }
}

TEST(Projection, DegenerateInputs) {
  Matrix dup(4, 2);
  dup << 1, 1, 1, 1, 1, 1, 1, 1;
  Vector q(2);
  q << 4, 5;
  EXPECT_NEAR(project_onto_hull(q, dup).distance, 5.0, 1e-9);

  Matrix collinear(3, 2);
  collinear << 0, 0, 1, 1, 2, 2;
  q << 2, 0;
  EXPECT_NEAR(project_onto_hull(q, collinear).distance, std::sqrt(2.0), 1e-9);

  Vector bad(2);
  bad << std::numeric_limits<double>::infinity(), 0;
  EXPECT_THROW(project_onto_hull(bad, collinear), InvalidArgument);
  EXPECT_THROW(project_onto_hull(Vector::Zero(3), collinear), InvalidArgument);
}

TEST(Projection, UnconvergedIsExplicit) {
  std::mt19937_64 rng(4);
  const Matrix pts = random_matrix(rng, 60, 20);
  const Vector q = random_vector(rng, 20, 0.3);
  ProjectionOptions o;
  o.max_iter = 1;
  o.correction_period = 0;
  const auto p = project_onto_hull(q, pts, o);
  EXPECT_EQ(p.status, SolveStatus::Unconverged);
  EXPECT_GT(p.dual_gap, o.tol);
}

TEST(HullProperties, RigidMotionInvariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix pts = random_matrix(rng, 7, 4);
    const Vector q = random_vector(rng, 4, 2.0);
    const Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, 4, 4));
    const Matrix rot = qr.householderQ();
    const Vector shift = random_vector(rng, 4, 3.0);
    const Matrix moved = (pts * rot.transpose()).rowwise() + shift.transpose();
    const Vector qm = rot * q + shift;
    EXPECT_NEAR(project_onto_hull(q, pts).distance, project_onto_hull(qm, moved).distance, 1e-8);
  }
}

TEST(HullProperties, AddingPointsNeverIncreasesDistance) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix pts = random_matrix(rng, 6, 3);
    const Vector q = random_vector(rng, 3, 2.0);
    double prev = project_onto_hull(q, pts).distance;
    for (int add = 0; add < 4; ++add) {
      Matrix grown(pts.rows() + 1, pts.cols());
      grown << pts, random_vector(rng, 3).transpose();
      pts = grown;
      const double now = project_onto_hull(q, pts).distance;
      EXPECT_LE(now, prev + 1e-9);
      prev = now;
    }
  }
}

TEST(HullProperties, CertificatesAlwaysSeparate) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix pts = random_matrix(rng, 12, 6);
    const Vector q = random_vector(rng, 6, 1.5);
    const auto m = membership(q, pts);
    if (m.status == Membership::OutOfHull) {
      ASSERT_TRUE(m.certificate.has_value());
      EXPECT_TRUE(certificate_separates(*m.certificate, q, pts));
    }
    EXPECT_NE(m.status, Membership::Indeterminate);
  }
}

TEST(HighDimension, GaussianTestPointsAreOutsideAndAgreeWithNnls) {
  const Dataset train = standard_normal(200, 64, 1);
  const Dataset test = standard_normal(100, 64, 2);
  const auto report = extrapolation_report(train, test);
  EXPECT_EQ(report.n_outside, 100u);
  EXPECT_EQ(report.fraction_outside, 1.0);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto ref = oracle::nnls_hull_distance(test.point(i), train.points());
    ASSERT_TRUE(ref.kkt_ok);
    EXPECT_NEAR(report.distances[i], ref.distance, 1e-6 * std::max(1.0, ref.distance));
  }
}

TEST(Extrapolation, SmallExamples) {
  Matrix train(2, 1), test(2, 1);
  train << 0, 1;
  test << 0.5, 2;
  const auto r = extrapolation_report(train, test);
  EXPECT_EQ(r.n_test, 2u);
  EXPECT_EQ(r.n_outside, 1u);
  EXPECT_DOUBLE_EQ(r.fraction_outside, 0.5);
  EXPECT_NEAR(r.distances[0], 0.0, 1e-12);
  EXPECT_NEAR(r.distances[1], 1.0, 1e-9);
  EXPECT_NEAR(r.stats.median, 0.5, 1e-9);

  std::mt19937_64 rng(8);
  const Matrix pts = random_matrix(rng, 30, 3);
  const auto inside = extrapolation_report(pts, pts.topRows(10));
  EXPECT_EQ(inside.fraction_outside, 0.0);
  EXPECT_THROW(extrapolation_report(pts, Matrix::Zero(2, 4)), InvalidArgument);
}

TEST(Extrapolation, IndependentOfThreadCount) {
  std::mt19937_64 rng(9);
  const Matrix train = random_matrix(rng, 40, 5);
  const Matrix test = random_matrix(rng, 30, 5) * 1.3;
  setenv("HULLSCOPE_THREADS", "1", 1);
  const auto a = extrapolation_report(train, test);
  setenv("HULLSCOPE_THREADS", "4", 1);
  const auto b = extrapolation_report(train, test);
  unsetenv("HULLSCOPE_THREADS");
  EXPECT_EQ(a.distances, b.distances);
  EXPECT_EQ(a.n_outside, b.n_outside);
}

TEST(Summary, MedianOfEvenCount) {
  const auto s = summarize({4.0, 1.0, 3.0, 2.0});
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 4.0);
  EXPECT_EQ(s.median, 2.5);
}
