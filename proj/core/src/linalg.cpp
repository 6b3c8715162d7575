#include "hullscope/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace hullscope::linalg {

namespace {

Eigen::Index numerical_rank(const Vector& singular, double rank_tol) {
  if (singular.size() == 0) return 0;
  const double cutoff = rank_tol * singular(0);
  Eigen::Index r = 0;
  while (r < singular.size() && singular(r) > cutoff && singular(r) > 0.0) ++r;
  return r;
}

}  // namespace

Vector ridge_least_squares(const Matrix& a, const Vector& b, double ridge, double rank_tol) {
  if (a.rows() != b.size()) throw InvalidArgument("ridge_least_squares: row count mismatch");
  if (!(ridge >= 0.0)) throw InvalidArgument("ridge must be >= 0");
  if (ridge == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    qr.setThreshold(rank_tol);
    if (qr.rank() < a.cols()) {
      throw RankDeficient("rank-deficient normal system (rank " + std::to_string(qr.rank()) + " < " +
                          std::to_string(a.cols()) + " unknowns); use ridge > 0");
    }
    return qr.solve(b);
  }
  Matrix stacked(a.rows() + a.cols(), a.cols());
  stacked << a, std::sqrt(ridge) * Matrix::Identity(a.cols(), a.cols());
  Vector rhs = Vector::Zero(stacked.rows());
  rhs.head(b.size()) = b;
  return Eigen::HouseholderQR<Matrix>(stacked).solve(rhs);
}

ConstrainedSolution constrained_least_squares(const Matrix& a, const Vector& b, const Matrix& c, const Vector& d,
                                              double rank_tol) {
  const Eigen::Index n = a.cols();
  if (c.cols() != n || a.rows() != b.size() || c.rows() != d.size()) {
    throw InvalidArgument("constrained_least_squares: inconsistent dimensions");
  }

  ConstrainedSolution out;
  Vector particular = Vector::Zero(n);
  Matrix null_basis;
  if (c.rows() > 0) {
    Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Eigen::Index r = numerical_rank(svd.singularValues(), rank_tol);
    out.constraint_rank = r;
    const Matrix& v = svd.matrixV();
    if (r > 0) {
      const Vector coeffs = (svd.matrixU().leftCols(r).transpose() * d).cwiseQuotient(svd.singularValues().head(r));
      particular = v.leftCols(r) * coeffs;
    }
    null_basis = v.rightCols(n - r);
    out.constraint_residual = (c * particular - d).norm();
    out.constraints_consistent = out.constraint_residual <= 1e-8 * (1.0 + d.norm());
  } else {
    null_basis = Matrix::Identity(n, n);
  }

  const Eigen::Index k = null_basis.cols();
  Vector x = particular;
  if (k > 0) {
    const Matrix reduced = a * null_basis;
    const Vector rhs = b - a * particular;
    Eigen::BDCSVD<Matrix> svd(reduced, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const Eigen::Index r = numerical_rank(sv, rank_tol);
    Vector y = Vector::Zero(k);
    if (r > 0) {
      const Vector coeffs = (svd.matrixU().leftCols(r).transpose() * rhs).cwiseQuotient(sv.head(r));
      y = svd.matrixV().leftCols(r) * coeffs;
    }
    x += null_basis * y;

    // Columns of V are ordered by descending singular value; flip to ascending gain.
    Vector gains = Vector::Zero(k);
    gains.head(sv.size()) = sv;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return gains(i) < gains(j); });
    const Matrix rotated = null_basis * svd.matrixV();
    out.free_directions.resize(n, k);
    out.free_gains.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      out.free_directions.col(j) = rotated.col(order[static_cast<std::size_t>(j)]);
      out.free_gains(j) = gains(order[static_cast<std::size_t>(j)]);
    }
  } else {
    out.free_directions.resize(n, 0);
    out.free_gains.resize(0);
  }

  out.x = std::move(x);
  out.objective_residual = (a * out.x - b).norm();
  if (c.rows() > 0) out.constraint_residual = (c * out.x - d).norm();
  return out;
}

}  // namespace hullscope::linalg
