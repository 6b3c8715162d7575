#pragma once

// Reference hull-distance computations that share no code with the library
// solver: exhaustive face enumeration for small instances and a
// Lawson-Hanson NNLS support search for larger ones.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct AffineFit {
  Vector weights;  // over the chosen rows, sums to 1
  double distance = 0.0;
};

/// Projection of q onto the affine hull of the selected rows of `points`.
inline AffineFit affine_projection(const Vector& q, const Matrix& points, const std::vector<int>& rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const Vector v0 = points.row(rows[0]).transpose();
  AffineFit fit;
  fit.weights = Vector::Zero(m);
  if (m == 1) {
    fit.weights(0) = 1.0;
    fit.distance = (q - v0).norm();
    return fit;
  }
  Matrix edges(points.cols(), m - 1);
  for (Eigen::Index j = 1; j < m; ++j) edges.col(j - 1) = points.row(rows[static_cast<std::size_t>(j)]).transpose() - v0;
  Eigen::JacobiSVD<Matrix> svd(edges, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Vector mu = svd.solve(q - v0);
  fit.weights(0) = 1.0 - mu.sum();
  fit.weights.tail(m - 1) = mu;
  fit.distance = (v0 + edges * mu - q).norm();
  return fit;
}

/// Exact Euclidean distance from q to conv(rows of points) by trying every
/// non-empty subset of points; only the subsets whose affine projection has
/// non-negative weights are feasible candidates. Exponential in n.
inline double brute_force_hull_distance(const Vector& q, const Matrix& points) {
  const auto n = static_cast<int>(points.rows());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned subset = 1; subset < (1U << n); ++subset) {
    std::vector<int> rows;
    for (int i = 0; i < n; ++i) {
      if (subset & (1U << i)) rows.push_back(i);
    }
    const AffineFit fit = affine_projection(q, points, rows);
    if (fit.weights.minCoeff() >= -1e-12) best = std::min(best, fit.distance);
  }
  return best;
}

/// Lawson-Hanson active-set solution of min ||A x - b|| subject to x >= 0.
inline Vector lawson_hanson_nnls(const Matrix& a, const Vector& b, int max_outer = 2000) {
  const Eigen::Index n = a.cols();
  Vector x = Vector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * a.norm() * std::max(1.0, b.norm());

  auto solve_passive = [&](const std::vector<bool>& p) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (p[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Matrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Vector zs = sub.colPivHouseholderQr().solve(b);
    Vector z = Vector::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(static_cast<Eigen::Index>(k));
    return z;
  };

  for (int outer = 0; outer < max_outer; ++outer) {
    const Vector w = a.transpose() * (b - a * x);
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        t = j;
      }
    }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;
    for (int inner = 0; inner < 10 * static_cast<int>(n); ++inner) {
      const Vector z = solve_passive(passive);
      bool feasible = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
        }
      }
      if (feasible) {
        x = z;
        break;
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

struct NnlsHullResult {
  double distance = 0.0;
  Vector weights;
  bool kkt_ok = false;  // exact affine polish kept non-negative weights and optimality held
};

/// Distance to the hull for larger instances. The simplex constraint is
/// enforced approximately by a heavily weighted sum-to-one row in an NNLS
/// problem; its support is then polished by an exact affine projection and
/// the first-order optimality conditions are checked.
inline NnlsHullResult nnls_hull_distance(const Vector& q, const Matrix& points, double weight = 1e4) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  Matrix a(d + 1, n);
  a.topRows(d) = points.transpose();
  a.row(d).setConstant(weight);
  Vector b(d + 1);
  b.head(d) = q;
  b(d) = weight;
  const Vector x = lawson_hanson_nnls(a, b);

  std::vector<int> support;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (x(j) > 1e-9) support.push_back(static_cast<int>(j));
  }
  NnlsHullResult out;
  out.weights = Vector::Zero(n);
  const AffineFit fit = affine_projection(q, points, support);
  for (std::size_t k = 0; k < support.size(); ++k) out.weights(support[k]) = fit.weights(static_cast<Eigen::Index>(k));
  out.distance = fit.distance;

  // Optimality over the simplex: every vertex gradient is at least the
  // support gradient (up to rounding).
  const Vector p = points.transpose() * out.weights;
  const Vector grad = points * (p - q);
  const double on_support = grad.dot(out.weights);
  out.kkt_ok = out.weights.minCoeff() >= -1e-10 && grad.minCoeff() >= on_support - 1e-8 * std::max(1.0, std::abs(on_support));
  return out;
}

}  // namespace oracle
