#pragma once

#include "hullscope/arrays.hpp"

namespace hullscope::linalg {

/// Relative singular-value threshold used for every rank decision.
inline constexpr double kRankTolerance = 1e-10;

class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// min ||A x - b||^2 + ridge ||x||^2. With ridge == 0 the system must have full
/// column rank; otherwise RankDeficient is thrown.
Vector ridge_least_squares(const Matrix& a, const Vector& b, double ridge, double rank_tol = kRankTolerance);

struct ConstrainedSolution {
  /// Minimum-norm minimiser of ||A x - b|| subject to C x = d.
  Vector x;
  double objective_residual = 0.0;   ///< ||A x - b||
  double constraint_residual = 0.0;  ///< ||C x - d||
  bool constraints_consistent = true;
  Eigen::Index constraint_rank = 0;
  /// Orthonormal basis of null(C), rotated so that columns are ordered by
  /// ascending ||A z||. Columns with zero gain span null([A; C]).
  Matrix free_directions;
  /// ||A z|| for each column of `free_directions`.
  Vector free_gains;
};

/// Equality-constrained least squares by constraint elimination: the
/// constraint rows are factorised with an SVD, the particular solution is
/// taken from the row space of C and the objective is minimised over the
/// null space of C.
ConstrainedSolution constrained_least_squares(const Matrix& a, const Vector& b, const Matrix& c, const Vector& d,
                                              double rank_tol = kRankTolerance);

}  // namespace hullscope::linalg
