#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hullscope/arrays.hpp"

namespace hullscope::hull {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kDefaultMembershipTolerance = 1e-6;

enum class SolveStatus { Converged, Unconverged };

/// Affine hyperplane {x : normal . x = offset}.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;

  double signed_value(const Vector& x) const { return normal.dot(x) - offset; }
};

struct HullProjection {
  Vector coefficients;  ///< convex weights over the generating points
  Vector projection;    ///< points^T * coefficients
  double distance = 0.0;
  double dual_gap = 0.0;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::Unconverged;
  /// Present when the query is farther than the membership threshold and the
  /// hyperplane verifiably separates it from every generating point.
  std::optional<Hyperplane> certificate;

  bool converged() const noexcept { return status == SolveStatus::Converged; }
};

struct ProjectionOptions {
  double tol = kDefaultTolerance;  ///< stop when the Frank-Wolfe dual gap is <= tol
  std::size_t max_iter = 0;        ///< 0 means 50 * n
  double membership_threshold = kDefaultMembershipTolerance;
  /// Every this many iterations the weights are re-optimised over the affine
  /// hull of the current support (then pulled back into the simplex). 0 runs
  /// plain away-step Frank-Wolfe.
  std::size_t correction_period = 8;
};

/// Euclidean projection of `query` onto conv(rows of `points`), by
/// Frank-Wolfe with away steps and exact line search. Never throws on
/// non-convergence; inspect `status`.
HullProjection project_onto_hull(const Vector& query, const Matrix& points, const ProjectionOptions& options = {});

class UnconvergedError : public Error {
 public:
  explicit UnconvergedError(HullProjection result);
  const HullProjection& result() const noexcept { return result_; }

 private:
  HullProjection result_;
};

/// Distance with the default tolerances; throws UnconvergedError if the
/// solver stops with a dual gap above tolerance.
double distance_to_hull(const Vector& query, const Matrix& points);

enum class Membership { InHull, OutOfHull, Indeterminate };

struct MembershipResult {
  Membership status = Membership::Indeterminate;
  double distance = 0.0;
  double dual_gap = 0.0;
  std::optional<Hyperplane> certificate;  ///< always set for OutOfHull
};

MembershipResult membership(const Vector& query, const Matrix& points,
                            double dist_tol = kDefaultMembershipTolerance);

/// True when normal.q - offset > 0 and normal.v - offset <= tol for every row v.
bool certificate_separates(const Hyperplane& plane, const Vector& query, const Matrix& points, double tol = 0.0);

struct SummaryStats {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

SummaryStats summarize(std::vector<double> values);

struct ExtrapolationReport {
  std::size_t n_test = 0;
  std::size_t n_outside = 0;
  std::size_t n_unresolved = 0;
  double fraction_outside = 0.0;
  std::vector<double> distances;
  std::vector<Membership> statuses;
  SummaryStats stats;
};

ExtrapolationReport extrapolation_report(const Matrix& train, const Matrix& test,
                                         double dist_tol = kDefaultMembershipTolerance);
ExtrapolationReport extrapolation_report(const Dataset& train, const Dataset& test,
                                         double dist_tol = kDefaultMembershipTolerance);

const char* to_string(Membership m) noexcept;

}  // namespace hullscope::hull
