#include "hullscope/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hullscope/parallel.hpp"

namespace hullscope::hull {

namespace {

void check_inputs(const Vector& query, const Matrix& points) {
  if (points.rows() < 1 || points.cols() < 1) throw InvalidArgument("hull needs at least one point");
  if (query.size() != points.cols()) {
    throw InvalidArgument("query dimension " + std::to_string(query.size()) + " does not match points dimension " +
                          std::to_string(points.cols()));
  }
  if (!query.allFinite() || !points.allFinite()) throw InvalidArgument("non-finite input to hull projection");
}

std::optional<Hyperplane> separating_plane(const Vector& query, const Vector& projection, const Matrix& points) {
  Hyperplane plane{query - projection, 0.0};
  plane.offset = (points * plane.normal).maxCoeff();
  if (plane.signed_value(query) > 0.0) return plane;
  return std::nullopt;
}

// Minimises ||P^T w - q|| over the affine hull of the support of `weights`;
// when that minimiser leaves the simplex, walks towards it until a weight
// hits zero, drops that vertex and repeats. Never increases the objective.
void correct_on_support(const Vector& query, const Matrix& points, Vector& weights) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) > 0.0) support.push_back(i);
  }
  while (support.size() > 1) {
    const auto m = static_cast<Eigen::Index>(support.size());
    const Vector base = points.row(support[0]).transpose();
    Matrix edges(points.cols(), m - 1);
    for (Eigen::Index j = 1; j < m; ++j) edges.col(j - 1) = points.row(support[static_cast<std::size_t>(j)]).transpose() - base;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(edges);
    cod.setThreshold(1e-12);
    const Vector alpha = cod.solve(query - base);
    Vector target(m);
    target(0) = 1.0 - alpha.sum();
    target.tail(m - 1) = alpha;

    double theta = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double current = weights(support[static_cast<std::size_t>(j)]);
      if (target(j) < 0.0) theta = std::min(theta, current / (current - target(j)));
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      double& w = weights(support[static_cast<std::size_t>(j)]);
      w += theta * (target(j) - w);
    }
    if (theta >= 1.0) return;
    std::vector<Eigen::Index> kept;
    for (const auto i : support) {
      if (weights(i) > 1e-15) {
        kept.push_back(i);
      } else {
        weights(i) = 0.0;
      }
    }
    if (kept.size() == support.size()) return;
    support = std::move(kept);
  }
}

}  // namespace

HullProjection project_onto_hull(const Vector& query, const Matrix& points, const ProjectionOptions& options) {
  check_inputs(query, points);
  if (!(options.tol > 0.0)) throw InvalidArgument("projection tolerance must be > 0");
  const Eigen::Index n = points.rows();
  const std::size_t max_iter = options.max_iter == 0 ? 50 * static_cast<std::size_t>(n) : options.max_iter;

  // Start from the nearest generating point.
  Eigen::Index start = 0;
  (points.rowwise() - query.transpose()).rowwise().squaredNorm().minCoeff(&start);
  Vector weights = Vector::Zero(n);
  weights(start) = 1.0;
  Vector x = points.row(start).transpose();

  HullProjection out;
  out.status = SolveStatus::Unconverged;
  double gap = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (;; ++it) {
    if (it % 64 == 63) x = points.transpose() * weights;  // limit drift of the running iterate
    const Vector residual = x - query;
    const Vector grad = points * residual;  // d/dw of 0.5 ||P^T w - q||^2
    const double weighted = grad.dot(weights);
    Eigen::Index toward = 0;
    const double grad_min = grad.minCoeff(&toward);
    gap = weighted - grad_min;
    if (gap <= options.tol) {
      out.status = SolveStatus::Converged;
      break;
    }
    if (it >= max_iter) break;

    Eigen::Index away = -1;
    double grad_away = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weights(i) > 0.0 && grad(i) > grad_away) {
        grad_away = grad(i);
        away = i;
      }
    }

    const bool frank_wolfe_step = gap >= grad_away - weighted || weights(away) >= 1.0;
    Vector step;
    double max_step = 1.0;
    if (frank_wolfe_step) {
      step = points.row(toward).transpose() - x;
    } else {
      step = x - points.row(away).transpose();
      max_step = weights(away) / (1.0 - weights(away));
    }
    const double curvature = step.squaredNorm();
    if (curvature <= 0.0) break;
    const double gamma = std::clamp(-residual.dot(step) / curvature, 0.0, max_step);

    if (frank_wolfe_step) {
      weights *= (1.0 - gamma);
      weights(toward) += gamma;
    } else {
      weights *= (1.0 + gamma);
      weights(away) -= gamma;
      if (gamma >= max_step) weights(away) = 0.0;
    }
    x += gamma * step;

    if (options.correction_period > 0 && (it + 1) % options.correction_period == 0) {
      const Vector before = weights;
      const double objective = (x - query).squaredNorm();
      correct_on_support(query, points, weights);
      weights = weights.cwiseMax(0.0);
      weights /= weights.sum();
      const Vector corrected = points.transpose() * weights;
      if ((corrected - query).squaredNorm() <= objective) {
        x = corrected;
      } else {
        weights = before;
      }
    }
  }

  weights = weights.cwiseMax(0.0);
  weights /= weights.sum();
  out.coefficients = std::move(weights);
  out.projection = points.transpose() * out.coefficients;
  out.distance = (out.projection - query).norm();
  out.iterations = it;
  {
    const Vector grad = points * (out.projection - query);
    out.dual_gap = std::max(0.0, grad.dot(out.coefficients) - grad.minCoeff());
  }
  if (out.distance > options.membership_threshold) {
    out.certificate = separating_plane(query, out.projection, points);
  }
  return out;
}

UnconvergedError::UnconvergedError(HullProjection result)
    : Error("hull projection unconverged: dual gap " + std::to_string(result.dual_gap) + " after " +
            std::to_string(result.iterations) + " iterations"),
      result_(std::move(result)) {}

double distance_to_hull(const Vector& query, const Matrix& points) {
  auto result = project_onto_hull(query, points);
  if (!result.converged()) throw UnconvergedError(std::move(result));
  return result.distance;
}

MembershipResult membership(const Vector& query, const Matrix& points, double dist_tol) {
  if (!(dist_tol > 0.0)) throw InvalidArgument("dist_tol must be > 0");
  ProjectionOptions options;
  options.membership_threshold = dist_tol;
  auto projection = project_onto_hull(query, points, options);

  // Just above the threshold the default gap may be too loose for the
  // separating plane to verify; tighten once before giving up.
  if (projection.converged() && projection.distance > dist_tol && !projection.certificate) {
    options.tol = std::min(options.tol, 0.25 * projection.distance * projection.distance);
    options.max_iter = 200 * static_cast<std::size_t>(points.rows());
    projection = project_onto_hull(query, points, options);
  }

  MembershipResult out;
  out.distance = projection.distance;
  out.dual_gap = projection.dual_gap;
  if (!projection.converged()) {
    out.status = Membership::Indeterminate;
  } else if (projection.distance <= dist_tol) {
    out.status = Membership::InHull;
  } else if (projection.certificate && certificate_separates(*projection.certificate, query, points)) {
    out.status = Membership::OutOfHull;
    out.certificate = std::move(projection.certificate);
  } else {
    out.status = Membership::Indeterminate;
  }
  return out;
}

bool certificate_separates(const Hyperplane& plane, const Vector& query, const Matrix& points, double tol) {
  if (plane.normal.size() != query.size() || plane.normal.size() != points.cols()) return false;
  if (!(plane.signed_value(query) > 0.0)) return false;
  return ((points * plane.normal).array() - plane.offset <= tol).all();
}

SummaryStats summarize(std::vector<double> values) {
  SummaryStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

ExtrapolationReport extrapolation_report(const Matrix& train, const Matrix& test, double dist_tol) {
  if (train.cols() != test.cols()) {
    throw InvalidArgument("dimension mismatch: train has d=" + std::to_string(train.cols()) + ", test has d=" +
                          std::to_string(test.cols()));
  }
  if (test.rows() < 1) throw InvalidArgument("extrapolation_report needs at least one test point");
  ExtrapolationReport report;
  report.n_test = static_cast<std::size_t>(test.rows());
  report.distances.resize(report.n_test);
  report.statuses.resize(report.n_test);
  parallel_for(report.n_test, [&](std::size_t i) {
    const auto result = membership(test.row(static_cast<Eigen::Index>(i)).transpose(), train, dist_tol);
    report.distances[i] = result.distance;
    report.statuses[i] = result.status;
  });
  for (const auto s : report.statuses) {
    if (s == Membership::OutOfHull) ++report.n_outside;
    if (s == Membership::Indeterminate) ++report.n_unresolved;
  }
  report.fraction_outside = static_cast<double>(report.n_outside) / static_cast<double>(report.n_test);
  report.stats = summarize(report.distances);
  return report;
}

ExtrapolationReport extrapolation_report(const Dataset& train, const Dataset& test, double dist_tol) {
  return extrapolation_report(train.points(), test.points(), dist_tol);
}

const char* to_string(Membership m) noexcept {
  switch (m) {
    case Membership::InHull:
      return "inside";
    case Membership::OutOfHull:
      return "outside";
    case Membership::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

}  // namespace hullscope::hull
