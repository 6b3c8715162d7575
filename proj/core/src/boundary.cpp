#include "hullscope/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hullscope/parallel.hpp"

namespace hullscope::boundary {

Classifier::Classifier(std::size_t dim, LabelFn fn, std::string description)
    : dim_(dim), fn_(std::move(fn)), description_(std::move(description)) {
  if (dim_ < 1) throw InvalidArgument("classifier dimension must be >= 1");
  if (!fn_) throw InvalidArgument("classifier needs a label function");
}

Classifier Classifier::linear(Vector weights, double bias) {
  const auto dim = static_cast<std::size_t>(weights.size());
  return Classifier(
      dim, [w = std::move(weights), bias](const Vector& x) { return w.dot(x) + bias > 0.0 ? 1 : 0; }, "linear");
}

Classifier Classifier::polynomial_sign(poly::PolynomialSurface f) {
  const auto dim = f.dim();
  return Classifier(
      dim, [f = std::move(f)](const Vector& x) { return f(x) > 0.0 ? 0 : 1; }, "polynomial");
}

BoundaryProbe boundary_distance_along(const Classifier& clf, const Vector& origin, const Vector& direction,
                                      double max_radius, double tol) {
  if (static_cast<std::size_t>(origin.size()) != clf.dim() || direction.size() != origin.size()) {
    throw InvalidArgument("probe origin/direction dimension does not match classifier");
  }
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("probe direction must be nonzero and finite");
  if (!(max_radius > 0.0)) throw InvalidArgument("max_radius must be > 0");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");

  BoundaryProbe probe;
  probe.origin = origin;
  probe.direction = direction / norm;
  probe.max_radius = max_radius;
  probe.origin_label = clf(origin);

  double lo = 0.0;
  double hi = std::min(tol, max_radius);
  while (true) {
    const int label = clf(origin + hi * probe.direction);
    if (label != probe.origin_label) {
      probe.far_label = label;
      break;
    }
    if (hi >= max_radius) {
      probe.far_label = label;
      return probe;
    }
    lo = hi;
    hi = std::min(2.0 * hi, max_radius);
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const int label = clf(origin + mid * probe.direction);
    if (label == probe.origin_label) {
      lo = mid;
    } else {
      hi = mid;
      probe.far_label = label;
    }
  }
  probe.distance = hi;
  probe.bracket_width = hi - lo;
  return probe;
}

std::vector<Vector> probe_directions(std::size_t dim, std::size_t n_random, std::uint64_t seed) {
  std::vector<Vector> out;
  out.reserve(2 * dim + n_random);
  for (std::size_t i = 0; i < dim; ++i) {
    for (const double s : {1.0, -1.0}) {
      Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
      e(static_cast<Eigen::Index>(i)) = s;
      out.push_back(std::move(e));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  while (out.size() < 2 * dim + n_random) {
    Vector u(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = normal(rng);
    const double n = u.norm();
    if (n > 0.0) out.push_back(u / n);
  }
  return out;
}

NearestEstimate nearest_boundary_estimate(const Classifier& clf, const Vector& origin, const NearestOptions& options) {
  if (options.n_directions < 1) throw InvalidArgument("n_directions must be >= 1");
  if (!(options.max_radius > 0.0)) throw InvalidArgument("max_radius must be > 0");
  const double tol = options.tol > 0.0 ? options.tol : 1e-6 * options.max_radius;

  NearestEstimate best;
  for (const auto& u : probe_directions(clf.dim(), options.n_directions, options.seed)) {
    const auto probe = boundary_distance_along(clf, origin, u, options.max_radius, tol);
    ++best.probes;
    if (probe.found() && (!best.distance || *probe.distance < *best.distance)) {
      best.distance = probe.distance;
      best.direction = u;
    }
  }
  if (!best.distance || options.refine_steps == 0) return best;

  // (1+1) evolution strategy on the sphere around the best direction.
  std::mt19937_64 rng(options.seed ^ 0xa0761d6478bd642fULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sigma = 0.3;
  for (std::size_t step = 0; step < options.refine_steps && sigma > 1e-6; ++step) {
    Vector candidate = best.direction;
    for (Eigen::Index i = 0; i < candidate.size(); ++i) candidate(i) += sigma * normal(rng);
    const double n = candidate.norm();
    if (!(n > 0.0)) continue;
    candidate /= n;
    const auto probe = boundary_distance_along(clf, origin, candidate, *best.distance, tol);
    ++best.probes;
    if (probe.found() && *probe.distance < *best.distance) {
      best.distance = probe.distance;
      best.direction = candidate;
      sigma *= 1.5;
    } else {
      sigma *= 0.85;
    }
  }
  return best;
}

LipschitzEstimate lipschitz_estimate(const VectorMap& map, const Box& box, const LipschitzOptions& options) {
  if (options.n_pairs < 1) throw InvalidArgument("n_pairs must be >= 1");
  if (!(options.perturbation > 0.0)) throw InvalidArgument("perturbation must be > 0");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uni(box.lower, box.upper);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(box.dim);
  const double h = options.perturbation * box.diameter();

  auto uniform_point = [&] {
    Vector p(d);
    for (Eigen::Index i = 0; i < d; ++i) p(i) = uni(rng);
    return p;
  };

  LipschitzEstimate out;
  auto consider = [&](const Vector& x, const Vector& y) {
    const double dx = (x - y).norm();
    if (!(dx > 0.0)) {
      ++out.pairs_skipped;
      return;
    }
    out.estimate = std::max(out.estimate, (map(x) - map(y)).norm() / dx);
    ++out.pairs_used;
  };

  const std::size_t n_random = (options.n_pairs + 1) / 2;
  for (std::size_t i = 0; i < options.n_pairs; ++i) {
    const Vector x = uniform_point();
    if (i < n_random) {
      consider(x, uniform_point());
    } else {
      Vector u(d);
      for (Eigen::Index j = 0; j < d; ++j) u(j) = normal(rng);
      const double n = u.norm();
      if (n > 0.0) u /= n;
      consider(x, x + h * u);
    }
  }
  for (const auto& u : options.seed_directions) {
    if (u.size() != d) throw InvalidArgument("seed direction dimension mismatch");
    const double n = u.norm();
    if (!(n > 0.0)) continue;
    const Vector x = uniform_point();
    consider(x, x + (h / n) * u);
  }
  return out;
}

namespace {

std::optional<double> median_of(const std::vector<std::optional<double>>& values) {
  std::vector<double> v;
  v.reserve(values.size());
  for (const auto& d : values) v.push_back(d.value_or(std::numeric_limits<double>::infinity()));
  const double m = hull::summarize(std::move(v)).median;
  if (!std::isfinite(m)) return std::nullopt;
  return m;
}

}  // namespace

ClosenessReport closeness_report(const Classifier& clf, const Matrix& clean, const Matrix& perturbed,
                                 const NearestOptions& options) {
  if (clean.rows() < 1 || perturbed.rows() < 1) throw InvalidArgument("closeness_report needs nonempty inputs");
  if (clean.rows() != perturbed.rows()) throw InvalidArgument("clean and perturbed sets differ in size");
  if (clean.cols() != perturbed.cols() || static_cast<std::size_t>(clean.cols()) != clf.dim()) {
    throw InvalidArgument("dimension mismatch between point sets and classifier");
  }
  ClosenessReport report;
  const auto n = static_cast<std::size_t>(clean.rows());
  report.clean_distances.resize(n);
  report.perturbed_distances.resize(n);
  parallel_for(2 * n, [&](std::size_t i) {
    const bool is_clean = i < n;
    const auto row = static_cast<Eigen::Index>(is_clean ? i : i - n);
    const Vector origin = (is_clean ? clean : perturbed).row(row).transpose();
    auto& slot = is_clean ? report.clean_distances[i] : report.perturbed_distances[i - n];
    slot = nearest_boundary_estimate(clf, origin, options).distance;
  });
  report.median_clean = median_of(report.clean_distances);
  report.median_perturbed = median_of(report.perturbed_distances);
  if (report.median_clean && report.median_perturbed) {
    report.threshold = 0.5 * (*report.median_clean + *report.median_perturbed);
  }
  return report;
}

}  // namespace hullscope::boundary
