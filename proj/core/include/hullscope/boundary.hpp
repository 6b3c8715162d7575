#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hullscope/arrays.hpp"
#include "hullscope/hull.hpp"
#include "hullscope/polyclass.hpp"

namespace hullscope::boundary {

/// A total, deterministic map from points to class labels. Implementations
/// must be safe to call concurrently.
class Classifier {
 public:
  using LabelFn = std::function<int(const Vector&)>;

  Classifier(std::size_t dim, LabelFn fn, std::string description = "custom");

  int operator()(const Vector& x) const { return fn_(x); }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& description() const noexcept { return description_; }

  /// Label 1 where w.x + b > 0, else 0.
  static Classifier linear(Vector weights, double bias);
  /// Label 0 where f > 0 (the X side), else 1.
  static Classifier polynomial_sign(poly::PolynomialSurface f);

 private:
  std::size_t dim_;
  LabelFn fn_;
  std::string description_;
};

struct BoundaryProbe {
  Vector origin;
  Vector direction;                ///< unit vector
  std::optional<double> distance;  ///< empty when no label change within max_radius
  double max_radius = 0.0;
  double bracket_width = 0.0;  ///< width of the last bracket (0 when not found)
  int origin_label = 0;
  int far_label = 0;  ///< label just past the boundary, or at max_radius when not found

  bool found() const noexcept { return distance.has_value(); }
};

/// Doubles the radius from `tol` until the label changes (capped at
/// max_radius), then bisects to a bracket of width <= tol. The reported
/// distance is the outer end of the bracket, so it never underestimates the
/// distance to the first label change that was bracketed.
BoundaryProbe boundary_distance_along(const Classifier& clf, const Vector& origin, const Vector& direction,
                                      double max_radius, double tol);

struct NearestOptions {
  std::size_t n_directions = 1000;
  double max_radius = 0.0;  ///< 0: caller must supply; see defaults in closeness_report
  double tol = 0.0;         ///< 0: 1e-6 * max_radius
  std::uint64_t seed = 0;
  /// Local search steps on the sphere starting from the best sampled
  /// direction. 0 keeps the estimate a pure minimum over sampled directions.
  std::size_t refine_steps = 0;
};

struct NearestEstimate {
  std::optional<double> distance;  ///< upper bound on the true distance to the boundary
  Vector direction;                ///< direction that achieved it
  std::size_t probes = 0;
};

/// Minimum probed distance over the 2d coordinate directions followed by
/// n_directions uniformly random unit directions (optionally refined). Always
/// an upper bound on the true distance.
NearestEstimate nearest_boundary_estimate(const Classifier& clf, const Vector& origin, const NearestOptions& options);

/// The i-th random direction of the stream used by nearest_boundary_estimate.
/// Direction sets for different n_directions with the same seed are nested.
std::vector<Vector> probe_directions(std::size_t dim, std::size_t n_random, std::uint64_t seed);

using VectorMap = std::function<Vector(const Vector&)>;

struct LipschitzOptions {
  std::size_t n_pairs = 1000;
  std::uint64_t seed = 0;
  /// Relative step (times the box diameter) for perturbation pairs (x, x + h u).
  double perturbation = 1e-3;
  /// Extra unit directions u used for additional perturbation pairs.
  std::vector<Vector> seed_directions;
};

struct LipschitzEstimate {
  double estimate = 0.0;  ///< lower bound on the Lipschitz constant over the box
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;  ///< coincident pairs
};

/// max ||map(x) - map(y)|| / ||x - y|| over sampled pairs in `box`: half
/// independent uniform pairs, half perturbation pairs, plus one perturbation
/// pair per seed direction.
LipschitzEstimate lipschitz_estimate(const VectorMap& map, const Box& box, const LipschitzOptions& options);

struct ClosenessReport {
  std::vector<std::optional<double>> clean_distances;
  std::vector<std::optional<double>> perturbed_distances;
  std::optional<double> median_clean;
  std::optional<double> median_perturbed;
  std::optional<double> threshold;  ///< midpoint of the two medians
};

/// NotFound distances sort as +infinity; a median that lands on one is empty.
ClosenessReport closeness_report(const Classifier& clf, const Matrix& clean, const Matrix& perturbed,
                                 const NearestOptions& options);

}  // namespace hullscope::boundary
