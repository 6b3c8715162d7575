#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hullscope/hull.hpp"
#include "hullscope/linalg.hpp"
#include "hullscope/polyclass.hpp"

namespace hullscope::poly {

namespace {

Matrix stack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

std::string describe(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

InsufficientDegree::InsufficientDegree(double achieved, double epsilon)
    : Error("insufficient degree: inside deviation " + describe(achieved) + " is not below epsilon " +
            describe(epsilon)),
      achieved_(achieved) {}

PerturbationReport perturbation_separation_check(const PolynomialSurface& f,
                                                 const std::vector<PolynomialSurface>& family, const Matrix& x,
                                                 const Matrix& y, double epsilon, std::size_t n_samples,
                                                 std::uint64_t seed) {
  PerturbationReport report;
  report.margin = functional_margin(f, x, y);
  report.epsilon = epsilon;
  if (!(epsilon > 0.0) || !(epsilon < report.margin)) {
    throw InvalidArgument("sign-preservation precondition violated: epsilon " + describe(epsilon) +
                          " must be positive and below the functional margin " + describe(report.margin));
  }
  const Region region = HullRegion{stack(x, y)};
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& g = family[i];
    const auto cert = epsilon_equal(f, g, region, epsilon, n_samples, seed);
    PerturbationEntry entry;
    entry.index = i;
    entry.certified_equal = cert.equal();
    entry.max_deviation = cert.max_observed_deviation;
    entry.separates = count_misclassified(g, x, y) == 0;
    entry.violation = entry.certified_equal && !entry.separates;
    report.n_certified += entry.certified_equal;
    report.n_violations += entry.violation;
    report.entries.push_back(entry);
  }
  return report;
}

ExtensionFamily extension_family(const PolynomialSurface& f, int degree_up, std::size_t k,
                                 const Matrix& inside_samples, const AnchorSet& anchors, double epsilon,
                                 std::uint64_t seed, const ExtensionOptions& options) {
  if (degree_up <= f.degree()) throw InvalidArgument("degree_up must exceed the degree of f");
  if (k < 2) throw InvalidArgument("an extension family needs k >= 2 members");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (inside_samples.rows() < 1 || static_cast<std::size_t>(inside_samples.cols()) != f.dim()) {
    throw InvalidArgument("inside samples must be nonempty and match the dimension of f");
  }
  if (anchors.points.cols() != inside_samples.cols() || anchors.points.rows() != anchors.targets.size()) {
    throw InvalidArgument("anchor points and targets are inconsistent");
  }
  for (Eigen::Index j = 0; j < anchors.points.rows(); ++j) {
    const auto m = hull::membership(anchors.points.row(j).transpose(), inside_samples);
    if (m.status != hull::Membership::OutOfHull) {
      throw InfeasibleExtension("infeasible constraints: anchor " + std::to_string(j) +
                                " is not certifiably outside the hull of the inside samples (distance " +
                                describe(m.distance) + ")");
    }
  }

  const auto shape = PolynomialSurface::zero(f.domain(), degree_up);
  const Matrix inside_design = shape.design_matrix(inside_samples);
  const Matrix anchor_design = shape.design_matrix(anchors.points);
  const auto solution = linalg::constrained_least_squares(inside_design, Vector::Zero(inside_design.rows()),
                                                          anchor_design, anchors.targets);
  if (!solution.constraints_consistent) {
    throw InfeasibleExtension("infeasible constraints: anchor targets cannot be met at degree " +
                              std::to_string(degree_up) + " (residual " + describe(solution.constraint_residual) +
                              ")");
  }

  // Sup norms are estimated on one hull sample set; certification uses another.
  const Region hull_region = HullRegion{inside_samples};
  const Matrix probe_design =
      shape.design_matrix(sample_region(hull_region, options.certificate_samples, seed ^ 0x9e3779b97f4a7c15ULL));
  const double probe_dev = (probe_design * solution.x).cwiseAbs().maxCoeff();
  const double sample_dev = (inside_design * solution.x).cwiseAbs().maxCoeff();
  const double base_dev = std::max(probe_dev, sample_dev);
  if (!(base_dev < epsilon)) throw InsufficientDegree(base_dev, epsilon);

  const Eigen::Index n_free = solution.free_directions.cols();
  if (n_free == 0) {
    throw InsufficientDegree(base_dev, epsilon);
  }
  const Eigen::Index pool = std::min<Eigen::Index>(n_free, std::max<Eigen::Index>(static_cast<Eigen::Index>(k), 4));
  const Matrix directions = solution.free_directions.leftCols(pool);
  const double budget = 0.5 * (epsilon - base_dev);

  ExtensionFamily family;
  const auto lifted = f.elevated(degree_up);
  family.members.push_back(lifted + shape.with_coefficients(solution.x));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 1; i < k; ++i) {
    Vector mix(pool);
    for (Eigen::Index j = 0; j < pool; ++j) mix(j) = normal(rng);
    Vector direction = directions * mix;
    const double inside_sup = std::max((probe_design * direction).cwiseAbs().maxCoeff(),
                                       (inside_design * direction).cwiseAbs().maxCoeff());
    if (inside_sup > 0.0) direction /= inside_sup;
    const double sign = i % 2 == 1 ? 1.0 : -1.0;
    family.members.push_back(lifted + shape.with_coefficients(solution.x + sign * budget * direction));
  }

  family.base_inside_deviation = 0.0;
  {
    const Matrix cert_points = sample_region(hull_region, options.certificate_samples, seed);
    family.base_inside_deviation = (shape.design_matrix(cert_points) * solution.x).cwiseAbs().maxCoeff();
  }
  family.all_inside_equal = true;
  for (const auto& member : family.members) {
    family.inside.push_back(epsilon_equal(f, member, hull_region, epsilon, options.certificate_samples, seed));
    family.all_inside_equal = family.all_inside_equal && family.inside.back().equal();
    double err = 0.0;
    for (Eigen::Index j = 0; j < anchors.points.rows(); ++j) {
      const Vector a = anchors.points.row(j).transpose();
      err = std::max(err, std::abs(member(a) - f(a) - anchors.targets(j)));
    }
    family.anchor_errors.push_back(err);
  }

  const Matrix box_samples = stack(sample_region(f.domain(), options.witness_samples, seed + 1), anchors.points);
  Matrix values(static_cast<Eigen::Index>(family.members.size()), box_samples.rows());
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    values.row(static_cast<Eigen::Index>(i)) = family.members[i].evaluate_rows(box_samples).transpose();
  }
  const double threshold = options.distinct_factor * epsilon;
  family.all_distinct = true;
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    for (std::size_t j = i + 1; j < family.members.size(); ++j) {
      Eigen::Index at = 0;
      const double dev = (values.row(static_cast<Eigen::Index>(i)) - values.row(static_cast<Eigen::Index>(j)))
                             .cwiseAbs()
                             .maxCoeff(&at);
      PairWitness w{i, j, box_samples.row(at).transpose(), dev, dev >= threshold};
      family.all_distinct = family.all_distinct && w.distinct;
      family.pairs.push_back(std::move(w));
    }
  }
  return family;
}

double extension_gap(const PolynomialSurface& f, int degree_h, const Matrix& inside_samples, const Vector& anchor,
                     double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  if (degree_h < 0) throw InvalidArgument("degree_h must be >= 0");
  if (inside_samples.rows() < 1 || static_cast<std::size_t>(inside_samples.cols()) != f.dim() ||
      static_cast<std::size_t>(anchor.size()) != f.dim()) {
    throw InvalidArgument("inside samples and anchor must match the dimension of f");
  }
  const auto shape = PolynomialSurface::zero(f.domain(), degree_h);
  const Matrix design = shape.design_matrix(inside_samples);
  Matrix constraint(1, design.cols());
  constraint.row(0) = shape.features(anchor).transpose();
  Vector rhs(1);
  rhs(0) = f(anchor) + delta;
  const auto solution = linalg::constrained_least_squares(design, f.evaluate_rows(inside_samples), constraint, rhs);
  return solution.objective_residual / std::sqrt(static_cast<double>(inside_samples.rows()));
}

}  // namespace hullscope::poly
