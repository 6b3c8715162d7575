#include <algorithm>
#include <cmath>
#include <limits>

#include "hullscope/linalg.hpp"
#include "hullscope/polyclass.hpp"

namespace hullscope::poly {

namespace {

void check_point_sets(const Matrix& x, const Matrix& y) {
  if (x.rows() < 1 || y.rows() < 1) throw InvalidArgument("both point sets must be nonempty");
  if (x.cols() != y.cols()) throw InvalidArgument("point sets have different dimensions");
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("point sets contain non-finite coordinates");
}

}  // namespace

std::size_t count_misclassified(const PolynomialSurface& f, const Matrix& x, const Matrix& y) {
  std::size_t wrong = 0;
  const Vector fx = f.evaluate_rows(x);
  const Vector fy = f.evaluate_rows(y);
  for (Eigen::Index i = 0; i < fx.size(); ++i) wrong += !(fx(i) > 0.0);
  for (Eigen::Index i = 0; i < fy.size(); ++i) wrong += !(fy(i) < 0.0);
  return wrong;
}

SeparatorFit fit_separator(const Matrix& x, const Matrix& y, int degree, double ridge,
                           const std::optional<Box>& domain) {
  check_point_sets(x, y);
  if (degree < 1) throw InvalidArgument("separator degree must be >= 1");
  if (!(ridge >= 0.0)) throw InvalidArgument("ridge must be >= 0");

  Matrix all(x.rows() + y.rows(), x.cols());
  all << x, y;
  const Box box = domain ? *domain : Box::bounding(all);
  if (box.dim != static_cast<std::size_t>(x.cols())) throw InvalidArgument("domain dimension mismatch");

  const auto shape = PolynomialSurface::zero(box, degree);
  const Matrix design = shape.design_matrix(all);
  Vector targets(all.rows());
  targets.head(x.rows()).setOnes();
  targets.tail(y.rows()).setConstant(-1.0);

  SeparatorFit fit{shape.with_coefficients(linalg::ridge_least_squares(design, targets, ridge)), 0};
  fit.misclassified = count_misclassified(fit.surface, x, y);
  return fit;
}

std::optional<MinimalSeparator> minimal_degree_separator(const Matrix& x, const Matrix& y, int max_degree,
                                                         double ridge, const std::optional<Box>& domain) {
  if (max_degree < 1) throw InvalidArgument("max_degree must be >= 1");
  for (int degree = 1; degree <= max_degree; ++degree) {
    auto fit = fit_separator(x, y, degree, ridge, domain);
    if (fit.separates()) return MinimalSeparator{degree, std::move(fit.surface)};
  }
  return std::nullopt;
}

double functional_margin(const PolynomialSurface& f, const Matrix& x, const Matrix& y) {
  check_point_sets(x, y);
  if (count_misclassified(f, x, y) != 0) throw InvalidArgument("margin undefined for non-separator");
  const double mx = f.evaluate_rows(x).cwiseAbs().minCoeff();
  const double my = f.evaluate_rows(y).cwiseAbs().minCoeff();
  return std::min(mx, my);
}

}  // namespace hullscope::poly
