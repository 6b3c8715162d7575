#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hullscope/polyclass.hpp"

namespace hullscope::poly {

namespace {

void append_degree(std::size_t dim, int total, std::size_t pos, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (pos + 1 == dim) {
    current[pos] = total;
    out.push_back(current);
    return;
  }
  for (int a = total; a >= 0; --a) {
    current[pos] = a;
    append_degree(dim, total - a, pos + 1, current, out);
  }
}

bool same_domain(const Box& a, const Box& b) {
  return a.lower == b.lower && a.upper == b.upper && a.dim == b.dim;
}

}  // namespace

std::size_t basis_size(std::size_t dim, int degree) {
  if (degree < 0) return 0;
  // C(dim + degree, degree), built incrementally so intermediates stay exact.
  std::size_t result = 1;
  for (std::size_t i = 1; i <= static_cast<std::size_t>(degree); ++i) result = result * (dim + i) / i;
  return result;
}

std::vector<MultiIndex> graded_lex_basis(std::size_t dim, int degree) {
  if (dim < 1) throw InvalidArgument("basis dimension must be >= 1");
  if (degree < 0) throw InvalidArgument("degree must be >= 0");
  std::vector<MultiIndex> out;
  out.reserve(basis_size(dim, degree));
  MultiIndex current(dim, 0);
  for (int total = 0; total <= degree; ++total) append_degree(dim, total, 0, current, out);
  return out;
}

PolynomialSurface::PolynomialSurface(Box domain, int degree, Vector coefficients)
    : domain_(domain), degree_(degree), coefficients_(std::move(coefficients)) {
  if (degree < 0) throw InvalidArgument("polynomial degree must be >= 0");
  basis_ = graded_lex_basis(domain_.dim, degree_);
  if (static_cast<std::size_t>(coefficients_.size()) != basis_.size()) {
    throw InvalidArgument("coefficient count " + std::to_string(coefficients_.size()) + " does not match basis size " +
                          std::to_string(basis_.size()));
  }
  if (!coefficients_.allFinite()) throw InvalidArgument("polynomial coefficients must be finite");
}

PolynomialSurface PolynomialSurface::zero(Box domain, int degree) {
  return PolynomialSurface(domain, degree, Vector::Zero(static_cast<Eigen::Index>(basis_size(domain.dim, degree))));
}

PolynomialSurface PolynomialSurface::from_terms(Box domain, int degree,
                                                const std::vector<std::pair<MultiIndex, double>>& terms) {
  const auto basis = graded_lex_basis(domain.dim, degree);
  Vector coeffs = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const auto& [alpha, value] : terms) {
    const auto it = std::find(basis.begin(), basis.end(), alpha);
    if (it == basis.end()) throw InvalidArgument("multi-index not in basis of the requested degree");
    coeffs(it - basis.begin()) += value;
  }
  return PolynomialSurface(domain, degree, std::move(coeffs));
}

Vector PolynomialSurface::scaled(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw InvalidArgument("point dimension " + std::to_string(x.size()) + " does not match polynomial dimension " +
                          std::to_string(dim()));
  }
  const double mid = 0.5 * (domain_.lower + domain_.upper);
  const double half = 0.5 * domain_.width();
  return (x.array() - mid) / half;
}

Vector PolynomialSurface::features(const Vector& x) const {
  const Vector s = scaled(x);
  const auto d = static_cast<Eigen::Index>(dim());
  Matrix powers(d, degree_ + 1);
  for (Eigen::Index i = 0; i < d; ++i) {
    powers(i, 0) = 1.0;
    for (int k = 1; k <= degree_; ++k) powers(i, k) = powers(i, k - 1) * s(i);
  }
  Vector out(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    double term = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) term *= powers(i, basis_[j][static_cast<std::size_t>(i)]);
    out(static_cast<Eigen::Index>(j)) = term;
  }
  return out;
}

Matrix PolynomialSurface::design_matrix(const Matrix& points) const {
  Matrix out(points.rows(), static_cast<Eigen::Index>(basis_.size()));
  for (Eigen::Index r = 0; r < points.rows(); ++r) out.row(r) = features(points.row(r).transpose()).transpose();
  return out;
}

double PolynomialSurface::operator()(const Vector& x) const { return features(x).dot(coefficients_); }

Vector PolynomialSurface::evaluate_rows(const Matrix& points) const { return design_matrix(points) * coefficients_; }

PolynomialSurface PolynomialSurface::elevated(int new_degree) const {
  if (new_degree < degree_) throw InvalidArgument("cannot lower polynomial degree by elevation");
  // Graded ordering makes the lower-degree basis a prefix of the higher one.
  Vector coeffs = Vector::Zero(static_cast<Eigen::Index>(basis_size(dim(), new_degree)));
  coeffs.head(coefficients_.size()) = coefficients_;
  return PolynomialSurface(domain_, new_degree, std::move(coeffs));
}

PolynomialSurface PolynomialSurface::with_coefficients(Vector coefficients) const {
  return PolynomialSurface(domain_, degree_, std::move(coefficients));
}

PolynomialSurface PolynomialSurface::operator+(const PolynomialSurface& other) const {
  if (!same_domain(domain_, other.domain_)) throw InvalidArgument("cannot add polynomials over different domains");
  const int degree = std::max(degree_, other.degree_);
  const auto a = elevated(degree);
  const auto b = other.elevated(degree);
  return PolynomialSurface(domain_, degree, a.coefficients_ + b.coefficients_);
}

PolynomialSurface PolynomialSurface::operator-(const PolynomialSurface& other) const { return *this + other * -1.0; }

PolynomialSurface PolynomialSurface::operator*(double s) const {
  return PolynomialSurface(domain_, degree_, coefficients_ * s);
}

double eval(const PolynomialSurface& f, const Vector& x) { return f(x); }

Evaluation eval_flagged(const PolynomialSurface& f, const Vector& x) {
  return Evaluation{f(x), !f.domain().contains(x)};
}

Matrix sample_region(const Region& region, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw InvalidArgument("need at least one sample");
  std::mt19937_64 rng(seed);
  std::vector<Vector> rows;
  rows.reserve(n_samples);

  if (const auto* box = std::get_if<Box>(&region)) {
    const auto d = box->dim;
    if (d < 63 && (std::size_t{1} << d) <= n_samples / 2) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Vector corner(static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) corner(static_cast<Eigen::Index>(i)) = (mask >> i) & 1u ? box->upper : box->lower;
        rows.push_back(std::move(corner));
      }
    }
    std::uniform_real_distribution<double> uni(box->lower, box->upper);
    while (rows.size() < n_samples) {
      Vector p(static_cast<Eigen::Index>(d));
      for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = uni(rng);
      rows.push_back(std::move(p));
    }
  } else {
    const Matrix& pts = std::get<HullRegion>(region).points;
    if (pts.rows() < 1) throw InvalidArgument("hull region needs at least one point");
    const auto m = static_cast<std::size_t>(pts.rows());
    if (m <= n_samples / 2) {
      for (Eigen::Index r = 0; r < pts.rows(); ++r) rows.push_back(pts.row(r).transpose());
    }
    std::exponential_distribution<double> expo(1.0);
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const std::size_t sparse = std::min(m, static_cast<std::size_t>(pts.cols()) + 1);
    bool dense = true;
    while (rows.size() < n_samples) {
      Vector p = Vector::Zero(pts.cols());
      double total = 0.0;
      if (dense) {
        for (std::size_t i = 0; i < m; ++i) {
          const double w = expo(rng);
          p += w * pts.row(static_cast<Eigen::Index>(i)).transpose();
          total += w;
        }
      } else {
        // Partial Fisher-Yates: the first `sparse` entries become a random subset.
        for (std::size_t i = 0; i < sparse; ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, m - 1);
          std::swap(idx[i], idx[pick(rng)]);
          const double w = expo(rng);
          p += w * pts.row(static_cast<Eigen::Index>(idx[i])).transpose();
          total += w;
        }
      }
      rows.push_back(p / total);
      dense = !dense;
    }
  }

  Matrix out(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return out;
}

EpsilonCertificate epsilon_equal(const PolynomialSurface& f, const PolynomialSurface& g, const Region& region,
                                 double epsilon, std::size_t n_samples, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (f.dim() != g.dim()) throw InvalidArgument("epsilon_equal: dimension mismatch");
  EpsilonCertificate cert;
  cert.epsilon = epsilon;
  cert.region_kind = std::holds_alternative<Box>(region) ? "box" : "hull";
  cert.seed = seed;
  const Matrix samples = sample_region(region, n_samples, seed);
  if (static_cast<std::size_t>(samples.cols()) != f.dim()) throw InvalidArgument("region dimension mismatch");
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    const Vector x = samples.row(r).transpose();
    const double dev = std::abs(f(x) - g(x));
    ++cert.n_samples;
    cert.max_observed_deviation = std::max(cert.max_observed_deviation, dev);
    if (!(dev < epsilon)) {
      cert.verdict = EpsilonVerdict::NotEpsilonEqual;
      cert.witness = x;
      cert.witness_deviation = dev;
      return cert;
    }
  }
  cert.verdict = EpsilonVerdict::EpsilonEqual;
  return cert;
}

}  // namespace hullscope::poly
