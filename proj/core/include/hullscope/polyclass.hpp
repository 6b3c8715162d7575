#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hullscope/arrays.hpp"

namespace hullscope::poly {

using MultiIndex = std::vector<int>;

/// Number of monomials of total degree <= degree in `dim` variables,
/// C(dim + degree, degree).
std::size_t basis_size(std::size_t dim, int degree);

/// All multi-indices with |alpha| <= degree in graded-lexicographic order:
/// ascending total degree, and within one degree descending powers of x0,
/// then x1, and so on. For dim=2, degree=2: 1, x0, x1, x0^2, x0 x1, x1^2.
std::vector<MultiIndex> graded_lex_basis(std::size_t dim, int degree);

/// Multivariate polynomial over a hypercube domain. Monomials are taken in
/// coordinates rescaled affinely from [lower, upper] to [-1, 1], so on the
/// domain [-1, 1]^d the coefficients are the ordinary monomial coefficients.
class PolynomialSurface {
 public:
  PolynomialSurface(Box domain, int degree, Vector coefficients);

  static PolynomialSurface zero(Box domain, int degree);
  /// Builds from (multi-index, coefficient) pairs; unspecified terms are 0.
  static PolynomialSurface from_terms(Box domain, int degree,
                                      const std::vector<std::pair<MultiIndex, double>>& terms);

  const Box& domain() const noexcept { return domain_; }
  int degree() const noexcept { return degree_; }
  std::size_t dim() const noexcept { return domain_.dim; }
  const std::vector<MultiIndex>& basis() const noexcept { return basis_; }
  const Vector& coefficients() const noexcept { return coefficients_; }

  double operator()(const Vector& x) const;
  /// Values at each row of `points`.
  Vector evaluate_rows(const Matrix& points) const;

  Vector scaled(const Vector& x) const;
  /// Monomial features of x in basis order.
  Vector features(const Vector& x) const;
  /// Feature matrix with one row per row of `points`.
  Matrix design_matrix(const Matrix& points) const;

  /// Same function expressed in the basis of a higher degree.
  PolynomialSurface elevated(int new_degree) const;
  PolynomialSurface with_coefficients(Vector coefficients) const;

  PolynomialSurface operator+(const PolynomialSurface& other) const;
  PolynomialSurface operator-(const PolynomialSurface& other) const;
  PolynomialSurface operator*(double s) const;

 private:
  Box domain_;
  int degree_ = 0;
  std::vector<MultiIndex> basis_;
  Vector coefficients_;
};

struct Evaluation {
  double value = 0.0;
  bool outside_domain = false;
};

double eval(const PolynomialSurface& f, const Vector& x);
/// Like eval, additionally flagging points outside the domain box.
Evaluation eval_flagged(const PolynomialSurface& f, const Vector& x);

// ---------------------------------------------------------------------------
// Separators

inline constexpr double kDefaultRidge = 1e-8;

/// Least-squares fit of targets +1 on X and -1 on Y. The surface is always
/// returned; `misclassified` counts points with f(x) <= 0 on X or f(y) >= 0 on Y.
struct SeparatorFit {
  PolynomialSurface surface;
  std::size_t misclassified = 0;

  bool separates() const noexcept { return misclassified == 0; }
};

/// With ridge == 0 a rank-deficient system raises linalg::RankDeficient.
/// The default domain is the padded bounding hypercube of X and Y.
SeparatorFit fit_separator(const Matrix& x, const Matrix& y, int degree, double ridge = kDefaultRidge,
                           const std::optional<Box>& domain = std::nullopt);

struct MinimalSeparator {
  int degree = 0;
  PolynomialSurface surface;
};

/// Smallest degree in [1, max_degree] whose least-squares fit separates X and Y.
std::optional<MinimalSeparator> minimal_degree_separator(const Matrix& x, const Matrix& y, int max_degree,
                                                         double ridge = kDefaultRidge,
                                                         const std::optional<Box>& domain = std::nullopt);

/// Number of points on the wrong side (f <= 0 on X, f >= 0 on Y).
std::size_t count_misclassified(const PolynomialSurface& f, const Matrix& x, const Matrix& y);

/// min |f| over X and Y. Throws InvalidArgument if f does not separate them.
double functional_margin(const PolynomialSurface& f, const Matrix& x, const Matrix& y);

// ---------------------------------------------------------------------------
// epsilon-equality

struct HullRegion {
  Matrix points;
};

using Region = std::variant<Box, HullRegion>;

/// Deterministic samples of a region. Boxes include their corners when there
/// are few enough; hull regions include the generating points, then random
/// convex combinations (dense Dirichlet weights and sparse ones on d+1 points).
Matrix sample_region(const Region& region, std::size_t n_samples, std::uint64_t seed);

inline constexpr std::size_t kDefaultCertificateSamples = 10000;

enum class EpsilonVerdict { EpsilonEqual, NotEpsilonEqual };

/// Sample-based evidence (not a proof) that |f - g| < epsilon on a region.
struct EpsilonCertificate {
  double epsilon = 0.0;
  std::string region_kind;  ///< "box" or "hull"
  std::size_t n_samples = 0;  ///< samples actually evaluated
  std::uint64_t seed = 0;
  double max_observed_deviation = 0.0;
  EpsilonVerdict verdict = EpsilonVerdict::EpsilonEqual;
  std::optional<Vector> witness;  ///< set iff NotEpsilonEqual
  double witness_deviation = 0.0;

  bool equal() const noexcept { return verdict == EpsilonVerdict::EpsilonEqual; }
};

/// Stops at the first sample where |f - g| >= epsilon.
EpsilonCertificate epsilon_equal(const PolynomialSurface& f, const PolynomialSurface& g, const Region& region,
                                 double epsilon, std::size_t n_samples = kDefaultCertificateSamples,
                                 std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Sign preservation under small perturbations

struct PerturbationEntry {
  std::size_t index = 0;
  bool certified_equal = false;  ///< epsilon-equal to f on hull(X u Y)
  double max_deviation = 0.0;
  bool separates = false;
  bool violation = false;  ///< certified but does not separate X and Y like f
};

struct PerturbationReport {
  double margin = 0.0;
  double epsilon = 0.0;
  std::vector<PerturbationEntry> entries;
  std::size_t n_certified = 0;
  std::size_t n_violations = 0;
};

/// For every g epsilon-equal to f over hull(X u Y) (sample-certified), checks
/// that g separates X and Y the same way f does. Requires epsilon below the
/// functional margin of f; otherwise throws InvalidArgument.
PerturbationReport perturbation_separation_check(const PolynomialSurface& f,
                                                 const std::vector<PolynomialSurface>& family, const Matrix& x,
                                                 const Matrix& y, double epsilon,
                                                 std::size_t n_samples = kDefaultCertificateSamples,
                                                 std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Extensions outside the hull

/// Points outside the hull where an extension must deviate from f by a
/// prescribed amount: f+(point_j) - f(point_j) = targets_j.
struct AnchorSet {
  Matrix points;
  Vector targets;
};

class InfeasibleExtension : public Error {
 public:
  using Error::Error;
};

class InsufficientDegree : public Error {
 public:
  InsufficientDegree(double achieved, double epsilon);
  double achieved_deviation() const noexcept { return achieved_; }

 private:
  double achieved_ = 0.0;
};

struct PairWitness {
  std::size_t first = 0;
  std::size_t second = 0;
  Vector point;
  double deviation = 0.0;
  bool distinct = false;  ///< deviation >= distinctness threshold
};

struct ExtensionOptions {
  std::size_t certificate_samples = kDefaultCertificateSamples;
  std::size_t witness_samples = 4096;
  double distinct_factor = 10.0;  ///< members must differ by distinct_factor * epsilon somewhere
};

struct ExtensionFamily {
  std::vector<PolynomialSurface> members;  ///< members[0] is f plus the minimum-norm correction
  double base_inside_deviation = 0.0;      ///< max |correction| over the certificate samples
  std::vector<EpsilonCertificate> inside;  ///< one per member, against f over hull(inside samples)
  std::vector<double> anchor_errors;       ///< per member, max |f+(a) - f(a) - target|
  std::vector<PairWitness> pairs;          ///< every unordered pair of members
  bool all_inside_equal = false;
  bool all_distinct = false;
};

/// Builds k polynomials of degree `degree_up` that agree with f to within
/// epsilon on hull(inside_samples) yet hit the anchor targets outside it, and
/// differ pairwise by at least distinct_factor * epsilon somewhere in the box.
/// f+ = f + D where D minimises sum D(s)^2 over the inside samples subject to
/// D(anchor_j) = target_j; further members add scaled directions of the
/// (near-)null space of the combined system.
ExtensionFamily extension_family(const PolynomialSurface& f, int degree_up, std::size_t k,
                                 const Matrix& inside_samples, const AnchorSet& anchors, double epsilon,
                                 std::uint64_t seed, const ExtensionOptions& options = {});

/// Smallest root-mean-square deviation from f over `inside_samples` achievable
/// by any h of degree <= degree_h with h(anchor) = f(anchor) + delta.
double extension_gap(const PolynomialSurface& f, int degree_h, const Matrix& inside_samples, const Vector& anchor,
                     double delta);

}  // namespace hullscope::poly
