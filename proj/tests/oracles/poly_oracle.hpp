#pragma once

// Plain re-derivations of the polynomial conventions used to check the
// library: basis ordering by sorting, term-by-term evaluation with std::pow.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

inline std::vector<std::vector<int>> sorted_basis(int dim, int degree) {
  std::vector<std::vector<int>> all;
  std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == dim) {
      if (std::accumulate(alpha.begin(), alpha.end(), 0) <= degree) all.push_back(alpha);
      return;
    }
    for (int p = 0; p <= degree; ++p) {
      alpha[static_cast<std::size_t>(i)] = p;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    const int sa = std::accumulate(a.begin(), a.end(), 0);
    const int sb = std::accumulate(b.begin(), b.end(), 0);
    if (sa != sb) return sa < sb;
    return a > b;
  });
  return all;
}

inline double term_by_term(const std::vector<std::vector<int>>& basis, const Eigen::VectorXd& coeffs, double lower,
                           double upper, const Eigen::VectorXd& x) {
  double total = 0.0;
  for (std::size_t t = 0; t < basis.size(); ++t) {
    double term = coeffs(static_cast<Eigen::Index>(t));
    for (std::size_t i = 0; i < basis[t].size(); ++i) {
      const double s = 2.0 * (x(static_cast<Eigen::Index>(i)) - lower) / (upper - lower) - 1.0;
      term *= std::pow(s, basis[t][i]);
    }
    total += term;
  }
  return total;
}

/// Smallest RMS over `samples` of an affine D(x) = a + b x with D(anchor) = delta,
/// for f(x) = x in 1-D, written out in closed form.
inline double affine_gap_closed_form(const Eigen::VectorXd& samples, double anchor, double delta) {
  const double m = static_cast<double>(samples.size());
  const double sx = samples.sum();
  const double sxx = samples.squaredNorm();
  // D(x) = delta + b (x - anchor); minimise sum (delta + b (x_i - anchor))^2 over b.
  const double su = sx - m * anchor;
  const double suu = sxx - 2.0 * anchor * sx + m * anchor * anchor;
  const double b = -delta * su / suu;
  const double sse = m * delta * delta + 2.0 * delta * b * su + b * b * suu;
  return std::sqrt(std::max(0.0, sse) / m);
}

}  // namespace oracle
