#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hullscope/error.hpp"

namespace hullscope {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Labeled point cloud. Rows of `points` are samples; labels are dense class
/// ids starting at 0. Immutable after construction.
class Dataset {
 public:
  Dataset(Matrix points, std::vector<int> labels);

  const Matrix& points() const noexcept { return points_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  std::size_t n() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  int n_classes() const noexcept { return n_classes_; }

  Vector point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)).transpose(); }

  /// Rows whose label equals `label`, in original order.
  Matrix points_with_label(int label) const;

 private:
  Matrix points_;
  std::vector<int> labels_;
  int n_classes_ = 0;
};

/// The hypercube [lower, upper]^dim.
struct Box {
  double lower = -1.0;
  double upper = 1.0;
  std::size_t dim = 1;

  Box() = default;
  Box(double lower, double upper, std::size_t dim);

  double width() const noexcept { return upper - lower; }
  double diameter() const noexcept;
  bool contains(const Vector& x, double slack = 0.0) const;

  /// Smallest hypercube containing every row of `points`, widened by
  /// `pad_fraction` of its width on each side (and to unit width if flat).
  static Box bounding(const Matrix& points, double pad_fraction = 0.05);
};

/// Selects the label column of a CSV file either by header name or by
/// zero-based position.
using LabelColumn = std::variant<std::string, std::size_t>;

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column);

/// Writes features as x0..x{d-1} followed by a `label` column, with 17
/// significant digits so the text round-trips.
void save_csv(const std::filesystem::path& path, const Dataset& data,
              const std::string& label_name = "label");

/// HSM1 binary matrix format: "HSM1", u32 rows, u32 cols, u32 reserved (0),
/// then rows*cols little-endian IEEE-754 doubles in row-major order.
void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_matrix(const Matrix& m);
Matrix decode_matrix(const std::vector<std::uint8_t>& bytes);

inline constexpr std::size_t kHsmHeaderBytes = 16;

// Synthetic generators. All are pure functions of their arguments.

Dataset gaussian_blobs(std::size_t n_per_class, std::size_t d, const std::vector<Vector>& centers,
                       double std_dev, std::uint64_t seed);

/// Two classes in the plane split only by the diagonal line x0 + x1 = 2:
/// label 0 gathers blobs at (0,1) and (1,0), label 1 blobs at (2,1) and (1,2).
/// Neither a line through the origin nor an axis-parallel line separates them.
Dataset diagonal_blobs(std::size_t n_per_blob, double std_dev, std::uint64_t seed);

/// Quadrants (+,+) and (-,-) get label 0; (+,-) and (-,+) get label 1.
Dataset xor_dataset(std::size_t n_per_quadrant, double noise_std, std::uint64_t seed);

/// Uniform samples in `box`, all labeled 0.
Dataset uniform_box(std::size_t n, const Box& box, std::uint64_t seed);

/// Standard normal samples in R^d, all labeled 0.
Dataset standard_normal(std::size_t n, std::size_t d, std::uint64_t seed);

/// Stacks two point sets into a two-class dataset (X -> 0, Y -> 1).
Dataset two_class(const Matrix& x, const Matrix& y);

}  // namespace hullscope
