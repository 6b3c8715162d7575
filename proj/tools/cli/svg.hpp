#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hullscope/arrays.hpp"
#include "hullscope/polyclass.hpp"

namespace hullscope::cli {

inline constexpr int kContourGrid = 256;

/// Everything a 2-D render can show. The view defaults to the padded
/// bounding square of the points and hull vertices.
struct Scene {
  Matrix points;
  std::vector<int> labels;
  std::vector<poly::PolynomialSurface> contours;  ///< zero sets, drawn in order
  std::optional<Matrix> hull_of;                  ///< outline the convex hull of these rows
  std::optional<Box> view;
};

struct Segment {
  double x0, y0, x1, y1;
};

/// Zero-level segments of f over `view` traced with marching squares on a
/// grid x grid lattice of cells. Saddle cells are resolved by the cell centre.
std::vector<Segment> zero_contour(const poly::PolynomialSurface& f, const Box& view, int grid = kContourGrid);

/// Vertices of the convex hull of 2-D points, counter-clockwise, without
/// collinear points.
std::vector<std::pair<double, double>> hull_outline(const Matrix& points);

/// Standalone SVG document; throws Error("render requires 2-D") unless every
/// input is two-dimensional.
std::string render_svg(const Scene& scene);
void write_svg(const std::filesystem::path& path, const Scene& scene);

}  // namespace hullscope::cli
