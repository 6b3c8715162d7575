#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>

#include "hullscope/error.hpp"

namespace hullscope::cli {

namespace {

constexpr double kCanvas = 512.0;
constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::array<const char*, 4> kContourColors{"#000000", "#e377c2", "#17becf", "#bcbd22"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

double lerp_root(double a, double fa, double b, double fb) {
  const double t = fa / (fa - fb);
  return a + t * (b - a);
}

}  // namespace

std::vector<Segment> zero_contour(const poly::PolynomialSurface& f, const Box& view, int grid) {
  if (f.dim() != 2) throw Error("render requires 2-D");
  const double h = view.width() / grid;
  const auto n = static_cast<std::size_t>(grid + 1);
  std::vector<double> values(n * n);
  Vector p(2);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      p << view.lower + static_cast<double>(i) * h, view.lower + static_cast<double>(j) * h;
      double v = f(p);
      if (v == 0.0) v = 1e-300;
      values[j * n + i] = v;
    }
  }

  std::vector<Segment> out;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double x0 = view.lower + static_cast<double>(i) * h;
      const double y0 = view.lower + static_cast<double>(j) * h;
      const double x1 = x0 + h;
      const double y1 = y0 + h;
      // corners: a=(x0,y0) b=(x1,y0) c=(x1,y1) d=(x0,y1)
      const double a = values[j * n + i];
      const double b = values[j * n + i + 1];
      const double c = values[(j + 1) * n + i + 1];
      const double d = values[(j + 1) * n + i];
      const int mask = (a > 0) | ((b > 0) << 1) | ((c > 0) << 2) | ((d > 0) << 3);
      if (mask == 0 || mask == 15) continue;

      const std::pair<double, double> bottom{lerp_root(x0, a, x1, b), y0};
      const std::pair<double, double> right{x1, lerp_root(y0, b, y1, c)};
      const std::pair<double, double> top{lerp_root(x0, d, x1, c), y1};
      const std::pair<double, double> left{x0, lerp_root(y0, a, y1, d)};
      auto seg = [&](const std::pair<double, double>& u, const std::pair<double, double>& v) {
        out.push_back({u.first, u.second, v.first, v.second});
      };

      switch (mask) {
        case 1: case 14: seg(left, bottom); break;
        case 2: case 13: seg(bottom, right); break;
        case 3: case 12: seg(left, right); break;
        case 4: case 11: seg(right, top); break;
        case 6: case 9: seg(bottom, top); break;
        case 7: case 8: seg(left, top); break;
        case 5: case 10: {
          const bool centre_positive = (a + b + c + d) > 0.0;
          const bool a_positive = mask == 5;
          if (centre_positive == a_positive) {
            seg(left, top);
            seg(bottom, right);
          } else {
            seg(left, bottom);
            seg(right, top);
          }
          break;
        }
        default: break;
      }
    }
  }
  return out;
}

std::vector<std::pair<double, double>> hull_outline(const Matrix& points) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index r = 0; r < points.rows(); ++r) pts.emplace_back(points(r, 0), points(r, 1));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::string render_svg(const Scene& scene) {
  if (scene.points.cols() != 2 || (scene.hull_of && scene.hull_of->cols() != 2)) throw Error("render requires 2-D");
  for (const auto& f : scene.contours) {
    if (f.dim() != 2) throw Error("render requires 2-D");
  }

  Box view;
  if (scene.view) {
    view = *scene.view;
  } else {
    Matrix all(scene.points.rows() + (scene.hull_of ? scene.hull_of->rows() : 0), 2);
    all.topRows(scene.points.rows()) = scene.points;
    if (scene.hull_of) all.bottomRows(scene.hull_of->rows()) = *scene.hull_of;
    view = Box::bounding(all, 0.1);
  }
  const double scale = kCanvas / view.width();
  auto sx = [&](double x) { return fmt((x - view.lower) * scale); };
  auto sy = [&](double y) { return fmt(kCanvas - (y - view.lower) * scale); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
  svg += "<rect width=\"512\" height=\"512\" fill=\"#ffffff\"/>\n";

  if (scene.hull_of) {
    const auto outline = hull_outline(*scene.hull_of);
    if (!outline.empty()) {
      svg += "<polygon class=\"hull\" fill=\"#f0f0f0\" stroke=\"#7f7f7f\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < outline.size(); ++i) {
        if (i > 0) svg += ' ';
        svg += sx(outline[i].first) + "," + sy(outline[i].second);
      }
      svg += "\"/>\n";
    }
  }

  for (std::size_t s = 0; s < scene.contours.size(); ++s) {
    const auto segments = zero_contour(scene.contours[s], view);
    if (segments.empty()) continue;
    svg += "<path class=\"contour\" fill=\"none\" stroke=\"";
    svg += kContourColors[s % kContourColors.size()];
    svg += "\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const auto& g = segments[i];
      if (i > 0) svg += ' ';
      svg += "M" + sx(g.x0) + " " + sy(g.y0) + "L" + sx(g.x1) + " " + sy(g.y1);
    }
    svg += "\"/>\n";
  }

  for (Eigen::Index r = 0; r < scene.points.rows(); ++r) {
    const int label = r < static_cast<Eigen::Index>(scene.labels.size()) ? scene.labels[static_cast<std::size_t>(r)] : 0;
    svg += "<circle cx=\"" + sx(scene.points(r, 0)) + "\" cy=\"" + sy(scene.points(r, 1)) + "\" r=\"3\" fill=\"" +
           kPalette[static_cast<std::size_t>(label) % kPalette.size()] + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_svg(const std::filesystem::path& path, const Scene& scene) {
  const std::string svg = render_svg(scene);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << svg;
}

}  // namespace hullscope::cli
