#include "hullscope/arrays.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace hullscope {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::string where(std::size_t line, std::size_t column, const std::string& name) {
  std::ostringstream os;
  os << "row " << line << ", column " << (column + 1) << " ('" << name << "')";
  return os.str();
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

Dataset::Dataset(Matrix points, std::vector<int> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw InvalidArgument("dataset needs at least one sample and one dimension");
  }
  if (labels_.size() != static_cast<std::size_t>(points_.rows())) {
    throw InvalidArgument("label count " + std::to_string(labels_.size()) + " does not match sample count " +
                          std::to_string(points_.rows()));
  }
  if (!all_finite(points_)) throw InvalidArgument("dataset contains non-finite coordinates");
  for (const int label : labels_) {
    if (label < 0) throw InvalidArgument("labels must be nonnegative");
    n_classes_ = std::max(n_classes_, label + 1);
  }
}

Matrix Dataset::points_with_label(int label) const {
  const auto count = std::count(labels_.begin(), labels_.end(), label);
  Matrix out(count, points_.cols());
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) out.row(r++) = points_.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

Box::Box(double lower_, double upper_, std::size_t dim_) : lower(lower_), upper(upper_), dim(dim_) {
  if (!(std::isfinite(lower) && std::isfinite(upper)) || !(lower < upper)) {
    throw InvalidArgument("box requires finite lower < upper");
  }
  if (dim < 1) throw InvalidArgument("box dimension must be at least 1");
}

double Box::diameter() const noexcept { return width() * std::sqrt(static_cast<double>(dim)); }

bool Box::contains(const Vector& x, double slack) const {
  if (static_cast<std::size_t>(x.size()) != dim) return false;
  return (x.array() >= lower - slack).all() && (x.array() <= upper + slack).all();
}

Box Box::bounding(const Matrix& points, double pad_fraction) {
  if (points.size() == 0) throw InvalidArgument("cannot bound an empty point set");
  double lo = points.minCoeff();
  double hi = points.maxCoeff();
  if (hi - lo <= 0.0) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = (hi - lo) * pad_fraction;
  return Box(lo - pad, hi + pad, static_cast<std::size_t>(points.cols()));
}

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_row(line);
      break;
    }
  }
  if (header.empty()) throw ParseError(path.string() + ": missing header row");

  std::size_t label_idx = 0;
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw ParseError(path.string() + ": unknown label column '" + *name + "'");
    label_idx = static_cast<std::size_t>(it - header.begin());
  } else {
    label_idx = std::get<std::size_t>(label_column);
    if (label_idx >= header.size()) {
      throw ParseError(path.string() + ": label column index " + std::to_string(label_idx) + " out of range (" +
                       std::to_string(header.size()) + " columns)");
    }
  }
  if (header.size() < 2) throw ParseError(path.string() + ": need at least one feature column besides the label");

  std::vector<double> values;
  std::vector<int> labels;
  const std::size_t d = header.size() - 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw ParseError(path.string() + ": ragged row " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      if (c == label_idx) {
        int label = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
        if (ec != std::errc() || ptr != cell.data() + cell.size() || label < 0) {
          throw ParseError(path.string() + ": invalid label '" + cell + "' at " + where(line_no, c, header[c]));
        }
        labels.push_back(label);
      } else {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
          throw ParseError(path.string() + ": non-numeric cell '" + cell + "' at " + where(line_no, c, header[c]));
        }
        values.push_back(v);
      }
    }
  }
  if (labels.empty()) throw ParseError(path.string() + ": no data rows");

  Matrix points(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) points(r, c) = values[static_cast<std::size_t>(r) * d + c];
  }
  return Dataset(std::move(points), std::move(labels));
}

void save_csv(const std::filesystem::path& path, const Dataset& data, const std::string& label_name) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(17);
  for (std::size_t c = 0; c < data.d(); ++c) out << 'x' << c << ',';
  out << label_name << '\n';
  for (std::size_t r = 0; r < data.n(); ++r) {
    for (std::size_t c = 0; c < data.d(); ++c) {
      out << data.points()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) << ',';
    }
    out << data.labels()[r] << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<std::uint8_t> encode_matrix(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw InvalidArgument("empty matrix not allowed");
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (static_cast<std::uint64_t>(m.rows()) > kMax || static_cast<std::uint64_t>(m.cols()) > kMax) {
    throw InvalidArgument("matrix dimension overflows 32-bit HSM1 header");
  }
  if (!m.allFinite()) throw InvalidArgument("matrix contains non-finite entries");

  std::vector<std::uint8_t> out;
  out.reserve(kHsmHeaderBytes + static_cast<std::size_t>(m.size()) * 8);
  for (const char ch : {'H', 'S', 'M', '1'}) out.push_back(static_cast<std::uint8_t>(ch));
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  put_u32(out, 0);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xffu));
    }
  }
  return out;
}

Matrix decode_matrix(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHsmHeaderBytes) throw ParseError("truncated HSM1 header");
  if (std::memcmp(bytes.data(), "HSM1", 4) != 0) throw ParseError("magic-byte mismatch: not an HSM1 file");
  const std::uint64_t rows = get_u32(bytes.data() + 4);
  const std::uint64_t cols = get_u32(bytes.data() + 8);
  if (get_u32(bytes.data() + 12) != 0) throw ParseError("HSM1 reserved header field must be zero");
  if (rows == 0 || cols == 0) throw ParseError("empty matrix not allowed");
  // rows, cols < 2^32, so rows*cols*8 < 2^67 may overflow 64 bits only via the final multiply.
  const std::uint64_t count = rows * cols;
  if (count > (std::numeric_limits<std::uint64_t>::max() - kHsmHeaderBytes) / 8 ||
      count > static_cast<std::uint64_t>(std::numeric_limits<Eigen::Index>::max())) {
    throw ParseError("HSM1 dimension overflow");
  }
  const std::uint64_t expected = kHsmHeaderBytes + count * 8;
  if (bytes.size() < expected) throw ParseError("truncated HSM1 payload");
  if (bytes.size() > expected) throw ParseError("trailing bytes after HSM1 payload");

  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const std::uint8_t* p = bytes.data() + kHsmHeaderBytes;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
      m(r, c) = std::bit_cast<double>(bits);
      p += 8;
    }
  }
  return m;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  const auto bytes = encode_matrix(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open HSM1 file '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_matrix(bytes);
}

Dataset gaussian_blobs(std::size_t n_per_class, std::size_t d, const std::vector<Vector>& centers, double std_dev,
                       std::uint64_t seed) {
  if (n_per_class == 0) throw InvalidArgument("empty class: n_per_class must be at least 1");
  if (centers.empty()) throw InvalidArgument("gaussian_blobs needs at least one center");
  if (!(std_dev > 0.0) || !std::isfinite(std_dev)) throw InvalidArgument("std must be positive and finite");
  for (const auto& c : centers) {
    if (static_cast<std::size_t>(c.size()) != d) {
      throw InvalidArgument("center dimension " + std::to_string(c.size()) + " does not match d=" +
                            std::to_string(d));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(n_per_class * centers.size());
  Matrix points(n, static_cast<Eigen::Index>(d));
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    for (std::size_t i = 0; i < n_per_class; ++i, ++row) {
      for (Eigen::Index c = 0; c < points.cols(); ++c) points(row, c) = centers[k](c) + std_dev * normal(rng);
      labels.push_back(static_cast<int>(k));
    }
  }
  return Dataset(std::move(points), std::move(labels));
}

Dataset xor_dataset(std::size_t n_per_quadrant, double noise_std, std::uint64_t seed) {
  if (n_per_quadrant == 0) throw InvalidArgument("xor_dataset needs n_per_quadrant >= 1");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw InvalidArgument("noise_std must be >= 0");
  constexpr double kQuadrants[4][2] = {{1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix points(static_cast<Eigen::Index>(4 * n_per_quadrant), 2);
  std::vector<int> labels;
  Eigen::Index row = 0;
  for (int q = 0; q < 4; ++q) {
    for (std::size_t i = 0; i < n_per_quadrant; ++i, ++row) {
      for (int c = 0; c < 2; ++c) {
        const double noise = noise_std > 0.0 ? noise_std * normal(rng) : 0.0;
        points(row, c) = kQuadrants[q][c] + noise;
      }
      labels.push_back(q < 2 ? 0 : 1);
    }
  }
  return Dataset(std::move(points), std::move(labels));
}

Dataset uniform_box(std::size_t n, const Box& box, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("uniform_box needs n >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(box.lower, box.upper);
  Matrix points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(box.dim));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) points(r, c) = uni(rng);
  }
  return Dataset(std::move(points), std::vector<int>(n, 0));
}

Dataset standard_normal(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw InvalidArgument("standard_normal needs n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) points(r, c) = normal(rng);
  }
  return Dataset(std::move(points), std::vector<int>(n, 0));
}

Dataset diagonal_blobs(std::size_t n_per_blob, double std_dev, std::uint64_t seed) {
  std::vector<Vector> centers(4, Vector(2));
  centers[0] << 0.0, 1.0;
  centers[1] << 1.0, 0.0;
  centers[2] << 2.0, 1.0;
  centers[3] << 1.0, 2.0;
  const Dataset raw = gaussian_blobs(n_per_blob, 2, centers, std_dev, seed);
  std::vector<int> labels = raw.labels();
  for (int& l : labels) l = l < 2 ? 0 : 1;
  return Dataset(raw.points(), std::move(labels));
}

Dataset two_class(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.cols()) throw InvalidArgument("two_class: dimension mismatch");
  Matrix points(x.rows() + y.rows(), x.cols());
  points << x, y;
  std::vector<int> labels(static_cast<std::size_t>(x.rows()), 0);
  labels.resize(static_cast<std::size_t>(points.rows()), 1);
  return Dataset(std::move(points), std::move(labels));
}

}  // namespace hullscope
