#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <fstream>
#include <random>

#include "hullscope/arrays.hpp"
#include "hullscope/error.hpp"

using namespace hullscope;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("hullscope_arrays_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  std::filesystem::path dir_;
};

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

using CsvTest = TempDir;

TEST_F(CsvTest, ParsesThreeRowFile) {
  const auto p = write("a.csv", "x0,x1,label\n0,0,0\n1,0,0\n0,1,1\n");
  const Dataset d = load_csv(p, std::string("label"));
  EXPECT_EQ(d.n(), 3u);
  EXPECT_EQ(d.d(), 2u);
  EXPECT_EQ(d.labels(), (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(d.points()(2, 1), 1.0);
  EXPECT_EQ(d.n_classes(), 2u);
}

TEST_F(CsvTest, LabelColumnByIndexKeepsFeatureOrder) {
  const auto p = write("a.csv", "label,b,a\n1,2.5,-3\n0,4,5\n");
  const Dataset d = load_csv(p, std::size_t{0});
  EXPECT_EQ(d.labels(), (std::vector<int>{1, 0}));
  EXPECT_EQ(d.points()(0, 0), 2.5);
  EXPECT_EQ(d.points()(0, 1), -3.0);
}

TEST_F(CsvTest, HeaderOnlyIsNoDataRows) {
  const auto p = write("a.csv", "x0,x1,label\n");
  EXPECT_NE(error_of([&] { load_csv(p, std::string("label")); }).find("no data rows"), std::string::npos);
}

TEST_F(CsvTest, NonNumericCellNamesRowAndColumn) {
  const auto p = write("a.csv", "x0,x1,label\n0,0,0\n1,abc,1\n");
  const std::string msg = error_of([&] { load_csv(p, std::string("label")); });
  EXPECT_NE(msg.find("'abc'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("x1"), std::string::npos) << msg;
}

TEST_F(CsvTest, RaggedRowAndUnknownColumnAndMissingFile) {
  const auto p = write("a.csv", "x0,x1,label\n0,0,0\n1,1\n");
  EXPECT_NE(error_of([&] { load_csv(p, std::string("label")); }).find("ragged row 3"), std::string::npos);
  const auto q = write("b.csv", "x0,x1,label\n0,0,0\n");
  EXPECT_NE(error_of([&] { load_csv(q, std::string("y")); }).find("unknown label column"), std::string::npos);
  EXPECT_THROW(load_csv(dir_ / "missing.csv", std::string("label")), ParseError);
}

TEST_F(CsvTest, SaveLoadRoundTripWithinTextPrecision) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  Matrix pts(40, 3);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts(i) = u(rng) * std::pow(10.0, static_cast<double>(i % 7) - 5.0);
  std::vector<int> labels(40);
  for (int i = 0; i < 40; ++i) labels[static_cast<std::size_t>(i)] = i % 3;
  const Dataset d(pts, labels);
  save_csv(dir_ / "rt.csv", d);
  const Dataset back = load_csv(dir_ / "rt.csv", std::string("label"));
  ASSERT_EQ(back.n(), d.n());
  EXPECT_EQ(back.labels(), d.labels());
  for (Eigen::Index i = 0; i < pts.size(); ++i) {
    EXPECT_LE(std::abs(back.points()(i) - pts(i)), 1e-12 * std::abs(pts(i)));
  }
}

using HsmTest = TempDir;

TEST_F(HsmTest, IdentityRoundTripsBitExactly) {
  const Matrix eye = Matrix::Identity(2, 2);
  save_matrix(dir_ / "i.hsm", eye);
  const Matrix back = load_matrix(dir_ / "i.hsm");
  EXPECT_EQ(back, eye);
}

TEST_F(HsmTest, RowVectorFileSize) {
  Matrix row(1, 3);
  row << 1.5, -2.0, 3.25;
  save_matrix(dir_ / "r.hsm", row);
  EXPECT_EQ(std::filesystem::file_size(dir_ / "r.hsm"), 16u + 24u);
  const auto bytes = encode_matrix(row);
  ASSERT_EQ(bytes.size(), 40u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "HSM1");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 3);
  EXPECT_EQ(bytes[12] | bytes[13] | bytes[14] | bytes[15], 0);
  // 1.5 = 0x3FF8000000000000, little-endian
  EXPECT_EQ(bytes[16 + 7], 0x3F);
  EXPECT_EQ(bytes[16 + 6], 0xF8);
}

TEST(Hsm, RandomMatricesRoundTripBitExactly) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 9);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int trial = 0; trial < 200; ++trial) {
    Matrix m(dim(rng), dim(rng));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      double v;
      do {
        const std::uint64_t b = bits(rng);
        std::memcpy(&v, &b, sizeof v);
      } while (!std::isfinite(v));
      m(i) = v;
    }
    const Matrix back = decode_matrix(encode_matrix(m));
    ASSERT_EQ(back.rows(), m.rows());
    ASSERT_EQ(std::memcmp(back.data(), m.data(), sizeof(double) * static_cast<std::size_t>(m.size())), 0);
  }
}

TEST(Hsm, Errors) {
  EXPECT_NE(error_of([] { encode_matrix(Matrix(0, 0)); }).find("empty matrix not allowed"), std::string::npos);
  auto bytes = encode_matrix(Matrix::Ones(2, 2));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_NE(error_of([&] { decode_matrix(bad); }).find("magic-byte mismatch"), std::string::npos);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_NE(error_of([&] { decode_matrix(truncated); }).find("truncated"), std::string::npos);
  auto huge = bytes;
  huge[4] = huge[5] = huge[6] = huge[7] = 0xFF;
  huge[8] = huge[9] = huge[10] = huge[11] = 0xFF;
  EXPECT_THROW(decode_matrix(huge), ParseError);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(decode_matrix(trailing), ParseError);
  auto reserved = bytes;
  reserved[12] = 1;
  EXPECT_THROW(decode_matrix(reserved), ParseError);
}

TEST(Generators, BlobsDeterministicAndValidated) {
  Vector a(2), b(2);
  a << -1, 0;
  b << 1, 0;
  const Dataset d1 = gaussian_blobs(20, 2, {a, b}, 0.5, 7);
  const Dataset d2 = gaussian_blobs(20, 2, {a, b}, 0.5, 7);
  EXPECT_EQ(d1.points(), d2.points());
  EXPECT_EQ(d1.labels(), d2.labels());
  EXPECT_EQ(d1.labels()[0], 0);
  EXPECT_EQ(d1.labels()[39], 1);
  EXPECT_NE(error_of([&] { gaussian_blobs(0, 2, {a, b}, 0.5, 7); }).find("empty class"), std::string::npos);
  EXPECT_THROW(gaussian_blobs(5, 2, {a, b}, 0.0, 7), InvalidArgument);
  EXPECT_THROW(gaussian_blobs(5, 2, {a, b}, -1.0, 7), InvalidArgument);
  EXPECT_THROW(gaussian_blobs(5, 3, {a, b}, 1.0, 7), InvalidArgument);
}

TEST(Generators, TinyStdCollapsesOntoCentres) {
  Vector a(2), b(2);
  a << -1, 0;
  b << 1, 0;
  const Dataset d = gaussian_blobs(10, 2, {a, b}, 1e-300, 1);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_LE((d.point(i) - a).norm(), 1e-290);
}

TEST(Generators, XorNoiselessIsTheFourCorners) {
  const Dataset d = xor_dataset(1, 0.0, 5);
  ASSERT_EQ(d.n(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const Vector p = d.point(i);
    EXPECT_EQ(std::abs(p(0)), 1.0);
    EXPECT_EQ(std::abs(p(1)), 1.0);
    EXPECT_EQ(d.labels()[i], p(0) * p(1) > 0 ? 0 : 1);
  }
  EXPECT_EQ(xor_dataset(3, 0.1, 9).points(), xor_dataset(3, 0.1, 9).points());
}

// Farkas-style certificate: with y = +-1 labels, sum y_i x_i = 0 and
// sum y_i = 0, so sum y_i (w.x_i + b) = 0 for every (w, b) and the strict
// inequalities y_i (w.x_i + b) > 0 cannot all hold.
TEST(Generators, XorIsNotLinearlySeparable) {
  const Dataset d = xor_dataset(1, 0.0, 0);
  Vector s = Vector::Zero(2);
  double sy = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double y = d.labels()[i] == 0 ? 1.0 : -1.0;
    s += y * d.point(i);
    sy += y;
  }
  EXPECT_EQ(s.norm(), 0.0);
  EXPECT_EQ(sy, 0.0);
  // and a coarse enumeration over directions and offsets finds no separator
  for (int k = 0; k < 360; ++k) {
    const double t = k * M_PI / 180.0;
    for (double bias = -3.0; bias <= 3.0; bias += 0.05) {
      int correct = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        const double v = std::cos(t) * d.point(i)(0) + std::sin(t) * d.point(i)(1) + bias;
        correct += (v > 0) == (d.labels()[i] == 0);
      }
      ASSERT_LT(correct, 4);
    }
  }
}

TEST(Generators, DiagonalBlobsNeedBothCoordinates) {
  const Dataset d = diagonal_blobs(50, 0.15, 11);
  EXPECT_EQ(d.n(), 200u);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < d.n(); ++i) wrong += (d.point(i).sum() > 2.0) != (d.labels()[i] == 1);
  EXPECT_EQ(wrong, 0u);
}

TEST(DatasetInvariants, RejectsBadInput) {
  Matrix p(2, 1);
  p << 0, std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Dataset(p, {0, 0}), InvalidArgument);
  EXPECT_THROW(Dataset(Matrix::Zero(2, 1), {0}), InvalidArgument);
  EXPECT_THROW(Dataset(Matrix::Zero(2, 1), {0, -1}), InvalidArgument);
  EXPECT_THROW(Box(1.0, 1.0, 2), InvalidArgument);
  EXPECT_THROW(Box(0.0, 1.0, 0), InvalidArgument);
}
