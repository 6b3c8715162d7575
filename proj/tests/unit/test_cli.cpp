#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "hullscope/serialize.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using namespace hullscope;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hullscope_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::set<std::string> fill_colours(const std::string& svg, const std::string& element) {
  std::set<std::string> out;
  const std::regex re("<" + element + "[^>]*fill=\"(#[0-9a-f]{6})\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
    out.insert((*it)[1]);
  }
  return out;
}

}  // namespace

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  const auto unknown = run({"hull-check", "--bogus", "1"});
  EXPECT_EQ(unknown.code, cli::kExitUsage);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"hull-check", "--train", "x.csv"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"fit-poly", "--train", "x.csv", "--degree", "-1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"hull-check", "--train", "x.csv", "--query", "y.csv", "--dist-tol", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);

  const auto missing = run({"hull-check", "--train", path("missing.csv"), "--query", path("missing.csv")});
  EXPECT_EQ(missing.code, cli::kExitFailure);
  EXPECT_FALSE(missing.err.empty());
}

TEST_F(CliTest, ConfigIsEchoedAndReplayable) {
  ASSERT_EQ(run({"gen-data", "--kind", "blobs", "--n", "15", "--seed", "3", "--out", path("a.csv")}).code, 0);
  ASSERT_EQ(run({"gen-data", "--kind", "diagonal", "--n", "4", "--seed", "4", "--out", path("b.csv")}).code, 0);
  const auto r = run({"hull-check", "--train", path("a.csv"), "--query", path("b.csv"), "--label-col", "label"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.begin().key(), "config");
  EXPECT_EQ(j["config"]["subcommand"], "hull-check");
  EXPECT_EQ(j["config"]["dist-tol"], 1e-6);
  EXPECT_EQ(j["results"].size(), 16u);

  std::vector<std::string> replay = {j["config"]["subcommand"].get<std::string>()};
  for (const auto& [key, value] : j["config"].items()) {
    if (key == "subcommand" || value.is_null()) continue;
    replay.push_back("--" + key);
    replay.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  EXPECT_EQ(run(replay).out, r.out);
}

TEST_F(CliTest, OutWritesFileOnly) {
  const auto r = run({"lemma1-gap", "--max-degree", "4", "--out", path("gap.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto j = Json::parse(slurp(path("gap.json")));
  EXPECT_EQ(j["config"]["max-degree"], 4);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir_)) ++files;
  EXPECT_EQ(files, 1u);
}

TEST_F(CliTest, ExtensionDemoProducesCertifiedFamily) {
  const auto r = run({"lemma3-demo", "--degree-up", "6", "--k", "10", "--epsilon", "1e-3", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  const auto& family = j["family"];
  EXPECT_EQ(family["members"].size(), 10u);
  EXPECT_TRUE(family["all_inside_equal"].get<bool>());
  EXPECT_TRUE(family["all_distinct"].get<bool>());
}

TEST_F(CliTest, RenderRequiresTwoDimensions) {
  ASSERT_EQ(run({"gen-data", "--kind", "gaussian", "--n", "10", "--dim", "3", "--out", path("g.csv")}).code, 0);
  const auto r = run({"extrap-report", "--train", path("g.csv"), "--test", path("g.csv"), "--render", path("g.svg")});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_NE(r.err.find("render requires 2-D"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("g.svg")));

  cli::Scene scene;
  scene.points = Matrix::Zero(2, 3);
  scene.labels = {0, 1};
  EXPECT_THROW(
      {
        try {
          cli::render_svg(scene);
        } catch (const Error& e) {
          EXPECT_STREQ(e.what(), "render requires 2-D");
          throw;
        }
      },
      Error);
}

TEST_F(CliTest, BlobRenderUsesTwoColours) {
  ASSERT_EQ(run({"gen-data", "--kind", "blobs", "--n", "12", "--out", path("b.csv"), "--render", path("b.svg")}).code,
            0);
  const auto svg = slurp(path("b.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_EQ(fill_colours(svg, "circle").size(), 2u);
  EXPECT_EQ(svg.find("class=\"contour\""), std::string::npos);
}

TEST_F(CliTest, SeparatorRenderHasContourOnZeroSet) {
  ASSERT_EQ(run({"gen-data", "--kind", "xor", "--n", "10", "--out", path("x.csv")}).code, 0);
  const auto r = run({"fit-poly", "--train", path("x.csv"), "--degree", "2", "--out", path("p.json"), "--render",
                      path("p.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(path("p.svg")).find("<path class=\"contour\""), std::string::npos);

  const auto f = poly::surface_from_json(Json::parse(slurp(path("p.json")))["surface"]);
  const Box view(-2, 2, 2);
  const auto segments = cli::zero_contour(f, view);
  ASSERT_FALSE(segments.empty());
  const double cell = view.width() / cli::kContourGrid;
  double scale = 0.0;
  for (int i = 0; i <= 8; ++i) {
    for (int k = 0; k <= 8; ++k) {
      scale = std::max(scale, std::abs(f((Vector(2) << -2 + 0.5 * i, -2 + 0.5 * k).finished())));
    }
  }
  for (const auto& s : segments) {
    for (const auto& [x, y] : {std::pair{s.x0, s.y0}, std::pair{s.x1, s.y1}}) {
      EXPECT_LE(std::abs(f((Vector(2) << x, y).finished())), scale * cell) << x << "," << y;
    }
  }
}

TEST_F(CliTest, HullOutlineOfSquare) {
  Matrix pts(5, 2);
  pts << 0, 0, 1, 0, 1, 1, 0, 1, 0.5, 0.5;
  const auto outline = cli::hull_outline(pts);
  EXPECT_EQ(outline.size(), 4u);
}

TEST_F(CliTest, SubcommandsAreByteDeterministic) {
  ASSERT_EQ(run({"gen-data", "--kind", "diagonal", "--n", "15", "--seed", "11", "--out", path("d.csv")}).code, 0);
  ASSERT_EQ(run({"fit-poly", "--train", path("d.csv"), "--degree", "1", "--out", path("f.json")}).code, 0);
  const std::vector<std::vector<std::string>> commands = {
      {"extrap-report", "--train", path("d.csv"), "--test", path("d.csv"), "--render", path("r.svg")},
      {"boundary-dist", "--poly", path("f.json"), "--query", path("d.csv"), "--directions", "50"},
      {"train", "--train", path("d.csv"), "--layers", "2,3,1", "--epochs", "200"},
  };
  for (const auto& cmd : commands) {
    const auto a = run(cmd);
    const std::string svg_a = fs::exists(path("r.svg")) ? slurp(path("r.svg")) : "";
    const auto b = run(cmd);
    const std::string svg_b = fs::exists(path("r.svg")) ? slurp(path("r.svg")) : "";
    ASSERT_EQ(a.code, 0) << cmd[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << cmd[0];
    EXPECT_EQ(svg_a, svg_b);
  }
}
