#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "hullscope/boundary.hpp"
#include "hullscope/error.hpp"
#include "hullscope/hull.hpp"
#include "hullscope/overparam.hpp"
#include "hullscope/parallel.hpp"
#include "hullscope/polyclass.hpp"
#include "hullscope/serialize.hpp"
#include "svg.hpp"

namespace hullscope::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Option registration with config echo

class Command {
 public:
  explicit Command(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* option(const std::string& flag, T& var, const std::string& help) {
    echo_.emplace_back(flag.substr(2), [&var] { return Json(var); });
    return app_->add_option(flag, var, help)->capture_default_str();
  }

  CLI::Option* path(const std::string& flag, std::string& var, const std::string& help) {
    echo_.emplace_back(flag.substr(2), [&var] { return var.empty() ? Json(nullptr) : Json(var); });
    return app_->add_option(flag, var, help);
  }

  CLI::Option* positive(const std::string& flag, double& var, const std::string& help) {
    return option(flag, var, help)->check(CLI::PositiveNumber);
  }

  Json config() const {
    Json j;
    j["subcommand"] = app_->get_name();
    for (const auto& [key, value] : echo_) j[key] = value();
    return j;
  }

  CLI::App* app() const { return app_; }

 private:
  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<Json()>>> echo_;
};

struct Subcommand {
  std::unique_ptr<Command> command;
  std::function<Json()> body;
  std::string* out_path = nullptr;
};

// ---------------------------------------------------------------------------
// Inputs

bool is_hsm1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  return in.gcount() == 4 && std::string(magic.data(), 4) == "HSM1";
}

LabelColumn label_column(const std::string& spec) {
  if (!spec.empty() && std::all_of(spec.begin(), spec.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return static_cast<std::size_t>(std::stoull(spec));
  }
  return spec;
}

/// CSV files carry a label column; HSM1 matrices are unlabeled (all 0).
Dataset load_input(const std::string& path, const std::string& label_col) {
  if (is_hsm1(path)) {
    Matrix m = load_matrix(path);
    std::vector<int> labels(static_cast<std::size_t>(m.rows()), 0);
    return Dataset(std::move(m), std::move(labels));
  }
  return load_csv(path, label_column(label_col));
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Accepts a bare surface or any report that carries one under "surface".
poly::PolynomialSurface load_surface(const std::string& path) {
  const Json j = read_json(path);
  return poly::surface_from_json(j.contains("surface") ? j.at("surface") : j);
}

/// Accepts a bare model or a train report that carries one under "model".
overparam::Mlp load_model(const std::string& path) {
  const Json j = read_json(path);
  return overparam::mlp_from_json(j.contains("model") ? j.at("model") : j);
}

struct ClassifierSource {
  std::string model;
  std::string poly;
};

void add_classifier_flags(Command& cmd, ClassifierSource& src) {
  auto* m = cmd.path("--model", src.model, "MLP JSON (bare or a train report)");
  auto* p = cmd.path("--poly", src.poly, "polynomial JSON (bare or a fit-poly report)");
  m->excludes(p);
}

boundary::Classifier load_classifier(const ClassifierSource& src) {
  if (!src.model.empty()) return overparam::as_classifier(load_model(src.model));
  if (!src.poly.empty()) return boundary::Classifier::polynomial_sign(load_surface(src.poly));
  throw UsageError("one of --model or --poly is required");
}

std::vector<std::size_t> parse_layers(const std::string& spec) {
  std::vector<std::size_t> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("--layers expects comma-separated positive widths, got '" + spec + "'");
    }
  }
  if (out.size() < 2) throw UsageError("--layers needs at least an input and an output width");
  return out;
}

std::pair<Matrix, Matrix> split_two_class(const Dataset& data) {
  for (const int l : data.labels()) {
    if (l != 0 && l != 1) throw Error("expected labels 0 and 1, found " + std::to_string(l));
  }
  return {data.points_with_label(0), data.points_with_label(1)};
}

void maybe_render(const std::string& path, Scene scene) {
  if (!path.empty()) write_svg(path, scene);
}

Scene data_scene(const Dataset& data) {
  Scene s;
  s.points = data.points();
  s.labels = data.labels();
  return s;
}

Scene membership_scene(const Matrix& train, const Matrix& queries, const std::vector<hull::Membership>& statuses) {
  Scene s;
  s.points = queries;
  for (const auto st : statuses) s.labels.push_back(static_cast<int>(st));
  s.hull_of = train;
  return s;
}

// ---------------------------------------------------------------------------
// Subcommands

Subcommand hull_check(CLI::App& root) {
  struct Opts {
    std::string train, query, out, render, label_col = "label";
    double dist_tol = hull::kDefaultMembershipTolerance;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(root.add_subcommand("hull-check", "convex hull membership of query points"));
  cmd->path("--train", o->train, "training points (CSV or HSM1)")->required();
  cmd->path("--query", o->query, "query points (CSV or HSM1)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->positive("--dist-tol", o->dist_tol, "distance below which a query counts as inside");
  cmd->path("--out", o->out, "report path (default: stdout)");
  cmd->path("--render", o->render, "SVG path (2-D only)");
  auto body = [o] {
    const Dataset train = load_input(o->train, o->label_col);
    const Dataset query = load_input(o->query, o->label_col);
    if (train.d() != query.d()) throw Error("train and query dimensions differ");
    std::vector<hull::MembershipResult> results(query.n());
    parallel_for(query.n(),
                 [&](std::size_t i) { results[i] = hull::membership(query.point(i), train.points(), o->dist_tol); });
    Json j;
    j["n_train"] = train.n();
    j["n_query"] = query.n();
    Json rows = Json::array();
    std::vector<hull::Membership> statuses;
    for (std::size_t i = 0; i < results.size(); ++i) {
      Json r{{"index", i}};
      r.update(Json(results[i]));
      rows.push_back(r);
      statuses.push_back(results[i].status);
    }
    j["results"] = rows;
    maybe_render(o->render, membership_scene(train.points(), query.points(), statuses));
    return j;
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand project(CLI::App& root) {
  struct Opts {
    std::string train, query, out, label_col = "label";
    double tol = hull::kDefaultTolerance;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(root.add_subcommand("project", "Euclidean projection onto the training hull"));
  cmd->path("--train", o->train, "training points (CSV or HSM1)")->required();
  cmd->path("--query", o->query, "query points (CSV or HSM1)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->positive("--tol", o->tol, "Frank-Wolfe dual-gap tolerance");
  cmd->path("--out", o->out, "report path (default: stdout)");
  auto body = [o] {
    const Dataset train = load_input(o->train, o->label_col);
    const Dataset query = load_input(o->query, o->label_col);
    if (train.d() != query.d()) throw Error("train and query dimensions differ");
    hull::ProjectionOptions opts;
    opts.tol = o->tol;
    Json rows = Json::array();
    for (std::size_t i = 0; i < query.n(); ++i) {
      Json r{{"index", i}};
      r.update(Json(hull::project_onto_hull(query.point(i), train.points(), opts)));
      rows.push_back(r);
    }
    return Json{{"results", rows}};
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand extrap_report(CLI::App& root) {
  struct Opts {
    std::string train, test, out, render, label_col = "label";
    double dist_tol = hull::kDefaultMembershipTolerance;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("extrap-report", "fraction of test points outside the training hull"));
  cmd->path("--train", o->train, "training points (CSV or HSM1)")->required();
  cmd->path("--test", o->test, "test points (CSV or HSM1)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->positive("--dist-tol", o->dist_tol, "distance below which a point counts as inside");
  cmd->path("--out", o->out, "report path (default: stdout)");
  cmd->path("--render", o->render, "SVG path (2-D only)");
  auto body = [o] {
    const Dataset train = load_input(o->train, o->label_col);
    const Dataset test = load_input(o->test, o->label_col);
    const auto report = hull::extrapolation_report(train, test, o->dist_tol);
    maybe_render(o->render, membership_scene(train.points(), test.points(), report.statuses));
    return Json(report);
  };
  return {std::move(cmd), body, &o->out};
}

Json separator_json(const poly::PolynomialSurface& f, const Matrix& x, const Matrix& y) {
  const std::size_t wrong = poly::count_misclassified(f, x, y);
  Json j{{"surface", f}, {"misclassified", wrong}, {"separates", wrong == 0}};
  j["functional_margin"] = wrong == 0 ? Json(poly::functional_margin(f, x, y)) : Json(nullptr);
  return j;
}

Subcommand fit_poly(CLI::App& root) {
  struct Opts {
    std::string train, out, render, label_col = "label";
    int degree = 2;
    double ridge = poly::kDefaultRidge;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("fit-poly", "least-squares polynomial separator (+1 on label 0, -1 on label 1)"));
  cmd->path("--train", o->train, "two-class training data (CSV)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->option("--degree", o->degree, "polynomial degree")->check(CLI::Range(0, 64));
  cmd->option("--ridge", o->ridge, "ridge penalty (0 = none)")->check(CLI::NonNegativeNumber);
  cmd->path("--out", o->out, "report path (default: stdout)");
  cmd->path("--render", o->render, "SVG path (2-D only)");
  auto body = [o] {
    const Dataset data = load_input(o->train, o->label_col);
    const auto [x, y] = split_two_class(data);
    const auto fit = poly::fit_separator(x, y, o->degree, o->ridge);
    Scene scene = data_scene(data);
    scene.contours.push_back(fit.surface);
    maybe_render(o->render, scene);
    return separator_json(fit.surface, x, y);
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand min_degree(CLI::App& root) {
  struct Opts {
    std::string train, out, render, label_col = "label";
    int max_degree = 10;
    double ridge = poly::kDefaultRidge;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("min-degree", "smallest polynomial degree whose least-squares fit separates the classes"));
  cmd->path("--train", o->train, "two-class training data (CSV)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->option("--max-degree", o->max_degree, "largest degree tried")->check(CLI::Range(1, 64));
  cmd->option("--ridge", o->ridge, "ridge penalty (0 = none)")->check(CLI::NonNegativeNumber);
  cmd->path("--out", o->out, "report path (default: stdout)");
  cmd->path("--render", o->render, "SVG path (2-D only)");
  auto body = [o] {
    const Dataset data = load_input(o->train, o->label_col);
    const auto [x, y] = split_two_class(data);
    const auto found = poly::minimal_degree_separator(x, y, o->max_degree, o->ridge);
    Scene scene = data_scene(data);
    Json j;
    j["found"] = found.has_value();
    if (found) {
      j["degree"] = found->degree;
      j.update(separator_json(found->surface, x, y));
      scene.contours.push_back(found->surface);
    } else {
      j["degree"] = nullptr;
    }
    maybe_render(o->render, scene);
    return j;
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand lemma1_gap(CLI::App& root) {
  struct Opts {
    std::string out;
    int max_degree = 10;
    double delta = 1.0;
    double anchor = 1.0;
    std::size_t samples = 20;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(root.add_subcommand(
      "lemma1-gap", "smallest RMS deviation inside the hull forced by a deviation delta at an outside anchor"));
  cmd->option("--max-degree", o->max_degree, "largest degree of h")->check(CLI::Range(1, 30));
  cmd->positive("--delta", o->delta, "required deviation at the anchor");
  cmd->option("--anchor", o->anchor, "anchor position, outside [-0.5, 0.5]");
  cmd->option("--samples", o->samples, "grid points on [-0.5, 0.5]")->check(CLI::Range(2, 100000));
  cmd->path("--out", o->out, "report path (default: stdout)");
  auto body = [o] {
    if (std::abs(o->anchor) <= 0.5) throw UsageError("--anchor must lie outside [-0.5, 0.5]");
    const double half = std::max(1.0, std::abs(o->anchor));
    const Box box(-half, half, 1);
    const auto f = poly::PolynomialSurface::from_terms(box, 1, {{{1}, 1.0}});
    Matrix inside(static_cast<Eigen::Index>(o->samples), 1);
    for (Eigen::Index i = 0; i < inside.rows(); ++i) {
      inside(i, 0) = -0.5 + static_cast<double>(i) / static_cast<double>(inside.rows() - 1);
    }
    Vector anchor(1);
    anchor << o->anchor;
    Json gaps = Json::array();
    for (int k = 1; k <= o->max_degree; ++k) {
      gaps.push_back(Json{{"degree", k}, {"gap", poly::extension_gap(f, k, inside, anchor, o->delta)}});
    }
    return Json{{"f", f}, {"inside_samples", vector_json(inside.col(0))}, {"gaps", gaps}};
  };
  return {std::move(cmd), body, &o->out};
}

/// The bundled two-blob data set used by lemma3-demo when --train is absent.
Dataset bundled_blobs() {
  Vector a(2), b(2);
  a << -1.0, 0.0;
  b << 1.0, 0.0;
  return gaussian_blobs(50, 2, {a, b}, 0.3, 7);
}

Subcommand lemma3_demo(CLI::App& root) {
  struct Opts {
    std::string train, out, render, label_col = "label";
    int degree = 2;
    int degree_up = 6;
    std::size_t k = 10;
    double epsilon = 1e-3;
    std::uint64_t seed = 0;
    double half_width = 4.0;
    double target = 1.0;
    std::size_t samples = poly::kDefaultCertificateSamples;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(root.add_subcommand(
      "lemma3-demo", "k distinct higher-degree separators that agree with f inside the hull"));
  cmd->path("--train", o->train, "two-class 2-D data (default: bundled blobs)");
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->option("--degree", o->degree, "degree of the base separator f")->check(CLI::Range(1, 32));
  cmd->option("--degree-up", o->degree_up, "degree of the extensions")->check(CLI::Range(1, 32));
  cmd->option("--k", o->k, "number of extensions")->check(CLI::Range(2, 1000));
  cmd->positive("--epsilon", o->epsilon, "agreement tolerance inside the hull");
  cmd->option("--seed", o->seed, "random seed");
  cmd->positive("--half-width", o->half_width, "domain is [-w, w]^d; anchors sit at its corners");
  cmd->positive("--target", o->target, "required |f+ - f| at the anchors");
  cmd->option("--samples", o->samples, "hull samples per certificate")->check(CLI::Range(1, 10000000));
  cmd->path("--out", o->out, "report path (default: stdout)");
  cmd->path("--render", o->render, "SVG path (2-D only)");
  auto body = [o] {
    const Dataset data = o->train.empty() ? bundled_blobs() : load_input(o->train, o->label_col);
    if (data.d() > 10) throw Error("lemma3-demo places anchors at the 2^d domain corners; d must be <= 10");
    const auto [x, y] = split_two_class(data);
    const Box box(-o->half_width, o->half_width, data.d());
    for (std::size_t i = 0; i < data.n(); ++i) {
      if (!box.contains(data.point(i))) throw Error("data point " + std::to_string(i) + " lies outside the domain box");
    }
    const auto fit = poly::fit_separator(x, y, o->degree, poly::kDefaultRidge, box);

    poly::AnchorSet anchors;
    const std::size_t corners = std::size_t{1} << data.d();
    anchors.points.resize(static_cast<Eigen::Index>(corners), static_cast<Eigen::Index>(data.d()));
    anchors.targets.resize(static_cast<Eigen::Index>(corners));
    for (std::size_t c = 0; c < corners; ++c) {
      int parity = 0;
      for (std::size_t dim = 0; dim < data.d(); ++dim) {
        const bool high = (c >> dim) & 1U;
        anchors.points(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(dim)) = high ? box.upper : box.lower;
        parity ^= static_cast<int>(high);
      }
      anchors.targets(static_cast<Eigen::Index>(c)) = parity ? -o->target : o->target;
    }

    poly::ExtensionOptions opts;
    opts.certificate_samples = o->samples;
    const auto family =
        poly::extension_family(fit.surface, o->degree_up, o->k, data.points(), anchors, o->epsilon, o->seed, opts);

    Scene scene = data_scene(data);
    scene.hull_of = data.points();
    scene.view = box;
    scene.contours.push_back(fit.surface);
    for (const auto& m : family.members) scene.contours.push_back(m);
    maybe_render(o->render, scene);

    Json j;
    j["data"] = Json{{"source", o->train.empty() ? Json("bundled-blobs") : Json(o->train)}, {"n", data.n()}};
    j["base"] = separator_json(fit.surface, x, y);
    j["anchors"] = Json{{"points", matrix_json(anchors.points)}, {"targets", vector_json(anchors.targets)}};
    j["family"] = family;
    return j;
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand eps_equal(CLI::App& root) {
  struct Opts {
    std::string f, g, train, out, label_col = "label";
    double epsilon = 1e-3;
    std::size_t samples = poly::kDefaultCertificateSamples;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("eps-equal", "sample-based epsilon-equality certificate for two polynomials"));
  cmd->path("--f", o->f, "first polynomial JSON")->required();
  cmd->path("--g", o->g, "second polynomial JSON")->required();
  cmd->path("--train", o->train, "points whose hull is the region (default: the domain box of f)");
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->positive("--epsilon", o->epsilon, "tolerance");
  cmd->option("--samples", o->samples, "number of region samples")->check(CLI::Range(1, 100000000));
  cmd->option("--seed", o->seed, "random seed");
  cmd->path("--out", o->out, "report path (default: stdout)");
  auto body = [o] {
    const auto f = load_surface(o->f);
    const auto g = load_surface(o->g);
    const poly::Region region = o->train.empty() ? poly::Region{f.domain()}
                                                 : poly::Region{poly::HullRegion{load_input(o->train, o->label_col).points()}};
    return Json{{"certificate", poly::epsilon_equal(f, g, region, o->epsilon, o->samples, o->seed)}};
  };
  return {std::move(cmd), body, &o->out};
}

struct ProbeOpts {
  std::size_t directions = 1000;
  double max_radius = 10.0;
  double tol = 1e-6;
  std::size_t refine = 0;
  std::uint64_t seed = 0;
};

void add_probe_flags(Command& cmd, ProbeOpts& p) {
  cmd.option("--directions", p.directions, "random probe directions per point")->check(CLI::Range(0, 100000000));
  cmd.positive("--max-radius", p.max_radius, "probe radius cap");
  cmd.positive("--tol", p.tol, "bisection bracket width");
  cmd.option("--refine", p.refine, "local search steps after sampling")->check(CLI::Range(0, 100000000));
  cmd.option("--seed", p.seed, "random seed");
}

boundary::NearestOptions nearest_options(const ProbeOpts& p) {
  boundary::NearestOptions n;
  n.n_directions = p.directions;
  n.max_radius = p.max_radius;
  n.tol = p.tol;
  n.refine_steps = p.refine;
  n.seed = p.seed;
  return n;
}

Subcommand boundary_dist(CLI::App& root) {
  struct Opts {
    ClassifierSource src;
    ProbeOpts probe;
    std::string query, out, label_col = "label";
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("boundary-dist", "upper-bound estimate of the distance to the decision boundary"));
  add_classifier_flags(*cmd, o->src);
  cmd->path("--query", o->query, "query points (CSV or HSM1)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  add_probe_flags(*cmd, o->probe);
  cmd->path("--out", o->out, "report path (default: stdout)");
  auto body = [o] {
    const auto clf = load_classifier(o->src);
    const Dataset query = load_input(o->query, o->label_col);
    if (query.d() != clf.dim()) throw Error("query dimension does not match the classifier");
    const auto opts = nearest_options(o->probe);
    Json rows = Json::array();
    for (std::size_t i = 0; i < query.n(); ++i) {
      Json r{{"index", i}};
      r.update(Json(boundary::nearest_boundary_estimate(clf, query.point(i), opts)));
      rows.push_back(r);
    }
    return Json{{"classifier", clf.description()}, {"results", rows}};
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand closeness(CLI::App& root) {
  struct Opts {
    ClassifierSource src;
    ProbeOpts probe;
    std::string clean, perturbed, out, label_col = "label";
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("closeness", "boundary distances of clean versus perturbed inputs"));
  add_classifier_flags(*cmd, o->src);
  cmd->path("--clean", o->clean, "clean inputs (CSV or HSM1)")->required();
  cmd->path("--perturbed", o->perturbed, "perturbed inputs (CSV or HSM1)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  add_probe_flags(*cmd, o->probe);
  cmd->path("--out", o->out, "report path (default: stdout)");
  auto body = [o] {
    const auto clf = load_classifier(o->src);
    const Dataset clean = load_input(o->clean, o->label_col);
    const Dataset perturbed = load_input(o->perturbed, o->label_col);
    return Json(boundary::closeness_report(clf, clean.points(), perturbed.points(), nearest_options(o->probe)));
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand lipschitz(CLI::App& root) {
  struct Opts {
    ClassifierSource src;
    std::string train, out, label_col = "label";
    std::size_t pairs = 1000;
    double perturbation = 1e-3;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("lipschitz", "sampled lower bound on the Lipschitz constant of a model's outputs"));
  add_classifier_flags(*cmd, o->src);
  cmd->path("--train", o->train, "points whose padded bounding box is sampled (default: polynomial domain)");
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->option("--pairs", o->pairs, "number of sampled pairs")->check(CLI::Range(1, 100000000));
  cmd->positive("--perturbation", o->perturbation, "relative step of perturbation pairs");
  cmd->option("--seed", o->seed, "random seed");
  cmd->path("--out", o->out, "report path (default: stdout)");
  auto body = [o] {
    boundary::VectorMap map;
    std::optional<Box> box;
    if (!o->src.model.empty()) {
      auto model = std::make_shared<overparam::Mlp>(load_model(o->src.model));
      map = [model](const Vector& x) -> Vector { return model->forward(x.transpose()).row(0).transpose(); };
    } else if (!o->src.poly.empty()) {
      auto f = std::make_shared<poly::PolynomialSurface>(load_surface(o->src.poly));
      map = [f](const Vector& x) { return Vector::Constant(1, (*f)(x)); };
      box = f->domain();
    } else {
      throw UsageError("one of --model or --poly is required");
    }
    if (!o->train.empty()) box = Box::bounding(load_input(o->train, o->label_col).points());
    if (!box) throw UsageError("--train is required to define the sampling box for --model");
    boundary::LipschitzOptions opts;
    opts.n_pairs = o->pairs;
    opts.seed = o->seed;
    opts.perturbation = o->perturbation;
    return Json{{"box", *box}, {"lipschitz", boundary::lipschitz_estimate(map, *box, opts)}};
  };
  return {std::move(cmd), body, &o->out};
}

struct TrainOpts {
  std::string layers;
  std::string activation = "tanh";
  double epsilon = overparam::kDefaultEpsilon;
  std::size_t epochs = 4000;
  std::size_t restarts = 3;
  double lr = 0.2;
  double momentum = 0.9;
  std::uint64_t seed = 0;
};

void add_train_flags(Command& cmd, TrainOpts& t) {
  cmd.option("--layers", t.layers, "comma-separated widths, input first (e.g. 2,10,1)")->required();
  cmd.option("--activation", t.activation, "hidden activation")->check(CLI::IsMember({"tanh", "relu"}));
  cmd.positive("--epsilon", t.epsilon, "target mean cross-entropy");
  cmd.option("--epochs", t.epochs, "epochs per restart")->check(CLI::Range(1, 100000000));
  cmd.option("--restarts", t.restarts, "random restarts")->check(CLI::Range(1, 100000));
  cmd.positive("--lr", t.lr, "learning rate");
  cmd.option("--momentum", t.momentum, "momentum in [0, 1)")->check(CLI::Range(0.0, 0.999999));
  cmd.option("--seed", t.seed, "random seed");
}

overparam::Architecture architecture(const TrainOpts& t, const Dataset& data) {
  overparam::Architecture arch{parse_layers(t.layers),
                               t.activation == "relu" ? overparam::Activation::Relu : overparam::Activation::Tanh};
  if (arch.input_dim() != data.d()) {
    throw UsageError("--layers input width " + std::to_string(arch.input_dim()) + " does not match data dimension " +
                     std::to_string(data.d()));
  }
  return arch;
}

overparam::TrainConfig train_config(const TrainOpts& t) {
  overparam::TrainConfig c;
  c.epsilon = t.epsilon;
  c.max_epochs = t.epochs;
  c.n_restarts = t.restarts;
  c.learning_rate = t.lr;
  c.momentum = t.momentum;
  c.seed = t.seed;
  return c;
}

Subcommand train_cmd(CLI::App& root) {
  struct Opts {
    TrainOpts train;
    std::string data, out, label_col = "label";
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(root.add_subcommand("train", "train an MLP classifier by full-batch descent"));
  cmd->path("--train", o->data, "training data (CSV)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  add_train_flags(*cmd, o->train);
  cmd->path("--out", o->out, "report path (default: stdout)");
  auto body = [o] {
    const Dataset data = load_input(o->data, o->label_col);
    const auto arch = architecture(o->train, data);
    const auto result = overparam::train(overparam::Mlp(arch), data, train_config(o->train));
    return Json{{"result", result}, {"model", result.model}};
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand regime(CLI::App& root) {
  struct Opts {
    TrainOpts train;
    std::string data, out, label_col = "label";
    std::size_t budget = 8;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("regime", "classify an architecture as over-, perfectly or under-parameterized"));
  cmd->path("--train", o->data, "training data (CSV)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  add_train_flags(*cmd, o->train);
  cmd->option("--budget", o->budget, "elimination attempts")->check(CLI::Range(1, 100000));
  cmd->path("--out", o->out, "report path (default: stdout)");
  auto body = [o] {
    const Dataset data = load_input(o->data, o->label_col);
    overparam::RegimeConfig config;
    config.train = train_config(o->train);
    config.elimination_budget = o->budget;
    return Json(overparam::classify_regime(architecture(o->train, data), data, config));
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand decompose(CLI::App& root) {
  struct Opts {
    ClassifierSource src;
    std::string train, test, out, render, label_col = "label";
    double dist_tol = hull::kDefaultMembershipTolerance;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(
      root.add_subcommand("decompose", "test accuracy split into interpolation and extrapolation"));
  add_classifier_flags(*cmd, o->src);
  cmd->path("--train", o->train, "training data (CSV or HSM1)")->required();
  cmd->path("--test", o->test, "labelled test data (CSV)")->required();
  cmd->option("--label-col", o->label_col, "CSV label column name or index");
  cmd->positive("--dist-tol", o->dist_tol, "distance below which a point counts as inside");
  cmd->path("--out", o->out, "report path (default: stdout)");
  cmd->path("--render", o->render, "SVG path (2-D only)");
  auto body = [o] {
    const auto clf = load_classifier(o->src);
    const Dataset train = load_input(o->train, o->label_col);
    const Dataset test = load_input(o->test, o->label_col);
    const auto report = overparam::decompose_generalization(clf, train, test, o->dist_tol);
    if (!o->render.empty()) {
      Scene scene = data_scene(test);
      scene.hull_of = train.points();
      if (!o->src.poly.empty()) scene.contours.push_back(load_surface(o->src.poly));
      write_svg(o->render, scene);
    }
    return Json(report);
  };
  return {std::move(cmd), body, &o->out};
}

Subcommand gen_data(CLI::App& root) {
  struct Opts {
    std::string kind = "blobs";
    std::string out, render, format = "csv";
    std::size_t n = 100;
    std::size_t dim = 2;
    double std_dev = 0.3;
    double separation = 2.0;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_unique<Command>(root.add_subcommand("gen-data", "write a synthetic data set"));
  cmd->option("--kind", o->kind, "blobs | diagonal | xor | gaussian | uniform")
      ->check(CLI::IsMember({"blobs", "diagonal", "xor", "gaussian", "uniform"}));
  cmd->option("--n", o->n, "points per class (blobs), per blob (diagonal), per quadrant (xor) or in total")
      ->check(CLI::Range(1, 100000000));
  cmd->option("--dim", o->dim, "dimension (blobs, gaussian, uniform)")->check(CLI::Range(1, 100000));
  cmd->positive("--std", o->std_dev, "blob standard deviation");
  cmd->positive("--separation", o->separation, "distance between the two blob centres");
  cmd->option("--seed", o->seed, "random seed");
  cmd->option("--format", o->format, "csv, or hsm1 for an unlabeled matrix")->check(CLI::IsMember({"csv", "hsm1"}));
  cmd->path("--out", o->out, "data path")->required();
  cmd->path("--render", o->render, "SVG path (2-D only)");
  auto body = [o] {
    Dataset data = [&] {
      if (o->kind == "diagonal") return diagonal_blobs(o->n, o->std_dev, o->seed);
      if (o->kind == "xor") return xor_dataset(o->n, o->std_dev, o->seed);
      if (o->kind == "gaussian") return standard_normal(o->n, o->dim, o->seed);
      if (o->kind == "uniform") return uniform_box(o->n, Box(-1.0, 1.0, o->dim), o->seed);
      Vector a = Vector::Zero(static_cast<Eigen::Index>(o->dim));
      Vector b = a;
      a(0) = -0.5 * o->separation;
      b(0) = 0.5 * o->separation;
      return gaussian_blobs(o->n, o->dim, {a, b}, o->std_dev, o->seed);
    }();
    if (o->format == "hsm1") {
      save_matrix(o->out, data.points());
    } else {
      save_csv(o->out, data);
    }
    maybe_render(o->render, data_scene(data));
    return Json{{"n", data.n()}, {"d", data.d()}, {"n_classes", data.n_classes()}};
  };
  // gen-data writes the data set to --out; its JSON summary goes to stdout.
  return {std::move(cmd), body, nullptr};
}

void emit(const Json& report, const std::string* out_path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (out_path != nullptr && !out_path->empty()) {
    std::ofstream file(*out_path, std::ios::binary);
    if (!file) throw Error("cannot write '" + *out_path + "'");
    file << text;
  } else {
    out << text;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App root{"Convex-hull, polynomial-separator and parameterization diagnostics", "hullscope"};
  root.require_subcommand(1);
  root.fallthrough(false);

  std::vector<Subcommand> subs;
  for (auto* make : {hull_check, project, extrap_report, fit_poly, min_degree, lemma1_gap, lemma3_demo, eps_equal,
                     boundary_dist, closeness, lipschitz, train_cmd, regime, decompose, gen_data}) {
    subs.push_back(make(root));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    root.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto chosen = root.get_subcommands();
    out << (chosen.empty() ? root.help() : chosen.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << root.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto chosen = root.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (chosen.empty() ? root.help() : chosen.front()->help());
    return kExitUsage;
  }

  const auto* chosen = root.get_subcommands().front();
  auto it = std::find_if(subs.begin(), subs.end(), [&](const Subcommand& s) { return s.command->app() == chosen; });
  try {
    Json report;
    report["config"] = it->command->config();
    report.update(it->body());
    emit(report, it->out_path, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace hullscope::cli
