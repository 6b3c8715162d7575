#include "hullscope/serialize.hpp"

#include <cmath>

namespace hullscope {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); }

Json params_json(const overparam::Params& p) {
  Json weights = Json::array();
  Json biases = Json::array();
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    weights.push_back(matrix_json(p.weights[l]));
    biases.push_back(vector_json(p.biases[l]));
  }
  return Json{{"weights", weights}, {"biases", biases}};
}

overparam::Params params_from_json(const Json& j, const overparam::Architecture& arch) {
  overparam::Params p = overparam::Params::zeros(arch);
  const auto& w = j.at("weights");
  const auto& b = j.at("biases");
  if (w.size() != p.weights.size() || b.size() != p.biases.size()) throw ParseError("model layer count mismatch");
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const Matrix m = matrix_from_json(w[l]);
    const Vector v = vector_from_json(b[l]);
    if (m.rows() != p.weights[l].rows() || m.cols() != p.weights[l].cols() || v.size() != p.biases[l].size()) {
      throw ParseError("model tensor shape mismatch in layer " + std::to_string(l));
    }
    p.weights[l] = m;
    p.biases[l] = v;
  }
  return p;
}

}  // namespace

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_or_null(v(i)));
  return out;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("expected a number at index " + std::to_string(i));
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a JSON array of rows");
  if (j.empty()) return Matrix(0, 0);
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vector_from_json(j[r]);
    if (static_cast<std::size_t>(row.size()) != cols) throw ParseError("ragged matrix row " + std::to_string(r));
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

void to_json(Json& j, const Dataset& d) {
  j = Json{{"n", d.n()}, {"d", d.d()}, {"points", matrix_json(d.points())}, {"labels", d.labels()}};
}

void to_json(Json& j, const Box& b) { j = Json{{"lower", b.lower}, {"upper", b.upper}, {"dim", b.dim}}; }

namespace hull {

void to_json(Json& j, const Hyperplane& h) { j = Json{{"normal", vector_json(h.normal)}, {"offset", h.offset}}; }

void to_json(Json& j, const HullProjection& p) {
  j = Json{{"status", p.converged() ? "converged" : "unconverged"},
           {"distance", p.distance},
           {"dual_gap", p.dual_gap},
           {"iterations", p.iterations},
           {"projection", vector_json(p.projection)},
           {"coefficients", vector_json(p.coefficients)},
           {"certificate", p.certificate ? Json(*p.certificate) : Json(nullptr)}};
}

void to_json(Json& j, const MembershipResult& m) {
  j = Json{{"status", to_string(m.status)},
           {"distance", m.distance},
           {"dual_gap", m.dual_gap},
           {"certificate", m.certificate ? Json(*m.certificate) : Json(nullptr)}};
}

void to_json(Json& j, const ExtrapolationReport& r) {
  Json statuses = Json::array();
  for (const auto s : r.statuses) statuses.push_back(to_string(s));
  j = Json{{"n_test", r.n_test},
           {"n_outside", r.n_outside},
           {"n_unresolved", r.n_unresolved},
           {"fraction_outside", r.fraction_outside},
           {"distances", r.distances},
           {"statuses", statuses},
           {"stats", Json{{"min", r.stats.min}, {"median", r.stats.median}, {"max", r.stats.max}}}};
}

}  // namespace hull

namespace poly {

void to_json(Json& j, const PolynomialSurface& f) {
  j = Json{{"dim", f.dim()},
           {"degree", f.degree()},
           {"domain", Json{{"lower", f.domain().lower}, {"upper", f.domain().upper}}},
           {"multi_indices", f.basis()},
           {"coefficients", vector_json(f.coefficients())}};
}

PolynomialSurface surface_from_json(const Json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const int degree = j.at("degree").get<int>();
    const Box box(j.at("domain").at("lower").get<double>(), j.at("domain").at("upper").get<double>(), dim);
    const Vector coeffs = vector_from_json(j.at("coefficients"));
    if (j.contains("multi_indices")) {
      const auto indices = j.at("multi_indices").get<std::vector<MultiIndex>>();
      if (indices != graded_lex_basis(dim, degree)) {
        throw ParseError("multi_indices are not the graded-lex basis for dim " + std::to_string(dim) + ", degree " +
                         std::to_string(degree));
      }
    }
    return PolynomialSurface(box, degree, coeffs);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid polynomial JSON: ") + e.what());
  }
}

void to_json(Json& j, const EpsilonCertificate& c) {
  j = Json{{"epsilon", c.epsilon},
           {"region", c.region_kind},
           {"n_samples", c.n_samples},
           {"seed", c.seed},
           {"max_observed_deviation", c.max_observed_deviation},
           {"verdict", c.equal() ? "epsilon_equal" : "not_epsilon_equal"},
           {"witness", c.witness ? vector_json(*c.witness) : Json(nullptr)},
           {"witness_deviation", c.witness ? Json(c.witness_deviation) : Json(nullptr)}};
}

void to_json(Json& j, const PerturbationReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(Json{{"index", e.index},
                           {"certified_equal", e.certified_equal},
                           {"max_deviation", e.max_deviation},
                           {"separates", e.separates},
                           {"violation", e.violation}});
  }
  j = Json{{"margin", r.margin},
           {"epsilon", r.epsilon},
           {"n_certified", r.n_certified},
           {"n_violations", r.n_violations},
           {"entries", entries}};
}

void to_json(Json& j, const ExtensionFamily& f) {
  Json members = Json::array();
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    members.push_back(Json{{"surface", f.members[i]},
                           {"inside_certificate", f.inside[i]},
                           {"anchor_error", f.anchor_errors[i]}});
  }
  Json pairs = Json::array();
  for (const auto& p : f.pairs) {
    pairs.push_back(Json{{"first", p.first},
                         {"second", p.second},
                         {"witness", vector_json(p.point)},
                         {"deviation", p.deviation},
                         {"distinct", p.distinct}});
  }
  j = Json{{"k", f.members.size()},
           {"base_inside_deviation", f.base_inside_deviation},
           {"all_inside_equal", f.all_inside_equal},
           {"all_distinct", f.all_distinct},
           {"members", members},
           {"pairs", pairs}};
}

}  // namespace poly

namespace boundary {

void to_json(Json& j, const BoundaryProbe& p) {
  j = Json{{"origin", vector_json(p.origin)},
           {"direction", vector_json(p.direction)},
           {"found", p.found()},
           {"distance", optional_number(p.distance)},
           {"max_radius", p.max_radius},
           {"bracket_width", p.bracket_width},
           {"origin_label", p.origin_label},
           {"far_label", p.far_label}};
}

void to_json(Json& j, const NearestEstimate& e) {
  j = Json{{"found", e.distance.has_value()},
           {"distance", optional_number(e.distance)},
           {"direction", e.distance ? vector_json(e.direction) : Json(nullptr)},
           {"probes", e.probes}};
}

void to_json(Json& j, const LipschitzEstimate& e) {
  j = Json{{"estimate", e.estimate}, {"pairs_used", e.pairs_used}, {"pairs_skipped", e.pairs_skipped}};
}

void to_json(Json& j, const ClosenessReport& r) {
  Json clean = Json::array();
  Json perturbed = Json::array();
  for (const auto& d : r.clean_distances) clean.push_back(optional_number(d));
  for (const auto& d : r.perturbed_distances) perturbed.push_back(optional_number(d));
  j = Json{{"clean_distances", clean},
           {"perturbed_distances", perturbed},
           {"median_clean", optional_number(r.median_clean)},
           {"median_perturbed", optional_number(r.median_perturbed)},
           {"threshold", optional_number(r.threshold)}};
}

}  // namespace boundary

namespace overparam {

void to_json(Json& j, const Architecture& a) {
  j = Json{{"layer_sizes", a.layer_sizes}, {"activation", a.activation == Activation::Tanh ? "tanh" : "relu"}};
}

void to_json(Json& j, const Mlp& m) {
  j = Json{{"architecture", m.architecture()}, {"params", params_json(m.params())}, {"mask", params_json(m.mask())}};
}

Mlp mlp_from_json(const Json& j) {
  try {
    Architecture arch;
    arch.layer_sizes = j.at("architecture").at("layer_sizes").get<std::vector<std::size_t>>();
    const auto act = j.at("architecture").at("activation").get<std::string>();
    if (act != "tanh" && act != "relu") throw ParseError("unknown activation '" + act + "'");
    arch.activation = act == "tanh" ? Activation::Tanh : Activation::Relu;
    Mlp model(arch);
    if (j.contains("mask")) model.set_mask(params_from_json(j.at("mask"), arch));
    model.set_params(params_from_json(j.at("params"), arch));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
}

void to_json(Json& j, const TrainResult& r) {
  Json restarts = Json::array();
  for (const auto& rec : r.restarts) {
    restarts.push_back(Json{{"seed", rec.seed},
                            {"final_loss", number_or_null(rec.final_loss)},
                            {"epochs", rec.epochs},
                            {"diverged", rec.diverged},
                            {"reached", rec.reached}});
  }
  j = Json{{"final_loss", number_or_null(r.final_loss)},
           {"reached_epsilon", r.reached_epsilon},
           {"epochs_used", r.epochs_used},
           {"restarts_used", r.restarts_used},
           {"restarts", restarts}};
}

void to_json(Json& j, const RegimeCertificate& c) {
  Json attempts = Json::array();
  for (const auto& a : c.attempts) {
    attempts.push_back(Json{{"description", a.description},
                            {"eliminated", a.eliminated},
                            {"final_loss", number_or_null(a.final_loss)},
                            {"reached", a.reached},
                            {"seeds", a.seeds}});
  }
  Json evidence{{"final_loss", number_or_null(c.full.final_loss)}, {"attempts", attempts}};
  if (c.winning_attempt) {
    evidence["mask"] = params_json(c.attempts[*c.winning_attempt].mask);
    evidence["eliminated"] = c.attempts[*c.winning_attempt].description;
    evidence["final_loss"] = number_or_null(c.attempts[*c.winning_attempt].final_loss);
  } else if (c.regime == Regime::Under) {
    evidence["best_loss"] = number_or_null(c.full.final_loss);
    evidence["restarts"] = c.full.restarts_used;
  }
  j = Json{{"regime", to_string(c.regime)},
           {"epsilon", c.epsilon},
           {"architecture", c.architecture.layer_sizes},
           {"activation", c.architecture.activation == Activation::Tanh ? "tanh" : "relu"},
           {"seed", c.seed},
           {"seeds", c.seeds},
           {"note", c.note},
           {"evidence", evidence}};
}

void to_json(Json& j, const GroupStats& g) {
  j = Json{{"count", g.count},
           {"correct", g.correct},
           {"accuracy", optional_number(g.accuracy)},
           {"mean_distance", g.count > 0 ? Json(g.mean_distance) : Json(nullptr)}};
}

void to_json(Json& j, const GeneralizationReport& r) {
  j = Json{{"n_test", r.n_test},
           {"overall_accuracy", r.overall_accuracy},
           {"interpolation", r.interpolation},
           {"extrapolation", r.extrapolation},
           {"unresolved", r.unresolved}};
}

}  // namespace overparam

}  // namespace hullscope
