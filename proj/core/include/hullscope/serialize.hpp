#pragma once

// JSON forms of the library's reports and models. Optional values and
// non-finite numbers serialise as null.

#include <nlohmann/json.hpp>

#include "hullscope/arrays.hpp"
#include "hullscope/boundary.hpp"
#include "hullscope/hull.hpp"
#include "hullscope/overparam.hpp"
#include "hullscope/polyclass.hpp"

namespace hullscope {

using Json = nlohmann::ordered_json;

Json vector_json(const Vector& v);
Json matrix_json(const Matrix& m);  ///< array of rows
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
Json number_or_null(double v);

void to_json(Json& j, const Dataset& d);
void to_json(Json& j, const Box& b);

namespace hull {
void to_json(Json& j, const Hyperplane& h);
void to_json(Json& j, const HullProjection& p);
void to_json(Json& j, const MembershipResult& m);
/// {n_test, n_outside, fraction_outside, distances, stats:{min, median, max}, ...}
void to_json(Json& j, const ExtrapolationReport& r);
}  // namespace hull

namespace poly {
/// {dim, degree, domain:{lower, upper}, multi_indices, coefficients}
void to_json(Json& j, const PolynomialSurface& f);
PolynomialSurface surface_from_json(const Json& j);
void to_json(Json& j, const EpsilonCertificate& c);
void to_json(Json& j, const PerturbationReport& r);
void to_json(Json& j, const ExtensionFamily& f);
}  // namespace poly

namespace boundary {
void to_json(Json& j, const BoundaryProbe& p);
void to_json(Json& j, const NearestEstimate& e);
void to_json(Json& j, const LipschitzEstimate& e);
/// {clean_distances, perturbed_distances, median_clean, median_perturbed, threshold}
void to_json(Json& j, const ClosenessReport& r);
}  // namespace boundary

namespace overparam {
void to_json(Json& j, const Architecture& a);
void to_json(Json& j, const Mlp& m);
Mlp mlp_from_json(const Json& j);
void to_json(Json& j, const TrainResult& r);
/// {regime, epsilon, architecture, seeds, evidence:{mask?, final_loss, attempts}}
void to_json(Json& j, const RegimeCertificate& c);
void to_json(Json& j, const GroupStats& g);
void to_json(Json& j, const GeneralizationReport& r);
}  // namespace overparam

}  // namespace hullscope
