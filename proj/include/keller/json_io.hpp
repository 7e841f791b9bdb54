#pragma once

#include "keller/bipoly.hpp"
#include "keller/majorant.hpp"
#include "keller/perturb.hpp"
#include "keller/witness.hpp"
#include "keller/yseries.hpp"

#include <json.hpp>

#include <string>

namespace keller {

using Json = nlohmann::ordered_json;

/// Parses expressions such as "x^2 + (1/2 - i)*x*y - 3*(x+y)^2".
BiPoly parse_poly(std::string_view text);

Json to_json(const Scalar& s);
Json to_json(Complex z);
Json to_json(const BiPoly& P);
Json to_json(const PolyMap& M);
Json to_json(const CPoint& p);
Json to_json(const WitnessPair& w);
Json to_json(const YSeries& P);
Json to_json(const StepResult& r);
Json to_json(const Trajectory& T);
Json to_json(const WitnessAtlas& A);

/// Exact scalar from a string or an integer.
Scalar scalar_from_json(const Json& j);
/// Float scalar from {"re":..,"im":..}, [re, im], a number or an exact string.
Complex complex_from_json(const Json& j);
/// {"terms":[{"c":..,"i":..,"j":..}]} or an expression string.
BiPoly poly_from_json(const Json& j);
/// {"F": poly, "G": poly}.
PolyMap map_from_json(const Json& j);
Point point_from_json(const Json& j);
CPoint cpoint_from_json(const Json& j);
/// {"p0": point, "p1": point}; residual and separation are recomputed.
WitnessPair pair_from_json(const PolyMap& M, const Json& j);
/// {"alpha":int, "trunc":int or null, "coeffs":[{"num":poly,"den":poly}]}, polys in x.
YSeries series_from_json(const Json& j);
/// Same format with rational constant coefficients.
Majorant majorant_from_json(const Json& j);
Kappas kappas_from_json(const Json& j);
StepConstraint constraint_from_json(const Json& j);
MetricSpec metric_from_json(const Json& j);

/// Trajectory and atlas tables for plotting.
std::string trajectory_csv(const Trajectory& T);
std::string atlas_csv(const WitnessAtlas& A);

} // namespace keller
