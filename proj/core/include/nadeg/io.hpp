#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "nadeg/filtration.hpp"
#include "nadeg/functionals.hpp"
#include "nadeg/geometry.hpp"
#include "nadeg/measure.hpp"
#include "nadeg/optimize.hpp"

// JSON input schemas and the deterministic output writer.
namespace nadeg::io {

using nlohmann::json;

/// Number, "p/q" or decimal string, or [num, den].
Rational rational_from_json(const json& j);
RVector rvector_from_json(const json& j);
std::vector<double> doubles_from_json(const json& j);

/// {"dim": n, "vertices": [...], "halfspaces": [{"normal": [...], "offset": q}]}
RationalPolytope polytope_from_json(const json& j);
json to_json(const RationalPolytope& p);

/// {"cells": [{"simplex": [...], "affine": {...}}], "certify": bool}, or
/// {"domain": polytope, "affine": {...}}, or {"domain": polytope, "min_of": [{...}]}.
PLConcaveFunction pl_from_json(const json& j);
AffineForm affine_from_json(const json& j, int dim);

/// {"label": s, "levels": {"m": {"dim": N, "values": [...], "basis": [[...]],
/// "weights": [[...]], "flags": [{"value": λ, "rows": [[...]]}]}}}
GradedFiltration filtration_from_json(const json& j);
json to_json(const FiltrationLevel& lv);

/// {"atoms": [...]}, {"dirac": x, "mass": m}, {"uniform": [lo, hi]} or
/// {"pushforward": <pl function>, "xi": [...]}.
DHMeasure measure_from_json(const json& j);
json to_json(const DHMeasure& mu);

/// {"policy": "supplied" | "weight_twist" | "special_valuation", "value": x}
LPolicy lpolicy_from_json(const json& j);

/// Non-finite doubles become the strings "inf", "-inf", "nan".
json number(double x);
json to_json(const NAReport& r);
json to_json(const OptResult& r);
json to_json(const ConvexScan& s);
json to_json(const SupportInfo& s);

/// Sorted keys, two-space indent, doubles with 17 significant digits.
std::string dump(const json& j);

/// Parses text; ParseError carries line and column of the failure.
json parse(const std::string& text);

}  // namespace nadeg::io
