#include "nadeg/io.hpp"

#include <cmath>
#include <cstdio>

#include "nadeg/error.hpp"

namespace nadeg::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const json& require(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) bad(std::string(where) + ": missing field '" + key + "'");
  return j.at(key);
}

int int_from_json(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string qstr(const Rational& q) { return q.str(); }

json rvector_json(const RVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(qstr(x));
  return a;
}

json affine_json(const AffineForm& f) { return json{{"gradient", rvector_json(f.gradient)}, {"constant", qstr(f.constant)}}; }

void write(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  const std::string inner(static_cast<size_t>(indent + 2), ' ');
  char buf[64];
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: keys already sorted
        if (!first) out += ",\n";
        first = false;
        out += inner + json(it.key()).dump() + ": ";
        write(it.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write(j[i], out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += json(std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf")).dump();
        return;
      }
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) bad("non-finite number");
    return decimal_rational(x);
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    if (j[1].get<long long>() == 0) throw Error(ErrorKind::ParseError, "zero denominator in " + j.dump());
    return Rational(j[0].get<long long>()) / Rational(j[1].get<long long>());
  }
  throw Error(ErrorKind::ParseError, "not a rational number: " + j.dump());
}

RVector rvector_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of rationals, got " + j.dump());
  RVector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

std::vector<double> doubles_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) bad("expected an array of numbers, got " + j.dump());
  std::vector<double> v;
  for (const auto& x : j) v.push_back(to_double(rational_from_json(x)));
  return v;
}

RationalPolytope polytope_from_json(const json& j) {
  const int dim = int_from_json(require(j, "dim", "polytope"), "polytope dim");
  if (dim < 1) bad("polytope dim must be at least 1");
  std::vector<RVector> verts;
  std::vector<Halfspace> hs;
  const bool has_v = j.contains("vertices");
  const bool has_h = j.contains("halfspaces");
  if (!has_v && !has_h) bad("polytope: give 'vertices' or 'halfspaces'");
  if (has_v) {
    for (const auto& v : j.at("vertices")) {
      verts.push_back(rvector_from_json(v));
      if (static_cast<int>(verts.back().size()) != dim) throw Error(ErrorKind::DimensionMismatch, "vertex of the wrong dimension");
    }
  }
  if (has_h) {
    for (const auto& h : j.at("halfspaces")) {
      Halfspace s{rvector_from_json(require(h, "normal", "halfspace")), rational_from_json(require(h, "offset", "halfspace"))};
      if (static_cast<int>(s.normal.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "halfspace normal of the wrong dimension");
      hs.push_back(std::move(s));
    }
  }
  if (has_v && has_h) return RationalPolytope::from_both(dim, std::move(verts), std::move(hs));
  if (has_v) return RationalPolytope::from_vertices(dim, std::move(verts));
  return RationalPolytope::from_halfspaces(dim, std::move(hs));
}

json to_json(const RationalPolytope& p) {
  json verts = json::array();
  for (const auto& v : p.vertices()) verts.push_back(rvector_json(v));
  json hs = json::array();
  for (const auto& h : p.halfspaces()) hs.push_back(json{{"normal", rvector_json(h.normal)}, {"offset", qstr(h.offset)}});
  return json{{"dim", p.dim()}, {"vertices", verts}, {"halfspaces", hs}};
}

AffineForm affine_from_json(const json& j, int dim) {
  AffineForm f{rvector_from_json(require(j, "gradient", "affine form")),
               j.contains("constant") ? rational_from_json(j.at("constant")) : Rational(0)};
  if (static_cast<int>(f.gradient.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "affine gradient of the wrong dimension");
  return f;
}

PLConcaveFunction pl_from_json(const json& j) {
  if (j.is_object() && j.contains("domain")) {
    const RationalPolytope domain = polytope_from_json(j.at("domain"));
    if (j.contains("min_of")) {
      std::vector<AffineForm> pieces;
      for (const auto& a : j.at("min_of")) pieces.push_back(affine_from_json(a, domain.dim()));
      return PLConcaveFunction::min_of_affine(domain, pieces);
    }
    return PLConcaveFunction::affine_on(domain, affine_from_json(require(j, "affine", "pl function"), domain.dim()));
  }
  const json& cells = require(j, "cells", "pl function");
  if (!cells.is_array() || cells.empty()) bad("pl function: 'cells' must be a non-empty array");
  std::vector<PLCell> out;
  for (const auto& c : cells) {
    std::vector<RVector> vs;
    for (const auto& v : require(c, "simplex", "cell")) vs.push_back(rvector_from_json(v));
    Simplex s(std::move(vs));
    AffineForm f = affine_from_json(require(c, "affine", "cell"), s.dim());
    out.push_back(PLCell{std::move(s), std::move(f)});
  }
  const bool certify = j.value("certify", false);
  return PLConcaveFunction(std::move(out), certify);
}

GradedFiltration filtration_from_json(const json& j) {
  GradedFiltration f(j.value("label", std::string()));
  const json& levels = require(j, "levels", "filtration");
  if (!levels.is_object() || levels.empty()) bad("filtration: 'levels' must be a non-empty object");
  for (auto it = levels.begin(); it != levels.end(); ++it) {
    int m = 0;
    try {
      m = std::stoi(it.key());
    } catch (const std::exception&) {
      bad("filtration level key '" + it.key() + "' is not a degree");
    }
    const json& lv = it.value();
    std::vector<RVector> weights;
    if (lv.contains("weights")) {
      for (const auto& w : lv.at("weights")) weights.push_back(rvector_from_json(w));
    }
    if (lv.contains("flags")) {
      const int dim = int_from_json(require(lv, "dim", "flag level"), "level dim");
      std::vector<FlagStep> steps;
      for (const auto& s : lv.at("flags")) {
        FlagStep st{rational_from_json(require(s, "value", "flag")), {}};
        for (const auto& r : require(s, "rows", "flag")) st.rows.push_back(rvector_from_json(r));
        steps.push_back(std::move(st));
      }
      if (!weights.empty()) bad("flag levels cannot carry torus weights; give an adapted 'basis' instead");
      f.set_level(FiltrationLevel::from_flags(m, dim, std::move(steps)));
      continue;
    }
    RVector values = rvector_from_json(require(lv, "values", "filtration level"));
    if (lv.contains("dim") && int_from_json(lv.at("dim"), "level dim") != static_cast<int>(values.size())) {
      throw Error(ErrorKind::DimensionMismatch, "level " + it.key() + ": 'dim' differs from the number of values");
    }
    if (lv.contains("basis")) {
      RMatrix basis;
      for (const auto& r : lv.at("basis")) basis.push_back(rvector_from_json(r));
      f.set_level(FiltrationLevel::from_basis(m, std::move(basis), std::move(values), std::move(weights)));
    } else {
      f.set_level(FiltrationLevel::from_values(m, std::move(values), std::move(weights)));
    }
  }
  return f;
}

json to_json(const FiltrationLevel& lv) {
  json basis = json::array();
  for (const auto& b : lv.basis()) basis.push_back(rvector_json(b));
  json out{{"degree", lv.degree()}, {"dim", lv.dim()}, {"values", rvector_json(lv.values())}, {"basis", basis}};
  if (lv.has_weights()) {
    json w = json::array();
    for (const auto& a : lv.weights()) w.push_back(rvector_json(a));
    out["weights"] = w;
  }
  return out;
}

DHMeasure measure_from_json(const json& j) {
  if (!j.is_object()) bad("measure must be a JSON object");
  if (j.contains("atoms")) {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      Atom at{rational_from_json(require(a, "pos", "atom")), a.contains("mass") ? rational_from_json(a.at("mass")) : Rational(1), {}};
      if (a.contains("weight")) at.weight = rvector_from_json(a.at("weight"));
      atoms.push_back(std::move(at));
    }
    return DHMeasure::atomic(std::move(atoms));
  }
  if (j.contains("dirac")) {
    return DHMeasure::dirac(rational_from_json(j.at("dirac")), j.contains("mass") ? rational_from_json(j.at("mass")) : Rational(1));
  }
  if (j.contains("uniform")) {
    const RVector lohi = rvector_from_json(j.at("uniform"));
    if (lohi.size() != 2) bad("'uniform' needs [lo, hi]");
    return DHMeasure::uniform(lohi[0], lohi[1]);
  }
  if (j.contains("pushforward")) {
    std::vector<double> xi;
    if (j.contains("xi")) xi = doubles_from_json(j.at("xi"));
    return DHMeasure::pushforward(pl_from_json(j.at("pushforward")), std::move(xi));
  }
  bad("measure: expected one of 'atoms', 'dirac', 'uniform', 'pushforward'");
}

json to_json(const DHMeasure& mu) {
  if (mu.is_atomic()) {
    json atoms = json::array();
    for (const auto& a : mu.atoms()) {
      json at{{"pos", qstr(a.pos)}, {"mass", qstr(a.mass)}};
      if (!a.weight.empty()) at["weight"] = rvector_json(a.weight);
      atoms.push_back(at);
    }
    return json{{"atoms", atoms}};
  }
  json cells = json::array();
  for (const auto& c : mu.transform().cells()) {
    json s = json::array();
    for (const auto& v : c.simplex.vertices()) s.push_back(rvector_json(v));
    cells.push_back(json{{"simplex", s}, {"affine", affine_json(c.affine)}});
  }
  json xi = json::array();
  for (double x : mu.xi()) xi.push_back(number(x));
  return json{{"pushforward", json{{"cells", cells}}}, {"xi", xi}};
}

LPolicy lpolicy_from_json(const json& j) {
  if (j.is_number()) return LPolicy::supplied(j.get<double>());
  const std::string p = require(j, "policy", "L policy").get<std::string>();
  if (p == "weight_twist") return LPolicy::weight_twist();
  const double v = to_double(rational_from_json(require(j, "value", "L policy")));
  if (p == "supplied") return LPolicy::supplied(v);
  if (p == "special_valuation") return LPolicy::special_valuation(v);
  bad("unknown L policy '" + p + "'");
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

json to_json(const NAReport& r) {
  json ek = json::array();
  for (double x : r.E_k) ek.push_back(number(x));
  json q = json::object();
  for (const auto& [a, v] : r.Q) {
    char key[64];
    std::snprintf(key, sizeof key, "%.17g", a);
    q[key] = number(v);
  }
  return json{{"V", number(r.V)},
              {"E", number(r.E)},
              {"E_k", ek},
              {"S_tilde", number(r.S_tilde)},
              {"L", number(r.L)},
              {"H", number(r.H)},
              {"D", number(r.D)},
              {"Q", q},
              {"flags", json{{"normalized", r.normalized}, {"S_tilde_le_E", r.s_tilde_le_e}}},
              {"tolerance", r.tol}};
}

json to_json(const OptResult& r) {
  json arg = json::array();
  for (double x : r.argmin) arg.push_back(number(x));
  return json{{"argmin", arg},
              {"value", number(r.value)},
              {"grad_norm", number(r.grad_norm)},
              {"iterations", r.iterations},
              {"certificates", json{{"converged", r.converged}, {"hessian_min_eig", number(r.hessian_min_eig)}}}};
}

json to_json(const ConvexScan& s) {
  json pts = json::array();
  for (size_t i = 0; i < s.s.size(); ++i) pts.push_back(json{{"s", number(s.s[i])}, {"f", number(s.values[i])}});
  json out{{"samples", pts}, {"midpoint_convex", s.midpoint_convex()}};
  if (s.derivative_at_start) out["derivative_at_start"] = number(*s.derivative_at_start);
  return out;
}

json to_json(const SupportInfo& s) {
  return json{{"lambda_min", number(s.lambda_min)}, {"lambda_max", number(s.lambda_max)}, {"atom_at_max", s.atom_at_max}};
}

std::string dump(const json& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1;
    size_t col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

}  // namespace nadeg::io
