#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "nadeg/error.hpp"
#include "nadeg/expint.hpp"
#include "nadeg/functionals.hpp"
#include "nadeg/io.hpp"
#include "nadeg/optimize.hpp"

namespace nadeg::cli {

using io::json;
using io::number;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const json& field(const json& doc, const char* key, Command c) {
  if (!doc.contains(key)) bad(std::string("command '") + to_string(c) + "' needs input field '" + key + "'");
  return doc.at(key);
}

int dim_of(const json& doc, Command c) {
  const json& d = field(doc, "dim", c);
  if (!d.is_number_integer() || d.get<int>() < 1) bad("'dim' must be a positive integer");
  return d.get<int>();
}

double double_field(const json& doc, const char* key, Command c) { return to_double(io::rational_from_json(field(doc, key, c))); }

// Degrees to use: --degrees range ∩ stored, else "degrees" in the input, else all stored.
std::vector<int> select_degrees(const JobSpec& job, const json& doc, const GradedFiltration& f) {
  std::vector<int> out;
  if (job.degree_range) {
    for (int m : f.degrees()) {
      if (m >= job.degree_range->first && m <= job.degree_range->second) out.push_back(m);
    }
    if (out.empty()) throw Error(ErrorKind::MissingLevel, "no stored degree in the requested range");
    return out;
  }
  if (doc.contains("degrees")) {
    for (const auto& m : doc.at("degrees")) {
      if (!m.is_number_integer()) bad("'degrees' must list integers");
      f.level(m.get<int>());
      out.push_back(m.get<int>());
    }
    return out;
  }
  return f.degrees();
}

LPolicy policy_of(const json& doc) { return doc.contains("L") ? io::lpolicy_from_json(doc.at("L")) : LPolicy::supplied(0.0); }

NewtonOptions newton_options(const JobSpec& job) {
  NewtonOptions o;
  o.tol = job.tol;
  return o;
}

// Measure from "measure", or the empirical measure of "filtration" at "degree".
DHMeasure measure_of(const json& doc, Command c) {
  if (doc.contains("measure")) return io::measure_from_json(doc.at("measure"));
  if (doc.contains("filtration")) {
    const auto f = io::filtration_from_json(doc.at("filtration"));
    const json& m = field(doc, "degree", c);
    if (!m.is_number_integer()) bad("'degree' must be an integer");
    return empirical_dh(f, m.get<int>(), dim_of(doc, c));
  }
  bad(std::string("command '") + to_string(c) + "' needs 'measure' or 'filtration' + 'degree'");
}

struct Output {
  json body;
  std::string csv;
  bool ok = true;
};

std::string csv_rows(const std::vector<std::pair<std::string, double>>& rows) {
  std::string s = "functional,value\n";
  for (const auto& [k, v] : rows) s += k + "," + fmt(v) + "\n";
  return s;
}

// ---------------------------------------------------------------- commands

Output cmd_dh(const JobSpec& job, const json& doc) {
  Output o;
  if (!doc.contains("filtration")) {
    const DHMeasure mu = measure_of(doc, Command::dh);
    o.body = json{{"mass", number(mass(mu))}, {"support", io::to_json(support(mu))}, {"measure", io::to_json(mu)}};
    o.csv = cdf_csv(mu, 201);
    return o;
  }
  const auto f = io::filtration_from_json(doc.at("filtration"));
  const int n = dim_of(doc, Command::dh);
  const auto degrees = select_degrees(job, doc, f);
  json levels = json::object();
  for (int m : degrees) {
    const DHMeasure nu = empirical_dh(f, m, n);
    levels[std::to_string(m)] = json{{"mass", number(mass(nu))}, {"support", io::to_json(support(nu))}, {"atoms", io::to_json(nu).at("atoms")}};
  }
  json warnings = json::array();
  for (const auto& w : superadditivity_warnings(f)) warnings.push_back(w);
  o.body = json{{"levels", levels}, {"superadditivity_warnings", warnings}};
  if (doc.contains("limit")) {
    const auto rep = convergence_report(f, io::measure_from_json(doc.at("limit")), degrees, n);
    json rows = json::array();
    for (const auto& r : rep.rows) {
      rows.push_back(json{{"m", r.m}, {"w1", number(r.w1)}, {"q_error", number(r.q_error)}, {"psi_error", number(r.psi_error)}});
    }
    o.body["convergence"] = json{{"rows", rows}, {"q_error_monotone", rep.q_error_monotone}};
    o.csv = to_csv(rep);
  } else {
    o.csv = cdf_csv(empirical_dh(f, degrees.back(), n), 201);
  }
  return o;
}

Output cmd_report(const JobSpec& job, const json& doc) {
  Output o;
  const DHMeasure mu = measure_of(doc, Command::report);
  const NAReport r = na_report(mu, policy_of(doc), job.a_values, job.tol);
  o.body = io::to_json(r);
  o.body["support"] = io::to_json(support(mu));
  std::vector<std::pair<std::string, double>> rows{{"V", r.V}, {"E", r.E}, {"S_tilde", r.S_tilde}, {"L", r.L}, {"H", r.H}, {"D", r.D}};
  for (int k = 0; k <= 4; ++k) rows.emplace_back("E_" + std::to_string(k), r.E_k[static_cast<size_t>(k)]);
  for (const auto& [a, q] : r.Q) rows.emplace_back("Q(" + fmt(a) + ")", q);
  o.csv = csv_rows(rows);
  return o;
}

json soliton_one(const JobSpec& job, const json& entry) {
  const auto p = io::polytope_from_json(field(entry, "polytope", Command::soliton));
  const int r = entry.contains("projection_rank") ? entry.at("projection_rank").get<int>() : p.dim();
  json out = io::to_json(soliton_vector(p, r, newton_options(job)));
  if (entry.contains("name")) out["name"] = entry.at("name");
  return out;
}

Output cmd_soliton(const JobSpec& job, const json& doc) {
  Output o;
  if (doc.contains("polytopes")) {
    json all = json::array();
    std::string csv = "name,argmin_norm,value,grad_norm\n";
    for (const auto& e : doc.at("polytopes")) {
      json r = soliton_one(job, e);
      double norm = 0;
      for (const auto& x : r.at("argmin")) norm += x.get<double>() * x.get<double>();
      csv += e.value("name", std::string("?")) + "," + fmt(std::sqrt(norm)) + "," + fmt(r.at("value").get<double>()) + "," +
             fmt(r.at("grad_norm").get<double>()) + "\n";
      all.push_back(std::move(r));
    }
    o.body = json{{"results", all}};
    o.csv = csv;
    return o;
  }
  o.body = soliton_one(job, doc);
  o.csv = csv_rows({{"value", o.body.at("value").get<double>()}, {"grad_norm", o.body.at("grad_norm").get<double>()}});
  return o;
}

json rescale_one(const JobSpec& job, const json& entry, double& best) {
  const double a = double_field(entry, "A", Command::rescale);
  const DHMeasure mu = measure_of(entry, Command::rescale);
  const OptResult r = rescale_opt(a, mu, newton_options(job));
  json out = io::to_json(r);
  out["beta"] = number(a - moment(mu, 1));
  out["tilde_beta_at_1"] = number(tilde_beta(a, mu));
  if (entry.contains("name")) out["name"] = entry.at("name");
  best = std::min(best, r.value);
  return out;
}

Output cmd_rescale(const JobSpec& job, const json& doc) {
  Output o;
  double best = std::numeric_limits<double>::infinity();
  if (doc.contains("candidates")) {
    json all = json::array();
    for (const auto& e : doc.at("candidates")) all.push_back(rescale_one(job, e, best));
    // inf over the supplied candidates only
    o.body = json{{"candidates", all}, {"h_upper_bound", number(best)}, {"h_is_upper_bound", true}};
    o.csv = csv_rows({{"h_upper_bound", best}});
    return o;
  }
  o.body = rescale_one(job, doc, best);
  o.csv = csv_rows({{"a_star", o.body.at("argmin")[0].is_number() ? o.body.at("argmin")[0].get<double>()
                                                                    : std::numeric_limits<double>::infinity()},
                    {"value", best}});
  return o;
}

Output cmd_twist_opt(const JobSpec& job, const json& doc) {
  Output o;
  const auto f = io::filtration_from_json(field(doc, "filtration", Command::twist_opt));
  const auto degrees = select_degrees(job, doc, f);
  std::optional<std::vector<double>> start;
  if (doc.contains("start")) start = io::doubles_from_json(doc.at("start"));
  const OptResult r = twist_opt(f, degrees, policy_of(doc), dim_of(doc, Command::twist_opt), start, newton_options(job));
  o.body = io::to_json(r);
  o.body["degrees"] = degrees;
  o.csv = csv_rows({{"value", r.value}, {"grad_norm", r.grad_norm}});
  return o;
}

json rvec(const RVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

Output cmd_degenerate(const JobSpec&, const json& doc) {
  Output o;
  const json& model = field(doc, "model", Command::degenerate);
  const MonomialModel mm(field(model, "num_vars", Command::degenerate).get<int>());
  const auto w = field(model, "w", Command::degenerate).get<std::vector<long>>();
  const auto f1 = io::filtration_from_json(field(doc, "filtration", Command::degenerate));
  const int m = field(doc, "degree", Command::degenerate).get<int>();
  const auto deg = initial_term_degeneration(mm, w, f1, m);
  GradedFiltration f0("weight");
  f0.set_level(weight_filtration(mm, w, m));
  const RVector min1 = successive_minima(f1.level(m));
  const RVector min1p = successive_minima(deg.level(m));
  const RVector rel = relative_minima(f0, f1, m);
  RVector twisted = successive_minima(twist(deg, RVector{Rational(-1)}).level(m));
  std::sort(twisted.begin(), twisted.end());
  o.body = json{{"degenerate_level", io::to_json(deg.level(m))},
                {"minima_F1", rvec(min1)},
                {"minima_F1_prime", rvec(min1p)},
                {"relative_minima", rvec(rel)},
                {"twisted_minima", rvec(twisted)},
                {"minima_preserved", min1 == min1p},
                {"relative_minima_preserved", rel == twisted}};
  o.ok = min1 == min1p && rel == twisted;
  o.csv = "quantity,preserved\nsuccessive_minima," + std::string(min1 == min1p ? "true" : "false") + "\nrelative_minima," +
          std::string(rel == twisted ? "true" : "false") + "\n";
  return o;
}

Output cmd_distance(const JobSpec& job, const json& doc) {
  Output o;
  const auto f0 = io::filtration_from_json(field(doc, "F0", Command::distance));
  const auto f1 = io::filtration_from_json(field(doc, "F1", Command::distance));
  const double p = doc.contains("p") ? to_double(io::rational_from_json(doc.at("p"))) : 2.0;
  const auto degrees = select_degrees(job, doc, f0);
  const DpSequence s = d_p_sequence(f0, f1, degrees, p);
  json rows = json::array();
  std::string csv = "m,d_p\n";
  for (size_t i = 0; i < s.degrees.size(); ++i) {
    json row{{"m", s.degrees[i]}, {"d_p", number(s.values[i])}};
    if (p == 2.0) row["d2_squared_exact"] = d2_squared_level(f0, f1, s.degrees[i]).str();
    rows.push_back(row);
    csv += std::to_string(s.degrees[i]) + "," + fmt(s.values[i]) + "\n";
  }
  o.body = json{{"p", number(p)}, {"levels", rows}, {"extrapolated", number(s.extrapolated)}};
  o.csv = csv;
  return o;
}

Output cmd_cone(const JobSpec&, const json& doc) {
  Output o;
  const double a = double_field(doc, "A", Command::cone);
  const DHMeasure mu = measure_of(doc, Command::cone);
  const int n = dim_of(doc, Command::cone);
  std::vector<double> grid = doc.contains("s_grid") ? io::doubles_from_json(doc.at("s_grid")) : default_s_grid();
  const ConvexScan scan = cone_family(a, mu, n, grid);
  o.body = io::to_json(scan);
  std::string csv = "s,f\n";
  for (size_t i = 0; i < scan.s.size(); ++i) csv += fmt(scan.s[i]) + "," + fmt(scan.values[i]) + "\n";
  o.csv = csv;
  return o;
}

// Invariant suites on a filtration fixture with its limit measure.
Output cmd_check(const JobSpec& job, const json& doc) {
  Output o;
  const auto f = io::filtration_from_json(field(doc, "filtration", Command::check));
  const DHMeasure limit = io::measure_from_json(field(doc, "limit", Command::check));
  const int n = dim_of(doc, Command::check);
  const json expected = doc.value("expected", json::object());
  json suites = json::object();
  bool all = true;
  auto record = [&](const std::string& name, bool pass, json detail) {
    suites[name] = json{{"pass", pass}, {"detail", std::move(detail)}};
    all = all && pass;
  };

  // successive minima: descending, N_m entries, optional polynomial for the sum
  {
    bool pass = true;
    json bad_degrees = json::array();
    RVector poly;
    if (expected.contains("minima_sum_polynomial")) poly = io::rvector_from_json(expected.at("minima_sum_polynomial"));
    for (int m : f.degrees()) {
      const RVector mins = successive_minima(f.level(m));
      bool ok = std::is_sorted(mins.begin(), mins.end(), [](const Rational& a, const Rational& b) { return a > b; });
      if (!poly.empty()) {
        Rational sum = 0;
        for (const auto& x : mins) sum += x;
        Rational val = 0;
        Rational pw = 1;
        for (const auto& c : poly) {
          val += c * pw;
          pw *= m;
        }
        ok = ok && sum == val;
      }
      if (!ok) {
        pass = false;
        bad_degrees.push_back(m);
      }
    }
    record("successive_minima", pass, json{{"failing_degrees", bad_degrees}});
  }

  const auto check_degrees = select_degrees(job, doc, f);
  // W1(ν_m, limit) ≤ 2/m
  {
    const auto rep = convergence_report(f, limit, check_degrees, n);
    bool pass = true;
    json rows = json::array();
    for (const auto& r : rep.rows) {
      pass = pass && r.w1 <= 2.0 / r.m;
      rows.push_back(json{{"m", r.m}, {"w1", number(r.w1)}, {"bound", number(2.0 / r.m)}});
    }
    record("wasserstein_bound", pass, rows);
    record("q_convergence_monotone", rep.q_error_monotone, json{{"degrees", check_degrees}});
  }

  // functionals of the limit measure
  {
    const NAReport r = na_report(limit, LPolicy::supplied(0.0), {}, job.tol);
    bool pass = r.s_tilde_le_e;
    json d{{"E", number(r.E)}, {"S_tilde", number(r.S_tilde)}};
    if (expected.contains("E")) pass = pass && std::fabs(r.E - to_double(io::rational_from_json(expected.at("E")))) <= job.tol;
    if (expected.contains("S_tilde")) pass = pass && std::fabs(r.S_tilde - expected.at("S_tilde").get<double>()) <= job.tol;
    record("limit_functionals", pass, d);
  }

  // E_1 from the polynomial fit of Σλ
  if (expected.contains("E_fit")) {
    std::vector<int> fit_degrees;
    for (int m : f.degrees()) {
      if (m >= 10 && m <= 50) fit_degrees.push_back(m);
    }
    if (fit_degrees.size() < 3) fit_degrees = f.degrees();
    const Rational v = decimal_rational(mass(limit));
    const EkFit fit = ek_from_minima_polynomial(f, fit_degrees, 1, n, v);
    const Rational want = io::rational_from_json(expected.at("E_fit"));
    record("E_fit", fit.estimate == want, json{{"estimate", fit.estimate.str()}, {"expected", want.str()}});
  }

  // Jensen S̃ ≤ E on every empirical level
  {
    bool pass = true;
    for (int m : check_degrees) {
      const DHMeasure nu = empirical_dh(f, m, n);
      pass = pass && tilde_S(nu) <= moment(nu, 1) + job.tol;
    }
    record("jensen", pass, json::object());
  }

  // exact round trips of the transformation rules
  {
    const Rational a(3, 2), b(-2, 5);
    const auto back = rescale_shift(rescale_shift(f, a, b), 1 / a, -b / a);
    bool pass = true;
    for (int m : f.degrees()) pass = pass && back.level(m).values() == f.level(m).values();
    for (int m : check_degrees) pass = pass && d2_squared_level(f, f, m) == 0;
    record("transformation_rules", pass, json::object());
  }

  {
    json warnings = json::array();
    for (const auto& w : superadditivity_warnings(f)) warnings.push_back(w);
    record("superadditivity", warnings.empty(), warnings);
  }

  o.body = json{{"suites", suites}, {"all_pass", all}, {"tolerance", job.tol}};
  std::string csv = "suite,pass\n";
  for (auto it = suites.begin(); it != suites.end(); ++it) csv += it.key() + "," + (it.value().at("pass").get<bool>() ? "true" : "false") + "\n";
  o.csv = csv;
  o.ok = all;
  return o;
}

}  // namespace

std::optional<Command> command_from_string(const std::string& s) {
  for (Command c : {Command::dh, Command::report, Command::soliton, Command::rescale, Command::twist_opt, Command::degenerate,
                    Command::distance, Command::cone, Command::check}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

const char* to_string(Command c) {
  switch (c) {
    case Command::dh: return "dh";
    case Command::report: return "report";
    case Command::soliton: return "soliton";
    case Command::rescale: return "rescale";
    case Command::twist_opt: return "twist-opt";
    case Command::degenerate: return "degenerate";
    case Command::distance: return "distance";
    case Command::cone: return "cone";
    case Command::check: return "check";
  }
  return "?";
}

std::pair<int, int> parse_degree_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || v < 1) throw Error(ErrorKind::InvalidInput, "bad degree range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int m = to_int(text);
    return {m, m};
  }
  const int lo = to_int(text.substr(0, dots));
  const int hi = to_int(text.substr(dots + 2));
  if (lo > hi) throw Error(ErrorKind::InvalidInput, "empty degree range '" + text + "'");
  return {lo, hi};
}

ConvergenceReport convergence_report(const GradedFiltration& f, const DHMeasure& limit, const std::vector<int>& degrees, int n) {
  ConvergenceReport rep;
  const double q = exp_moment(limit, 1.0);
  for (int m : degrees) {
    const DHMeasure nu = empirical_dh(f, m, n);
    const double qm = q_m(f, m);
    rep.rows.push_back(ConvergenceRow{m, wasserstein1(nu, limit), std::fabs(qm - q), std::fabs((1 - qm) - (1 - q))});
  }
  rep.q_error_monotone = true;
  for (size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].q_error > rep.rows[i - 1].q_error) rep.q_error_monotone = false;
  }
  return rep;
}

std::string to_csv(const ConvergenceReport& r) {
  std::string s = "m,w1,q_error,psi_error\n";
  for (const auto& row : r.rows) s += std::to_string(row.m) + "," + fmt(row.w1) + "," + fmt(row.q_error) + "," + fmt(row.psi_error) + "\n";
  return s;
}

int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    if (job.format != "json" && job.format != "csv") bad("--format must be json or csv");
    if (job.threads < 1) bad("--threads must be positive");
    if (!(job.tol > 0)) bad("--tol must be positive");
    set_thread_count(job.threads);
    if (job.input_path.empty()) bad("--input is required");
    std::ifstream in(job.input_path);
    if (!in) bad("cannot open input file '" + job.input_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const json doc = io::parse(buf.str());
    if (!doc.is_object()) bad("input document must be a JSON object");

    Output o;
    switch (job.command) {
      case Command::dh: o = cmd_dh(job, doc); break;
      case Command::report: o = cmd_report(job, doc); break;
      case Command::soliton: o = cmd_soliton(job, doc); break;
      case Command::rescale: o = cmd_rescale(job, doc); break;
      case Command::twist_opt: o = cmd_twist_opt(job, doc); break;
      case Command::degenerate: o = cmd_degenerate(job, doc); break;
      case Command::distance: o = cmd_distance(job, doc); break;
      case Command::cone: o = cmd_cone(job, doc); break;
      case Command::check: o = cmd_check(job, doc); break;
    }
    std::string text;
    if (job.format == "csv") {
      text = o.csv;
    } else {
      o.body["command"] = to_string(job.command);
      if (!o.body.contains("tolerance")) o.body["tolerance"] = job.tol;
      text = io::dump(o.body);
    }
    if (job.output_path.empty()) {
      out << text;
    } else {
      std::ofstream file(job.output_path);
      if (!file) bad("cannot write output file '" + job.output_path + "'");
      file << text;
    }
    if (!o.ok) {
      err << "nadeg " << to_string(job.command) << ": one or more checks failed\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << "nadeg " << to_string(job.command) << ": " << e.what() << "\n";
    return is_input_error(e.kind()) ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    err << "nadeg " << to_string(job.command) << ": InvalidInput: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace nadeg::cli
