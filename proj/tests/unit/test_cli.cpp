#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "nadeg/error.hpp"

using namespace nadeg;
using namespace nadeg::cli;
using nlohmann::json;

namespace {

const std::string kFixtures = NADEG_FIXTURES;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(Command c, const std::string& input, int threads = 1) {
  JobSpec job;
  job.command = c;
  job.input_path = input;
  job.threads = threads;
  std::ostringstream out, err;
  const int code = run(job, out, err);
  return {code, out.str(), err.str()};
}

GradedFiltration p1(int lo, int hi) {
  GradedFiltration f("p1");
  for (int m = lo; m <= hi; ++m) {
    RVector v;
    for (int i = 0; i <= m; ++i) v.push_back(-i);
    f.set_level(FiltrationLevel::from_values(m, v));
  }
  return f;
}

}  // namespace

TEST_CASE("command names round trip") {
  for (auto c : {Command::dh, Command::report, Command::soliton, Command::rescale, Command::twist_opt, Command::degenerate,
                 Command::distance, Command::cone, Command::check}) {
    CHECK(command_from_string(to_string(c)) == c);
  }
  CHECK_FALSE(command_from_string("solve").has_value());
}

TEST_CASE("check on the projective line fixture") {
  const auto r = invoke(Command::check, kFixtures + "/p1_example.json");
  CHECK(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc.at("all_pass").get<bool>());
  for (const auto& [name, suite] : doc.at("suites").items()) CHECK_MESSAGE(suite.at("pass").get<bool>(), name);
}

TEST_CASE("solitons of symmetric polytopes vanish") {
  const auto r = invoke(Command::soliton, kFixtures + "/symmetric_polytopes.json");
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  REQUIRE(doc.at("results").size() >= 3);
  for (const auto& res : doc.at("results")) {
    CHECK(res.at("certificates").at("converged").get<bool>());
    for (const auto& x : res.at("argmin")) CHECK(std::fabs(x.get<double>()) <= 1e-10);
  }
}

TEST_CASE("rescaling candidates") {
  const auto r = invoke(Command::rescale, kFixtures + "/unstable_interval.json");
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  const auto& c = doc.at("candidates");
  CHECK(std::fabs(c[0].at("argmin")[0].get<double>() - 0.898377992361856521) < 1e-8);
  CHECK(std::fabs(c[0].at("value").get<double>() - -0.408638820402771158) < 1e-10);
  CHECK(c[1].at("argmin")[0].get<double>() == 0.0);
  CHECK(doc.at("h_is_upper_bound").get<bool>());
}

TEST_CASE("input errors") {
  const auto bad = invoke(Command::report, std::string(NADEG_FIXTURES) + "/../../tests/data/malformed.json");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line") != std::string::npos);
  CHECK(bad.err.find("column") != std::string::npos);
  CHECK(invoke(Command::report, kFixtures + "/missing.json").code == 2);
  // a fixture lacking the fields a command needs
  CHECK(invoke(Command::soliton, kFixtures + "/p1_example.json").code == 2);

  JobSpec job;
  job.input_path = kFixtures + "/p1_example.json";
  job.format = "xml";
  std::ostringstream out, err;
  CHECK(run(job, out, err) == 2);
}

TEST_CASE("output does not depend on thread count") {
  for (auto c : {Command::check, Command::soliton}) {
    const std::string file = c == Command::check ? "/p1_example.json" : "/symmetric_polytopes.json";
    const auto one = invoke(c, kFixtures + file, 1);
    const auto four = invoke(c, kFixtures + file, 4);
    CHECK(one.code == 0);
    CHECK(one.out == four.out);
  }
}

TEST_CASE("degree ranges") {
  CHECK(parse_degree_range("3..7") == std::pair{3, 7});
  CHECK(parse_degree_range("5") == std::pair{5, 5});
  CHECK_THROWS_AS(parse_degree_range("7..3"), Error);
  CHECK_THROWS_AS(parse_degree_range("0"), Error);
  CHECK_THROWS_AS(parse_degree_range("a..b"), Error);
  CHECK_THROWS_AS(parse_degree_range("3..7x"), Error);
}

TEST_CASE("convergence report") {
  const auto f = p1(10, 40);
  const auto self = convergence_report(f, empirical_dh(f, 20, 1), {20}, 1);
  REQUIRE(self.rows.size() == 1);
  CHECK(self.rows[0].w1 == 0.0);
  CHECK(self.rows[0].q_error < 1e-14);

  const auto rep = convergence_report(f, DHMeasure::uniform(-1, 0), {10, 20, 40}, 1);
  CHECK(rep.q_error_monotone);
  for (const auto& row : rep.rows) CHECK(row.w1 <= 2.0 / row.m);
  const auto csv = to_csv(rep);
  CHECK(csv.rfind("m,w1,q_error,psi_error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
