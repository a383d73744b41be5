#include "doctest.h"

#include <cmath>
#include <random>

#include "nadeg/error.hpp"
#include "nadeg/functionals.hpp"
#include "oracles.hpp"

using namespace nadeg;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

GradedFiltration p1(const std::vector<int>& degrees) {
  GradedFiltration f("p1");
  for (int m : degrees) {
    RVector v;
    for (int i = 0; i <= m; ++i) v.push_back(-i);
    f.set_level(FiltrationLevel::from_values(m, v));
  }
  return f;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int m = lo; m <= hi; ++m) out.push_back(m);
  return out;
}

const double kLogEm1 = std::log(std::exp(1.0) - 1);

}  // namespace

TEST_CASE("report on the projective line") {
  const auto r = na_report(DHMeasure::uniform(-1, 0), LPolicy::supplied(0), {1.0, 2.0});
  CHECK(r.V == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(r.E + 0.5) < 1e-12);
  CHECK(std::fabs(r.S_tilde + kLogEm1) < 1e-12);
  CHECK(std::fabs(r.H - kLogEm1) < 1e-12);
  CHECK(r.D == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.s_tilde_le_e);
  CHECK(r.normalized);
  REQUIRE(r.Q.size() == 2);
  CHECK(r.Q[1].second == doctest::Approx((std::exp(2.0) - 1) / 2).epsilon(1e-14));
  CHECK(r.E_k[2] == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("report on a Dirac mass") {
  const auto r = na_report(DHMeasure::dirac(0), LPolicy::supplied(0));
  CHECK(r.E == 0.0);
  CHECK(r.S_tilde == 0.0);
  CHECK(r.H == 0.0);
  CHECK(r.D == 0.0);
}

TEST_CASE("shift rule for S and H") {
  const auto mu = DHMeasure::uniform(-1, q(1, 2));
  const double b = 0.75;
  const auto shifted = affine_transform(mu, 1, q(3, 4));
  CHECK(std::fabs(tilde_S(shifted) - (tilde_S(mu) + b)) < 1e-12);
  const auto r0 = na_report(mu, LPolicy::supplied(0.3));
  const auto r1 = na_report(shifted, LPolicy::supplied(0.3 + b));
  CHECK(std::fabs(r1.H - r0.H) < 1e-12);
  CHECK_FALSE(r1.normalized);
}

TEST_CASE("tilde beta") {
  CHECK(tilde_beta(0, DHMeasure::dirac(0)) == 0.0);
  const double want = 1 + std::log((1 - std::exp(-4.0)) / 4);
  CHECK(std::fabs(tilde_beta(1, DHMeasure::uniform(0, 4)) - want) < 1e-12);
  CHECK(want == doctest::Approx(-0.404779807945777).epsilon(1e-13));
  const double quad = 1 + std::log(oracle::gk([](double x) { return std::exp(-x); }, 0, 4) / 4);
  CHECK(std::fabs(tilde_beta(1, DHMeasure::uniform(0, 4)) - quad) < 1e-12);
  // β̃ ≥ H whenever L ≤ A
  const auto mu = DHMeasure::uniform(0, 3);
  for (double l : {-1.0, 0.0, 0.5, 1.0}) CHECK(tilde_beta(1, mu) >= na_report(mu, LPolicy::supplied(l)).H - 1e-15);
  CHECK(tilde_beta(2, mu) == doctest::Approx(na_report(mu, LPolicy::special_valuation(2)).H).epsilon(1e-15));
}

TEST_CASE("beta_g") {
  CHECK(beta_g(1, DHMeasure::uniform(0, 4)) == doctest::Approx(-1.0).epsilon(1e-14));
  const auto mu = DHMeasure::uniform(q(1, 2), 3);
  CHECK(beta_g(2, mu) == doctest::Approx(2 - moment(mu, 1)).epsilon(1e-15));
  CHECK_THROWS_AS(beta_g(1, DHMeasure::uniform(-1, 0)), Error);
  const auto lin = PLConcaveFunction::affine_on(RationalPolytope::interval(0, 2), AffineForm{{1}, 0});
  CHECK(beta_g(1, DHMeasure::pushforward(lin, {0.0})) == doctest::Approx(beta_g(1, DHMeasure::pushforward(lin))).epsilon(1e-15));
  // g-weighted mean against quadrature
  const double num = oracle::gk([](double y) { return y * std::exp(-0.5 * y); }, 0, 2);
  const double den = oracle::gk([](double y) { return std::exp(-0.5 * y); }, 0, 2);
  CHECK(std::fabs(beta_g(1, DHMeasure::pushforward(lin, {0.5})) - (1 - num / den)) < 1e-12);
}

TEST_CASE("modified Futaki invariant") {
  const auto sym = RationalPolytope::interval(-1, 1);
  CHECK(std::fabs(fut(sym, {0.0}, {1.0})) < 1e-15);
  CHECK(fut(RationalPolytope::interval(-1, 2), {0.0}, {1.0}) == doctest::Approx(-0.5).epsilon(1e-14));

  const auto p = RationalPolytope::from_vertices(2, {{-1, -1}, {2, -1}, {1, 2}, {-1, 1}});
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> xi{u(rng), u(rng)};
    const std::vector<double> eta{u(rng), u(rng)};
    const double fd = oracle::central_difference(
        [&](double s) { return h_weight(p, {xi[0] + s * eta[0], xi[1] + s * eta[1]}); }, 0.0);
    CHECK(oracle::rel_err(fd, fut(p, xi, eta)) < 1e-6);
    // linear in η
    const double a = fut(p, xi, {1.0, 0.0}), b = fut(p, xi, {0.0, 1.0});
    CHECK(fut(p, xi, eta) == doctest::Approx(eta[0] * a + eta[1] * b).epsilon(1e-12));
  }
  const auto bary = barycenter(p);
  CHECK(fut(p, {0.0, 0.0}, {0.3, -0.2}) == doctest::Approx(-(0.3 * to_double(bary[0]) - 0.2 * to_double(bary[1]))).epsilon(1e-13));
  CHECK(h_weight(sym, {0.0}) == doctest::Approx(0.0));
}

TEST_CASE("derivative of S along a decomposition") {
  CHECK(ds_tilde_S({{1, 0.3}, {1, 0.7}}, 2.5, 1.0) == doctest::Approx(2.5));
  CHECK(ds_tilde_S({{0.4, 2.0}}, 3, 2.0) == doctest::Approx(1.2));
  CHECK(ds_tilde_S({{0, 0.5}, {1, 0.5}}, 2, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ds_tilde_S({{0, 0.5}, {1, 0.4}}, 2, 1.0), Error);
  CHECK_THROWS_AS(ds_tilde_S({{0, -0.5}, {1, 1.5}}, 2, 1.0), Error);
}

TEST_CASE("moment coefficients from successive minima") {
  const auto f = p1(range(10, 50));
  const auto fit = ek_from_minima_polynomial(f, range(10, 50), 1, 1, 1);
  CHECK(fit.coefficient == q(-1, 2));
  CHECK(fit.estimate == q(-1, 2));
  const auto fit2 = ek_from_minima_polynomial(f, range(10, 50), 2, 1, 1);
  CHECK(fit2.estimate == q(1, 3));
  CHECK(to_double(fit2.estimate) == doctest::Approx(moment(DHMeasure::uniform(-1, 0), 2)).epsilon(1e-14));

  GradedFiltration trivial;
  for (int m = 1; m <= 6; ++m) trivial.set_level(FiltrationLevel::from_values(m, RVector(static_cast<size_t>(m + 1), Rational(0))));
  CHECK(ek_from_minima_polynomial(trivial, range(1, 6), 1, 1, 1).estimate == 0);
  CHECK_THROWS_AS(ek_from_minima_polynomial(f, {10, 11}, 1, 1, 1), Error);
}

TEST_CASE("L policies") {
  CHECK(LPolicy::weight_twist().L() == 0.0);
  CHECK(LPolicy::supplied(-0.25).L() == -0.25);
  CHECK(LPolicy::special_valuation(2).L() == 2.0);
  CHECK_THROWS_AS(LPolicy::special_valuation(-1), Error);
  CHECK(std::string(to_string(LPolicy::Kind::weight_twist)) == "weight_twist");
}
