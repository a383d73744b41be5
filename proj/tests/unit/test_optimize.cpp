#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "nadeg/error.hpp"
#include "nadeg/optimize.hpp"
#include "oracles.hpp"

using namespace nadeg;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

// ∫_lo^hi y e^{-ξy} dy, closed form
double first_moment(double lo, double hi, double xi) {
  if (xi == 0) return (hi * hi - lo * lo) / 2;
  auto prim = [xi](double y) { return -std::exp(-xi * y) * (y / xi + 1 / (xi * xi)); };
  return prim(hi) - prim(lo);
}

// A minus the tilted mean of uniform[0, T]
double rescale_slope(double a_x, double t, double a) {
  if (a == 0) return a_x - t / 2;
  return a_x - (1 / a - t * std::exp(-a * t) / -std::expm1(-a * t));
}

GradedFiltration weighted_level(int m, const std::vector<std::pair<Rational, RVector>>& data) {
  RVector vals;
  std::vector<RVector> w;
  for (const auto& [v, a] : data) {
    vals.push_back(v);
    w.push_back(a);
  }
  GradedFiltration f;
  f.set_level(FiltrationLevel::from_values(m, vals, w));
  return f;
}

}  // namespace

TEST_CASE("Newton on simple objectives") {
  const Eigen::Vector2d c(1.5, -2);
  auto f = [&](const Eigen::VectorXd& x) { return 0.5 * (x - c).squaredNorm(); };
  auto g = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x - c; };
  auto h = [](const Eigen::VectorXd&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Identity(2, 2); };
  const auto r = newton_minimize(f, g, h, Eigen::VectorXd::Zero(2));
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(std::fabs(r.argmin[0] - 1.5) < 1e-15);
  const auto at = newton_minimize(f, g, h, Eigen::VectorXd(c));
  CHECK(at.iterations == 0);
  CHECK(at.converged);

  // log(e^x + e^{-2x}), minimizer where e^x = 2e^{-2x}
  auto lf = [](const Eigen::VectorXd& x) { return std::log(std::exp(x(0)) + std::exp(-2 * x(0))); };
  auto lg = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double a = std::exp(x(0)), b = std::exp(-2 * x(0));
    return Eigen::VectorXd::Constant(1, (a - 2 * b) / (a + b));
  };
  auto lh = [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const double a = std::exp(x(0)), b = std::exp(-2 * x(0));
    return Eigen::MatrixXd::Constant(1, 1, (a + 4 * b) / (a + b) - std::pow((a - 2 * b) / (a + b), 2));
  };
  const auto lr = newton_minimize(lf, lg, lh, Eigen::VectorXd::Constant(1, 3.0));
  const double root = oracle::bisect([&](double x) { return lg(Eigen::VectorXd::Constant(1, x))(0); }, -5, 5);
  CHECK(std::fabs(lr.argmin[0] - root) < 1e-10);
  CHECK(std::fabs(root - std::log(2.0) / 3) < 1e-14);

  // singular Hessian falls back to gradient steps
  auto sh = [](const Eigen::VectorXd&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Zero(2, 2); };
  const auto sr = newton_minimize(f, g, sh, Eigen::VectorXd::Zero(2));
  CHECK(sr.converged);
}

TEST_CASE("soliton vector on intervals") {
  const auto sym = soliton_vector(RationalPolytope::interval(-1, 1), 1);
  CHECK(sym.converged);
  CHECK(std::fabs(sym.argmin[0]) < 1e-12);
  CHECK(std::fabs(sym.value) < 1e-14);

  const auto r = soliton_vector(RationalPolytope::interval(-1, 2), 1);
  const double root = oracle::bisect([](double xi) { return -first_moment(-1, 2, xi); }, 0, 5);
  CHECK(r.argmin[0] > 0);
  CHECK(std::fabs(r.argmin[0] - root) < 1e-10);
  CHECK(std::fabs(root - 0.716375266635687514) < 1e-12);
  CHECK(r.grad_norm <= 1e-10);
  CHECK(r.hessian_min_eig > 0);
  CHECK_THROWS_AS(soliton_vector(RationalPolytope::interval(0, 2), 1), Error);
}

TEST_CASE("soliton vector symmetry and scaling") {
  const auto hex = RationalPolytope::from_vertices(2, {{2, 0}, {1, 2}, {-1, 2}, {-2, 0}, {-1, -2}, {1, -2}});
  const auto h = soliton_vector(hex, 2);
  CHECK(std::hypot(h.argmin[0], h.argmin[1]) <= 1e-10);

  const auto tri = RationalPolytope::from_vertices(2, {{-1, -1}, {3, -1}, {-1, 2}});
  const auto base = soliton_vector(tri, 2);
  CHECK(base.grad_norm <= 1e-10);
  const auto big = soliton_vector(tri.scaled(3), 2);
  CHECK(std::fabs(big.argmin[0] - base.argmin[0] / 3) < 1e-9);
  CHECK(std::fabs(big.argmin[1] - base.argmin[1] / 3) < 1e-9);

  // translating in the unprojected direction leaves ξ* alone
  const auto prism = RationalPolytope::from_vertices(2, {{-1, 0}, {2, 0}, {-1, 1}, {2, 3}});
  const auto a = soliton_vector(prism, 1);
  const auto b = soliton_vector(prism.translated({0, 5}), 1);
  CHECK(std::fabs(a.argmin[0] - b.argmin[0]) < 1e-12);
}

TEST_CASE("rescaling optimum") {
  const auto mu = DHMeasure::uniform(0, 4);
  const auto zero = rescale_opt(3, mu);
  CHECK(zero.argmin[0] == 0.0);
  CHECK(zero.value == 0.0);
  CHECK(zero.converged);

  const auto r = rescale_opt(1, mu);
  const double root = oracle::bisect([](double a) { return rescale_slope(1, 4, a); }, 1e-6, 10);
  CHECK(std::fabs(r.argmin[0] - root) < 1e-8);
  CHECK(std::fabs(root - 0.898377992361856521) < 1e-12);
  CHECK(r.value < 0);
  CHECK(std::fabs(r.value - -0.408638820402771158) < 1e-10);
  for (int i = 0; i < 50; ++i) {
    const double a = 0.08 * i;
    const auto e = rescale_eval(1, mu, a);
    CHECK(e.f >= r.value - 1e-14);
    CHECK(e.d2f >= 0);
    CHECK(std::fabs(e.df - rescale_slope(1, 4, a)) < 1e-11);
  }

  const auto dirac = rescale_opt(1, DHMeasure::dirac(3));
  CHECK_FALSE(dirac.converged);
  CHECK(std::isinf(dirac.argmin[0]));
  CHECK(dirac.value == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(rescale_opt(1, DHMeasure::uniform(-1, 1)), Error);
}

TEST_CASE("twist minimizer") {
  const auto trivial = weighted_level(2, {{0, {1}}, {0, {-1}}, {0, {0}}});
  const auto t = twist_opt(trivial, {2}, LPolicy::weight_twist(), 1);
  CHECK(std::fabs(t.argmin[0]) < 1e-12);

  // λ_i = ⟨α_i, ζ⟩ is undone by ξ = -ζ
  const RVector zeta{q(1, 2), q(-1, 3)};
  std::vector<std::pair<Rational, RVector>> data;
  for (const RVector& a : std::vector<RVector>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}}) data.push_back({dot(a, zeta), a});
  const auto f = weighted_level(2, data);
  const auto r = twist_opt(f, {2}, LPolicy::supplied(0), 2);
  CHECK(std::fabs(r.argmin[0] + 0.5) < 1e-10);
  CHECK(std::fabs(r.argmin[1] - 1.0 / 3) < 1e-10);
  CHECK(std::fabs(r.value) < 1e-12);

  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::pair<Rational, RVector>> rnd;
    for (const RVector& a : std::vector<RVector>{{2, 0}, {-1, 1}, {-1, -2}, {0, 1}, {1, -1}}) rnd.push_back({d(rng), a});
    const auto g = weighted_level(3, rnd);
    const auto a = twist_opt(g, {3}, LPolicy::supplied(0), 2, std::vector<double>{1.0, -2.0});
    const auto b = twist_opt(g, {3}, LPolicy::supplied(0), 2, std::vector<double>{-3.0, 0.5});
    CHECK(std::hypot(a.argmin[0] - b.argmin[0], a.argmin[1] - b.argmin[1]) < 1e-8);
  }

  GradedFiltration plain;
  plain.set_level(FiltrationLevel::from_values(1, {0, -1}));
  CHECK_THROWS_AS(twist_opt(plain, {1}, LPolicy::weight_twist(), 1), Error);
  CHECK_THROWS_AS(twist_opt(weighted_level(1, {{0, {1}}, {0, {2}}}), {1}, LPolicy::weight_twist(), 1), Error);
}

TEST_CASE("interpolation family") {
  const auto dom = RationalPolytope::interval(-1, 1);
  const auto wt = PLConcaveFunction::affine_on(dom, AffineForm{{1}, 0});
  const auto flat = interpolation_derivative(wt, {1.0}, 0);
  CHECK(std::fabs(flat.analytic) < 1e-14);

  const auto g = PLConcaveFunction::affine_on(dom, AffineForm{{2}, 0});
  const auto d = interpolation_derivative(g, {1.0}, 0);
  const double want = -oracle::gk([](double y) { return y * std::exp(-y); }, -1, 1) /
                      oracle::gk([](double y) { return std::exp(-y); }, -1, 1);
  CHECK(std::fabs(d.analytic - want) < 1e-13);
  CHECK(std::fabs(d.finite_difference - d.analytic) < 1e-5);
  const double central = oracle::central_difference([&](double s) { return interpolation_hhat(g, {1.0}, 0, s); }, 0);
  CHECK(oracle::rel_err(central, d.analytic) < 1e-5);

  const auto lv = weighted_level(2, {{1, {1}}, {-2, {-1}}, {0, {0}}});
  const auto fd = interpolation_derivative(lv, 2, {0.7}, 0.2);
  CHECK(std::fabs(fd.finite_difference - fd.analytic) < 1e-5);
}

TEST_CASE("cone family") {
  const auto dirac = cone_family(2, DHMeasure::dirac(2), 2);
  for (double v : dirac.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(*dirac.derivative_at_start == doctest::Approx(0.0));

  const auto mu = DHMeasure::uniform(0, 4);
  const auto scan = cone_family(1, mu, 1, {0.0, 0.05, 0.1, 0.15, 0.2});
  CHECK(*scan.derivative_at_start == doctest::Approx(-2.0).epsilon(1e-13));
  const double fd = oracle::central_difference([&](double s) { return cone_value(1, mu, 1, s); }, 0);
  CHECK(oracle::rel_err(fd, -2.0) < 1e-5);
  CHECK(scan.midpoint_convex());
  CHECK(cone_value(1, mu, 1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  // s x + (1 - s) A vanishes inside the support
  CHECK_THROWS_AS(cone_value(1, DHMeasure::uniform(-3, 1), 1, 0.5), Error);
}

TEST_CASE("g-volume of the cone valuation") {
  CHECK(vol_g_tau(1, [](double) { return 0.0; }, 2, 1, 0) == doctest::Approx(0.25));
  const double v = vol_g_tau(1, [](double x) { return x <= 1 ? 1.0 : 0.0; }, 1, 1, 1, {1.0});
  CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.1, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = u(rng), tau = u(rng);
    CHECK(vol_g_tau(1, [t](double x) { return std::max(0.0, 1 - x / t); }, tau, 2, t) > 0);
  }
  CHECK_THROWS_AS(vol_g_tau(1, [](double x) { return x; }, 1, 1, 1), Error);
}
