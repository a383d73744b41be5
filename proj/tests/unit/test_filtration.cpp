#include "doctest.h"

#include <cmath>
#include <random>

#include "nadeg/error.hpp"
#include "nadeg/filtration.hpp"
#include "nadeg/linalg.hpp"
#include "oracles.hpp"

using namespace nadeg;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

GradedFiltration p1(int max_m) {
  GradedFiltration f("p1");
  for (int m = 1; m <= max_m; ++m) {
    RVector v;
    for (int i = 0; i <= m; ++i) v.push_back(-i);
    f.set_level(FiltrationLevel::from_values(m, v));
  }
  return f;
}

GradedFiltration single(FiltrationLevel lv) {
  GradedFiltration f;
  f.set_level(std::move(lv));
  return f;
}

RMatrix random_invertible(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> d(-3, 3);
  for (;;) {
    RMatrix m(static_cast<size_t>(n), RVector(static_cast<size_t>(n)));
    for (auto& row : m) {
      for (auto& x : row) x = d(rng);
    }
    if (linalg::rank(m) == n) return m;
  }
}

RVector random_values(std::mt19937_64& rng, int n, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> d(lo, hi);
  RVector v;
  for (int i = 0; i < n; ++i) v.push_back(d(rng));
  return v;
}

RVector sorted_desc(RVector v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// dim F^λ for every jump value, straight from the definition.
bool adapted_to(const RMatrix& basis, const std::vector<Rational>& vals, const FiltrationLevel& lv) {
  for (const auto& step : lv.flags()) {
    RMatrix sub;
    for (size_t k = 0; k < basis.size(); ++k) {
      if (vals[k] >= step.value) sub.push_back(basis[k]);
    }
    if (linalg::rank(sub) != static_cast<int>(step.rows.size())) return false;
    for (const auto& v : sub) {
      if (!linalg::in_row_space(step.rows, v)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("successive minima of the projective line") {
  const auto f = p1(50);
  CHECK(successive_minima(f.level(2)) == RVector{0, -1, -2});
  for (int m = 1; m <= 50; ++m) {
    Rational sum = 0;
    for (const auto& x : successive_minima(f.level(m))) sum += x;
    CHECK(sum == Rational(-(m * m + m), 2));
  }
  const auto trivial = FiltrationLevel::from_values(3, RVector(4, Rational(0)));
  CHECK(successive_minima(trivial) == RVector(4, Rational(0)));
}

TEST_CASE("successive minima from flags") {
  const auto lv = FiltrationLevel::from_flags(1, 3, {{2, {{1, 1, 0}}}, {0, {{1, 1, 0}, {0, 0, 1}}}, {-1, linalg::identity(3)}});
  CHECK(successive_minima(lv) == RVector{2, 0, -1});
  CHECK(lv.value_of({1, 1, 0}) == 2);
  CHECK(lv.value_of({1, 1, 1}) == 0);
  CHECK(lv.value_of({1, 0, 0}) == -1);
  CHECK_THROWS_AS(FiltrationLevel::from_flags(1, 2, {{1, {{1, 0}}}, {0, {{0, 1}}}}), Error);
  CHECK_THROWS_AS(FiltrationLevel::from_flags(1, 2, {{0, {{1, 0}}}, {1, linalg::identity(2)}}), Error);
}

TEST_CASE("rescale and shift") {
  const auto f = p1(3);
  const auto same = rescale_shift(f, 1, 0);
  for (int m : f.degrees()) CHECK(same.level(m).values() == f.level(m).values());
  CHECK(sorted_desc(rescale_shift(f, 2, 1).level(1).values()) == RVector{1, -1});
  const auto back = rescale_shift(rescale_shift(f, q(3, 7), q(-5, 2)), q(7, 3), q(5, 2) * q(7, 3));
  for (int m : f.degrees()) CHECK(back.level(m).values() == f.level(m).values());
  CHECK_THROWS_AS(rescale_shift(f, 0, 1), Error);
  CHECK_THROWS_AS(rescale_shift(f, -1, 1), Error);
}

TEST_CASE("twist") {
  const auto f = single(FiltrationLevel::from_values(1, {1}, {{2}}));
  CHECK(twist(f, {q(1, 2)}).level(1).values() == RVector{2});
  CHECK(twist(f, {0}).level(1).values() == f.level(1).values());
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4;
    std::vector<RVector> w;
    for (int i = 0; i < n; ++i) w.push_back(random_values(rng, 2, -2, 2));
    const auto g = single(FiltrationLevel::from_basis(2, random_invertible(rng, n), random_values(rng, n), w));
    const RVector xi{oracle::random_rational(rng, -2, 2), oracle::random_rational(rng, -2, 2)};
    const auto back = twist(twist(g, xi), RVector{-xi[0], -xi[1]});
    CHECK(back.level(2).values() == g.level(2).values());
  }
  CHECK_THROWS_AS(twist(p1(2), {1}), Error);
}

TEST_CASE("empirical measures") {
  const auto f = p1(200);
  const auto nu = empirical_dh(f, 4, 1);
  REQUIRE(nu.atoms().size() == 5);
  RVector pos;
  for (const auto& a : nu.atoms()) {
    pos.push_back(a.pos);
    CHECK(a.mass == q(1, 4));
  }
  CHECK(sorted_desc(pos) == RVector{0, q(-1, 4), q(-1, 2), q(-3, 4), -1});
  CHECK(mass(empirical_dh(f, 200, 1)) == doctest::Approx(201.0 / 200.0).epsilon(1e-15));
  const auto trivial = single(FiltrationLevel::from_values(3, RVector(4, Rational(0))));
  const auto flat = empirical_dh(trivial, 3, 1);
  for (const auto& a : flat.atoms()) CHECK(a.pos == 0);
  CHECK_THROWS_AS(empirical_dh(f, 201, 1), Error);
}

TEST_CASE("twist and rescale act on empirical atoms") {
  const auto f = single(FiltrationLevel::from_values(3, {2, 0, -1}, {{1}, {-2}, {0}}));
  const RVector xi{q(3, 2)};
  const auto a = empirical_dh(f, 3, 1);
  const auto b = empirical_dh(twist(f, xi), 3, 1);
  RVector want, got;
  for (size_t i = 0; i < a.atoms().size(); ++i) {
    want.push_back(a.atoms()[i].pos + a.atoms()[i].weight[0] * xi[0]);
    got.push_back(b.atoms()[i].pos);
    CHECK(a.atoms()[i].weight[0] * 3 == f.level(3).weights()[i][0]);
  }
  CHECK(sorted_desc(want) == sorted_desc(got));
  const auto c = empirical_dh(rescale_shift(f, 2, q(1, 3)), 3, 1);
  for (size_t i = 0; i < a.atoms().size(); ++i) CHECK(c.atoms()[i].pos == 2 * a.atoms()[i].pos + q(1, 3));
}

TEST_CASE("common adapted basis") {
  const auto lv0 = FiltrationLevel::from_values(1, {1, 0});
  const auto lv1 = FiltrationLevel::from_basis(1, {{1, 1}, {1, 0}}, {1, 0});
  const auto cb = common_adapted_basis(lv0, lv1);
  CHECK(linalg::rank(cb.basis) == 2);
  RVector a, b;
  for (const auto& [x, y] : cb.values) {
    a.push_back(x);
    b.push_back(y);
  }
  CHECK(sorted_desc(a) == RVector{1, 0});
  CHECK(sorted_desc(b) == RVector{1, 0});
  CHECK(adapted_to(cb.basis, a, lv0));
  CHECK(adapted_to(cb.basis, b, lv1));

  const auto self = common_adapted_basis(lv1, lv1);
  for (const auto& [x, y] : self.values) CHECK(x == y);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6;
    const auto f0 = FiltrationLevel::from_basis(1, random_invertible(rng, n), random_values(rng, n, -2, 2));
    const auto f1 = FiltrationLevel::from_basis(1, random_invertible(rng, n), random_values(rng, n, -2, 2));
    const auto r = common_adapted_basis(f0, f1);
    RVector v0, v1;
    for (const auto& [x, y] : r.values) {
      v0.push_back(x);
      v1.push_back(y);
    }
    CHECK(sorted_desc(v0) == successive_minima(f0));
    CHECK(sorted_desc(v1) == successive_minima(f1));
    CHECK(adapted_to(r.basis, v0, f0));
    CHECK(adapted_to(r.basis, v1, f1));
  }
  CHECK_THROWS_AS(common_adapted_basis(lv0, FiltrationLevel::from_values(1, {0, 0, 0})), Error);
}

TEST_CASE("relative minima and distances") {
  const auto f = p1(4);
  for (const auto& x : relative_minima(f, f, 3)) CHECK(x == 0);
  const auto a = single(FiltrationLevel::from_values(1, {0, 1}));
  const auto b = single(FiltrationLevel::from_values(1, {0, 3}));
  CHECK(relative_minima(a, b, 1) == RVector{0, 2});
  CHECK(d_p_level(a, b, 1, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d_p_level(a, a, 1, 2) == 0.0);
  CHECK_THROWS_AS(d_p_level(a, b, 1, 0.5), Error);
  const auto shifted = rescale_shift(f, 1, q(2, 3));
  for (const auto& x : relative_minima(f, shifted, 4)) CHECK(x == q(8, 3));
  CHECK(d2_squared_level(f, shifted, 4) == q(4, 9));
}

TEST_CASE("d2 triangle inequality on random triples") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<GradedFiltration> fs;
    for (int k = 0; k < 3; ++k) {
      fs.push_back(single(FiltrationLevel::from_basis(2, random_invertible(rng, n), random_values(rng, n))));
    }
    const double ab = d_p_level(fs[0], fs[1], 2, 2);
    const double bc = d_p_level(fs[1], fs[2], 2, 2);
    const double ac = d_p_level(fs[0], fs[2], 2, 2);
    CHECK(ac <= ab + bc + 1e-12);
    CHECK(d2_squared_level(fs[0], fs[1], 2) == d2_squared_level(fs[1], fs[0], 2));
  }
}

TEST_CASE("d_p sequence extrapolates in 1/m") {
  const auto f = p1(20);
  const auto g = rescale_shift(f, 1, q(1, 2));
  const auto s = d_p_sequence(f, g, {5, 10, 20}, 2);
  CHECK(s.values.size() == 3);
  for (double v : s.values) CHECK(v == doctest::Approx(0.5));
  CHECK(s.extrapolated == doctest::Approx(0.5));
  CHECK_THROWS_AS(d_p_sequence(f, g, {}, 2), Error);
}

TEST_CASE("Q_m and its basis form") {
  const auto trivial = single(FiltrationLevel::from_values(2, RVector(3, Rational(0))));
  CHECK(q_m(trivial, 2) == 1.0);
  CHECK(psi_m(trivial, 2) == 0.0);
  const auto f = p1(200);
  CHECK(q_m(f, 1) == doctest::Approx((1 + std::exp(1.0)) / 2).epsilon(1e-15));
  CHECK(std::fabs(q_m(f, 200) - (std::exp(1.0) - 1)) < 1e-2);
  CHECK(q_of_basis(f, 1, linalg::identity(2)) == doctest::Approx(q_m(f, 1)).epsilon(1e-15));
  CHECK(q_of_basis(f, 1, {{1, 1}, {0, 1}}) >= q_m(f, 1));
  CHECK_THROWS_AS(q_of_basis(f, 1, {{1, 1}, {2, 2}}), Error);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 4;
    const auto g = single(FiltrationLevel::from_basis(3, random_invertible(rng, n), random_values(rng, n)));
    const double qm = q_m(g, 3);
    for (int k = 0; k < 40; ++k) CHECK(q_of_basis(g, 3, random_invertible(rng, n)) >= qm - 1e-12);
    CHECK(q_of_basis(g, 3, g.level(3).basis()) == doctest::Approx(qm).epsilon(1e-15));
  }
}

TEST_CASE("Psi is monotone under inclusion") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const auto basis = random_invertible(rng, n);
    const RVector lo = random_values(rng, n);
    RVector hi = lo;
    hi[static_cast<size_t>(trial % n)] += 1;
    const auto f = single(FiltrationLevel::from_basis(2, basis, lo));
    const auto g = single(FiltrationLevel::from_basis(2, basis, hi));
    CHECK(psi_m(f, 2) < psi_m(g, 2));
    CHECK(psi_m(f, 2) <= psi_m(f, 2));
  }
}

TEST_CASE("superadditivity warnings") {
  CHECK(superadditivity_warnings(p1(6)).empty());
  GradedFiltration bad;
  bad.set_level(FiltrationLevel::from_values(1, {1, 0}));
  bad.set_level(FiltrationLevel::from_values(2, {1, 0, 0}));
  CHECK(superadditivity_warnings(bad).size() == 1);
}

TEST_CASE("monomial model") {
  const MonomialModel model(3);
  CHECK(model.dimension(2) == 6);
  CHECK(model.monomials(2).front() == std::vector<int>{2, 0, 0});
  CHECK(model.monomials(2).back() == std::vector<int>{0, 0, 2});
  const auto w = weight_filtration(model, {1, 0, 2}, 2);
  CHECK(successive_minima(w) == RVector{4, 3, 2, 2, 1, 0});
}

TEST_CASE("initial-term degeneration") {
  const MonomialModel model(2);
  const std::vector<long> w{1, 0};

  SUBCASE("identity degeneration") {
    GradedFiltration f0;
    f0.set_level(weight_filtration(model, w, 3));
    const auto d = initial_term_degeneration(model, w, f0, 3);
    CHECK(d.level(3).values() == f0.level(3).values());
  }

  SUBCASE("the x + y example") {
    GradedFiltration f1;
    f1.set_level(FiltrationLevel::from_flags(1, 2, {{1, {{1, 1}}}, {0, linalg::identity(2)}}));
    const auto d = initial_term_degeneration(model, w, f1, 1);
    CHECK(d.label() == "initial_term");
    CHECK(d.level(1).value_of({0, 1}) == 1);
    CHECK(d.level(1).value_of({1, 0}) == 0);
    GradedFiltration f0;
    f0.set_level(weight_filtration(model, w, 1));
    CHECK(sorted_desc(twist(d, {-1}).level(1).values()) == sorted_desc(relative_minima(f0, f1, 1)));
  }

  SUBCASE("non-integer weights are rejected") {
    GradedFiltration f1;
    f1.set_level(FiltrationLevel::from_values(1, {0, 0}));
    CHECK_THROWS_AS(initial_term_degeneration(model, {1}, f1, 1), Error);
  }
}
