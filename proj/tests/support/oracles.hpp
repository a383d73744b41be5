#pragma once

// Reference computations used only by tests. Nothing here calls into the
// library's integration or optimization code.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "nadeg/rational.hpp"

namespace oracle {

inline double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-12, unsigned depth = 15) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, depth, tol);
}

// ∫ over the standard simplex {t_i ≥ 0, Σt ≤ 1} in R^n of f(t), by nested
// one-dimensional adaptive quadrature.
inline double standard_simplex(int n, const std::function<double(const std::vector<double>&)>& f) {
  std::vector<double> t(static_cast<size_t>(n));
  std::function<double(int, double)> level = [&](int i, double remaining) -> double {
    if (i == n) return f(t);
    return gk(
        [&, i](double x) {
          t[static_cast<size_t>(i)] = x;
          return level(i + 1, remaining - x);
        },
        0.0, remaining, 1e-12, 8);
  };
  return level(0, 1.0);
}

// ∫_s e^{-ℓ} dy for a simplex with jacobian n!·vol and vertex values ℓ_i.
inline double simplex_exp(double nfact_vol, const std::vector<double>& values) {
  const int n = static_cast<int>(values.size()) - 1;
  if (n == 0) return nfact_vol * std::exp(-values[0]);
  const double v0 = values[0];
  return nfact_vol * standard_simplex(n, [&](const std::vector<double>& t) {
           double l = v0;
           for (int i = 0; i < n; ++i) l += t[static_cast<size_t>(i)] * (values[static_cast<size_t>(i) + 1] - v0);
           return std::exp(-l);
         });
}

// Normalized B-spline with sorted knots t, by the Cox-de Boor recursion.
inline double bspline(const std::vector<double>& t, double x) {
  const size_t n = t.size() - 1;
  std::vector<double> m(n);
  for (size_t i = 0; i < n; ++i) m[i] = (x >= t[i] && x < t[i + 1] && t[i + 1] > t[i]) ? 1.0 / (t[i + 1] - t[i]) : 0.0;
  for (size_t k = 2; k <= n; ++k) {
    for (size_t i = 0; i + k <= n; ++i) {
      const double d = t[i + k] - t[i];
      m[i] = d > 0 ? ((x - t[i]) * m[i] + (t[i + k] - x) * m[i + 1]) / d * static_cast<double>(k) / static_cast<double>(k - 1) : 0.0;
    }
  }
  return m[0];
}

// Same integral as simplex_exp in one variable: ℓ pushes the normalized
// simplex measure forward to the B-spline with knots ℓ(v_i). Adaptive
// quadrature runs knot to knot after shifting the smallest value to 0.
inline double simplex_exp_1d(double nfact_vol, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double lo = values.front();
  for (double& v : values) v -= lo;
  const size_t n = values.size() - 1;
  double fact = 1, sum = 0;
  for (size_t i = 2; i <= n; ++i) fact *= static_cast<double>(i);
  if (n == 0 || values.back() == 0) return nfact_vol * std::exp(-lo) / fact;
  for (size_t i = 0; i < n; ++i) {
    if (values[i + 1] > values[i]) sum += gk([&](double x) { return std::exp(-x) * bspline(values, x); }, values[i], values[i + 1], 1e-13, 10);
  }
  return nfact_vol * std::exp(-lo) * sum / fact;
}

// Root of a monotone f on [lo, hi] with f(lo), f(hi) of opposite sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-15) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline double rel_err(double got, double want, double floor = 1.0) {
  return std::fabs(got - want) / std::max(floor, std::fabs(want));
}

// Exact volume of {y ∈ Q^3 : ⟨n_k, y⟩ ≤ o_k} by Simpson's rule on the slice
// area, which is quadratic between consecutive vertex heights.
struct Plane {
  nadeg::RVector normal;
  nadeg::Rational offset;
};

inline nadeg::Rational polygon_area(const std::vector<Plane>& planes, const nadeg::Rational& z) {
  using nadeg::Rational;
  struct Line {
    Rational a, b, c;  // a x + b y ≤ c
  };
  std::vector<Line> lines;
  for (const auto& p : planes) {
    if (p.normal[0] == 0 && p.normal[1] == 0) {
      if (p.normal[2] * z > p.offset) return 0;
      continue;
    }
    lines.push_back({p.normal[0], p.normal[1], p.offset - p.normal[2] * z});
  }
  std::vector<std::pair<Rational, Rational>> pts;
  for (size_t i = 0; i < lines.size(); ++i) {
    for (size_t j = i + 1; j < lines.size(); ++j) {
      const Rational det = lines[i].a * lines[j].b - lines[i].b * lines[j].a;
      if (det == 0) continue;
      const Rational x = (lines[i].c * lines[j].b - lines[i].b * lines[j].c) / det;
      const Rational y = (lines[i].a * lines[j].c - lines[i].c * lines[j].a) / det;
      bool ok = true;
      for (const auto& l : lines) ok = ok && l.a * x + l.b * y <= l.c;
      if (ok && std::find(pts.begin(), pts.end(), std::make_pair(x, y)) == pts.end()) pts.emplace_back(x, y);
    }
  }
  if (pts.size() < 3) return 0;
  double cx = 0, cy = 0;
  for (const auto& [x, y] : pts) {
    cx += nadeg::to_double(x);
    cy += nadeg::to_double(y);
  }
  cx /= pts.size();
  cy /= pts.size();
  std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
    return std::atan2(nadeg::to_double(p.second) - cy, nadeg::to_double(p.first) - cx) <
           std::atan2(nadeg::to_double(q.second) - cy, nadeg::to_double(q.first) - cx);
  });
  Rational twice = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    twice += p.first * q.second - q.first * p.second;
  }
  return abs(twice) / 2;
}

inline nadeg::Rational volume3(const std::vector<Plane>& planes, std::vector<nadeg::Rational> heights) {
  using nadeg::Rational;
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  Rational vol = 0;
  for (size_t i = 0; i + 1 < heights.size(); ++i) {
    const Rational& z0 = heights[i];
    const Rational& z1 = heights[i + 1];
    vol += (z1 - z0) / 6 * (polygon_area(planes, z0) + 4 * polygon_area(planes, (z0 + z1) / 2) + polygon_area(planes, z1));
  }
  return vol;
}

inline nadeg::Rational random_rational(std::mt19937_64& rng, int lo, int hi, int den = 8) {
  std::uniform_int_distribution<int> num(lo * den, hi * den);
  return nadeg::Rational(num(rng), den);
}

}  // namespace oracle
