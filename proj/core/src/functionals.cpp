#include "nadeg/functionals.hpp"

#include <cmath>

#include "nadeg/error.hpp"
#include "nadeg/expint.hpp"
#include "nadeg/linalg.hpp"

namespace nadeg {

LPolicy LPolicy::special_valuation(double a) {
  if (!(a >= 0)) throw Error(ErrorKind::InvalidInput, "log discrepancy A(v) must be nonnegative");
  return {Kind::special_valuation, a};
}

const char* to_string(LPolicy::Kind k) {
  switch (k) {
    case LPolicy::Kind::supplied: return "supplied";
    case LPolicy::Kind::weight_twist: return "weight_twist";
    case LPolicy::Kind::special_valuation: return "special_valuation";
  }
  return "unknown";
}

double tilde_S(const DHMeasure& mu) { return -log_exp_moment(mu, 1.0); }

NAReport na_report(const DHMeasure& mu, const LPolicy& l, const std::vector<double>& a_list, double tol) {
  NAReport r;
  r.tol = tol;
  r.V = mass(mu);
  for (int k = 0; k <= 4; ++k) r.E_k[static_cast<size_t>(k)] = moment(mu, k);
  r.E = r.E_k[1];
  r.S_tilde = tilde_S(mu);
  r.L = l.L();
  r.H = r.L - r.S_tilde;
  r.D = r.L - r.E;
  for (double a : a_list) r.Q.emplace_back(a, exp_moment(mu, a));
  r.normalized = std::fabs(r.L) <= tol;
  r.s_tilde_le_e = r.S_tilde <= r.E + tol;
  return r;
}

double tilde_beta(double a, const DHMeasure& mu) { return a - tilde_S(mu); }

double beta_g(double a, const DHMeasure& mu_g, double tol) {
  const SupportInfo s = support(mu_g);
  if (s.lambda_min < -tol) {
    throw Error(ErrorKind::NegativeSupport, "beta_g needs a measure supported in [0, inf), lambda_min = " + std::to_string(s.lambda_min));
  }
  return a - moment(mu_g, 1);
}

namespace {

PLConcaveFunction flat(const RationalPolytope& delta) {
  return PLConcaveFunction::affine_on(delta, AffineForm::zero(delta.dim()));
}

}  // namespace

double h_weight(const RationalPolytope& delta, const std::vector<double>& xi) {
  const auto g = flat(delta);
  const long double z = pl_integral(g, PLExponent{0, xi}).value;
  return static_cast<double>(std::log(z / to_long_double(volume(delta))));
}

double fut(const RationalPolytope& delta, const std::vector<double>& xi, const std::vector<double>& eta) {
  const auto g = flat(delta);
  const PLExponent e{0, xi};
  const long double z = pl_integral(g, e).value;
  const long double w = pl_integral(g, e, PLWeight{0, eta, 0}, 1).value;
  return static_cast<double>(-w / z);
}

double ds_tilde_S(const std::vector<std::pair<double, double>>& components, double a, double q, double tol) {
  if (components.empty()) throw Error(ErrorKind::InconsistentDecomposition, "no components");
  long double total = 0;
  long double weighted = 0;
  for (const auto& [e, qi] : components) {
    if (!(qi > 0)) throw Error(ErrorKind::InconsistentDecomposition, "component Q_i must be positive");
    total += qi;
    weighted += static_cast<long double>(e) * qi;
  }
  if (std::fabs(static_cast<double>(total) - q) > tol * std::max(1.0, std::fabs(q))) {
    throw Error(ErrorKind::InconsistentDecomposition, "components sum to " + std::to_string(static_cast<double>(total)) +
                                                          " but Q = " + std::to_string(q));
  }
  return static_cast<double>(a * weighted / q);
}

EkFit ek_from_minima_polynomial(const GradedFiltration& f, const std::vector<int>& degrees, int k, int n, const Rational& v) {
  if (k < 0 || k > 4) throw Error(ErrorKind::UnsupportedOrder, "E_k fit needs 0 <= k <= 4");
  if (n < 1) throw Error(ErrorKind::InvalidInput, "ambient dimension must be at least 1");
  if (!(v > 0)) throw Error(ErrorKind::InvalidInput, "volume must be positive");
  const int d = n + k;
  const size_t need = static_cast<size_t>(std::max(3, d + 1));
  if (degrees.size() < need) {
    throw Error(ErrorKind::InsufficientDegrees, "fit of degree " + std::to_string(d) + " needs " + std::to_string(need) +
                                                    " degrees, got " + std::to_string(degrees.size()));
  }
  // normal equations (X^T X) c = X^T y over Q
  RMatrix xtx(static_cast<size_t>(d + 1), RVector(static_cast<size_t>(d + 1), Rational(0)));
  RVector xty(static_cast<size_t>(d + 1), Rational(0));
  for (int m : degrees) {
    Rational y = 0;
    for (const auto& lam : f.level(m).values()) {
      Rational p = 1;
      for (int i = 0; i < k; ++i) p *= lam;
      y += p;
    }
    RVector pw(static_cast<size_t>(d + 1));
    pw[0] = 1;
    for (int i = 1; i <= d; ++i) pw[static_cast<size_t>(i)] = pw[static_cast<size_t>(i - 1)] * m;
    for (int i = 0; i <= d; ++i) {
      xty[static_cast<size_t>(i)] += pw[static_cast<size_t>(i)] * y;
      for (int j = 0; j <= d; ++j) xtx[static_cast<size_t>(i)][static_cast<size_t>(j)] += pw[static_cast<size_t>(i)] * pw[static_cast<size_t>(j)];
    }
  }
  auto inv = linalg::inverse(xtx);
  if (!inv) throw Error(ErrorKind::InsufficientDegrees, "degrees do not determine the fit (repeated degrees?)");
  Rational c = 0;
  for (int j = 0; j <= d; ++j) c += (*inv)[static_cast<size_t>(d)][static_cast<size_t>(j)] * xty[static_cast<size_t>(j)];
  Rational nf = 1;
  for (int i = 2; i <= n; ++i) nf *= i;
  return EkFit{c, c * nf / v};
}

}  // namespace nadeg
