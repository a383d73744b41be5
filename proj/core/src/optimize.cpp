#include "nadeg/optimize.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nadeg/error.hpp"
#include "nadeg/expint.hpp"

namespace nadeg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> unit(int r, int j) {
  std::vector<double> e(static_cast<size_t>(r), 0.0);
  e[static_cast<size_t>(j)] = 1.0;
  return e;
}

std::vector<double> as_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Weighted point cloud (one per degree) used by the finite-level objectives.
struct Cloud {
  std::vector<long double> pos;
  std::vector<Eigen::VectorXd> alpha;
  std::vector<long double> mass;
};

struct CloudStats {
  long double log_z = 0;  // log of normalized partition function
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

CloudStats cloud_stats(const Cloud& c, const Eigen::VectorXd& xi, bool second) {
  const size_t k = c.pos.size();
  const long r = xi.size();
  std::vector<long double> t(k);
  long double shift = std::numeric_limits<long double>::infinity();
  for (size_t i = 0; i < k; ++i) {
    t[i] = c.pos[i] + static_cast<long double>(c.alpha[i].dot(xi));
    shift = std::min(shift, t[i]);
  }
  long double z = 0;
  long double total = 0;
  std::vector<long double> w(k);
  for (size_t i = 0; i < k; ++i) {
    w[i] = c.mass[i] * std::exp(-(t[i] - shift));
    z += w[i];
    total += c.mass[i];
  }
  CloudStats s;
  s.log_z = std::log(z / total) - shift;
  s.mean = Eigen::VectorXd::Zero(r);
  for (size_t i = 0; i < k; ++i) s.mean += static_cast<double>(w[i] / z) * c.alpha[i];
  if (second) {
    s.cov = Eigen::MatrixXd::Zero(r, r);
    for (size_t i = 0; i < k; ++i) {
      Eigen::VectorXd d = c.alpha[i] - s.mean;
      s.cov += static_cast<double>(w[i] / z) * d * d.transpose();
    }
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------- soliton

OptResult soliton_vector(const RationalPolytope& delta, int r, const NewtonOptions& opts) {
  if (r < 1 || r > delta.dim()) throw Error(ErrorKind::DimensionMismatch, "projection rank out of range");
  if (!delta.is_full_dimensional()) throw Error(ErrorKind::DegeneratePolytope, "soliton vector needs a full-dimensional polytope");
  if (!delta.projected(r).contains_in_interior(RVector(static_cast<size_t>(r), Rational(0)))) {
    throw Error(ErrorKind::OriginNotInterior, "0 is not an interior point of the projected polytope P; the functional is not proper");
  }
  const auto g = PLConcaveFunction::affine_on(delta, AffineForm::zero(delta.dim()));
  const long double log_vol = std::log(to_long_double(volume(delta)));

  auto f = [&](const Eigen::VectorXd& xi) {
    return static_cast<double>(std::log(pl_integral(g, PLExponent{0, as_std(xi)}).value) - log_vol);
  };
  auto mean = [&](const Eigen::VectorXd& xi) {
    const PLExponent e{0, as_std(xi)};
    const long double z = pl_integral(g, e).value;
    Eigen::VectorXd m(r);
    for (int j = 0; j < r; ++j) m(j) = static_cast<double>(pl_integral(g, e, PLWeight{0, unit(r, j), 0}, 1).value / z);
    return m;
  };
  auto grad = [&](const Eigen::VectorXd& xi) -> Eigen::VectorXd { return -mean(xi); };
  auto hess = [&](const Eigen::VectorXd& xi) {
    const PLExponent e{0, as_std(xi)};
    const long double z = pl_integral(g, e).value;
    const Eigen::VectorXd m = mean(xi);
    auto var = [&](const std::vector<double>& eta) {
      long double c = 0;
      for (int j = 0; j < r; ++j) c -= eta[static_cast<size_t>(j)] * m(j);
      return static_cast<double>(pl_integral(g, e, PLWeight{0, eta, c}, 2).value / z);
    };
    Eigen::MatrixXd h(r, r);
    for (int i = 0; i < r; ++i) h(i, i) = var(unit(r, i));
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        std::vector<double> eta = unit(r, i);
        eta[static_cast<size_t>(j)] = 1.0;
        h(i, j) = h(j, i) = 0.5 * (var(eta) - h(i, i) - h(j, j));
      }
    }
    return h;
  };
  OptResult res = newton_minimize(f, grad, hess, Eigen::VectorXd::Zero(r), opts);
  if (!res.converged) {
    throw Error(ErrorKind::NonConvergence, "soliton Newton iteration stopped at gradient norm " + std::to_string(res.grad_norm));
  }
  return res;
}

// ---------------------------------------------------------------- rescaling

RescaleEval rescale_eval(double a_x, const DHMeasure& mu, double a) {
  const TiltedMoments t = tilted_moments(mu, a);
  return RescaleEval{a * a_x + t.log_partition, a_x - t.mean, t.variance};
}

OptResult rescale_opt(double a_x, const DHMeasure& mu, const NewtonOptions& opts) {
  if (!(a_x > 0)) throw Error(ErrorKind::InvalidInput, "log discrepancy A must be positive");
  const SupportInfo sup = support(mu);
  if (sup.lambda_min < -kConsistencyTol) {
    throw Error(ErrorKind::NegativeSupport, "rescaling needs a valuation measure supported in [0, inf), lambda_min = " +
                                                std::to_string(sup.lambda_min));
  }
  OptResult res;
  const RescaleEval at0 = rescale_eval(a_x, mu, 0.0);
  if (at0.df >= 0) {
    res.argmin = {0.0};
    res.value = 0.0;
    res.grad_norm = 0.0;
    res.hessian_min_eig = std::max(0.0, at0.d2f);
    res.converged = true;
    return res;
  }
  if (rescale_eval(a_x, mu, 1.0).d2f < kDiracVariance) {
    // f is affine with negative slope: no interior minimum
    res.argmin = {kInf};
    res.value = -kInf;
    res.grad_norm = std::fabs(at0.df);
    res.hessian_min_eig = 0.0;
    res.converged = false;
    return res;
  }
  if (a_x <= sup.lambda_min) {
    throw Error(ErrorKind::NonConvergence, "f'(a) < 0 for all a since A <= lambda_min; no finite minimizer");
  }
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (rescale_eval(a_x, mu, hi).df < 0) {
    lo = hi;
    hi *= 2;
    if (++doublings > 80) throw Error(ErrorKind::NonConvergence, "could not bracket the rescaling optimum");
  }
  double a = 0.5 * (lo + hi);
  RescaleEval ev = rescale_eval(a_x, mu, a);
  int it = 0;
  const int max_iter = std::max(opts.max_iter, 1) * 3;
  while (std::fabs(ev.df) > opts.tol && it < max_iter) {
    ++it;
    if (ev.df < 0) {
      lo = a;
    } else {
      hi = a;
    }
    double next = ev.d2f > 0 ? a - ev.df / ev.d2f : lo - 1;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == a) break;
    a = next;
    ev = rescale_eval(a_x, mu, a);
  }
  res.argmin = {a};
  res.value = ev.f;
  res.grad_norm = std::fabs(ev.df);
  res.hessian_min_eig = std::max(0.0, ev.d2f);
  res.iterations = it;
  res.converged = res.grad_norm <= opts.tol;
  if (!res.converged) {
    throw Error(ErrorKind::NonConvergence, "rescaling Newton stopped at |f'| = " + std::to_string(res.grad_norm));
  }
  return res;
}

// ---------------------------------------------------------------- twist minimizer

OptResult twist_opt(const GradedFiltration& f, const std::vector<int>& degrees, const LPolicy& l, int n,
                    std::optional<std::vector<double>> x0, const NewtonOptions& opts) {
  if (degrees.empty()) throw Error(ErrorKind::InsufficientDegrees, "twist minimization needs at least one degree");
  int r = -1;
  std::vector<Cloud> clouds;
  std::vector<RVector> points;
  for (int m : degrees) {
    const auto& lv = f.level(m);
    if (!lv.has_weights()) throw Error(ErrorKind::MissingTorusWeights, "level m=" + std::to_string(m) + " has no torus weights");
    if (r >= 0 && lv.torus_rank() != r) throw Error(ErrorKind::DimensionMismatch, "torus rank differs between degrees");
    r = lv.torus_rank();
    const DHMeasure nu = empirical_dh(f, m, n);
    Cloud c;
    for (const auto& at : nu.atoms()) {
      c.pos.push_back(to_long_double(at.pos));
      Eigen::VectorXd a(r);
      for (int j = 0; j < r; ++j) a(j) = to_double(at.weight[static_cast<size_t>(j)]);
      c.alpha.push_back(std::move(a));
      c.mass.push_back(to_long_double(at.mass));
      points.push_back(at.weight);
    }
    clouds.push_back(std::move(c));
  }
  const auto hull = RationalPolytope::from_vertices(r, points);
  if (!hull.contains_in_interior(RVector(static_cast<size_t>(r), Rational(0)))) {
    throw Error(ErrorKind::OriginNotInterior, "0 is not an interior point of the convex hull of the torus weights");
  }
  const double inv = 1.0 / static_cast<double>(clouds.size());
  const double lval = l.L();
  auto fn = [&](const Eigen::VectorXd& xi) {
    long double s = 0;
    for (const auto& c : clouds) s += cloud_stats(c, xi, false).log_z;
    return lval + static_cast<double>(s) * inv;
  };
  auto grad = [&](const Eigen::VectorXd& xi) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(r);
    for (const auto& c : clouds) g -= cloud_stats(c, xi, false).mean;
    return Eigen::VectorXd(g * inv);
  };
  auto hess = [&](const Eigen::VectorXd& xi) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(r, r);
    for (const auto& c : clouds) h += cloud_stats(c, xi, true).cov;
    return Eigen::MatrixXd(h * inv);
  };
  Eigen::VectorXd start = Eigen::VectorXd::Zero(r);
  if (x0) {
    if (static_cast<int>(x0->size()) != r) throw Error(ErrorKind::DimensionMismatch, "starting point rank differs from torus rank");
    for (int j = 0; j < r; ++j) start(j) = (*x0)[static_cast<size_t>(j)];
  }
  OptResult res = newton_minimize(fn, grad, hess, start, opts);
  if (!res.converged) {
    throw Error(ErrorKind::NonConvergence, "twist Newton iteration stopped at gradient norm " + std::to_string(res.grad_norm));
  }
  return res;
}

// ---------------------------------------------------------------- interpolation family

double interpolation_hhat(const PLConcaveFunction& g, const std::vector<double>& xi, double l_hat, double s) {
  std::vector<double> scaled = xi;
  for (auto& x : scaled) x *= (1.0 - s);
  const long double z = pl_integral(g, PLExponent{s, scaled}).value;
  return s * l_hat + static_cast<double>(std::log(z / to_long_double(volume(g.domain()))));
}

DerivativeCheck interpolation_derivative(const PLConcaveFunction& g, const std::vector<double>& xi, double l_hat, double h) {
  const PLExponent e{0, xi};
  std::vector<double> neg = xi;
  for (auto& x : neg) x = -x;
  const long double z = pl_integral(g, e).value;
  const long double w = pl_integral(g, e, PLWeight{1, neg, 0}, 1).value;
  DerivativeCheck d;
  d.analytic = l_hat - static_cast<double>(w / z);
  d.finite_difference = (-3 * interpolation_hhat(g, xi, l_hat, 0) + 4 * interpolation_hhat(g, xi, l_hat, h) -
                         interpolation_hhat(g, xi, l_hat, 2 * h)) /
                        (2 * h);
  return d;
}

namespace {

struct LevelAtoms {
  std::vector<long double> lambda;  // λ/m
  std::vector<long double> pair;    // ⟨α/m, ξ⟩
};

LevelAtoms level_atoms(const GradedFiltration& f, int m, const std::vector<double>& xi) {
  const auto& lv = f.level(m);
  if (!lv.has_weights()) throw Error(ErrorKind::MissingTorusWeights, "level m=" + std::to_string(m) + " has no torus weights");
  if (static_cast<int>(xi.size()) != lv.torus_rank()) throw Error(ErrorKind::DimensionMismatch, "xi rank differs from torus rank");
  LevelAtoms a;
  for (size_t j = 0; j < lv.values().size(); ++j) {
    a.lambda.push_back(to_long_double(lv.values()[j]) / m);
    long double p = 0;
    for (size_t i = 0; i < xi.size(); ++i) p += to_long_double(lv.weights()[j][i]) * xi[i];
    a.pair.push_back(p / m);
  }
  return a;
}

}  // namespace

double interpolation_hhat(const GradedFiltration& f, int m, const std::vector<double>& xi, double l_hat, double s) {
  const LevelAtoms a = level_atoms(f, m, xi);
  std::vector<long double> t(a.lambda.size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = s * a.lambda[i] + (1 - s) * a.pair[i];
  const long double shift = *std::min_element(t.begin(), t.end());
  long double z = 0;
  for (long double x : t) z += std::exp(-(x - shift));
  return s * l_hat + static_cast<double>(std::log(z / t.size()) - shift);
}

DerivativeCheck interpolation_derivative(const GradedFiltration& f, int m, const std::vector<double>& xi, double l_hat,
                                         double h) {
  const LevelAtoms a = level_atoms(f, m, xi);
  const long double shift = *std::min_element(a.pair.begin(), a.pair.end());
  long double z = 0;
  long double w = 0;
  for (size_t i = 0; i < a.pair.size(); ++i) {
    const long double e = std::exp(-(a.pair[i] - shift));
    z += e;
    w += (a.lambda[i] - a.pair[i]) * e;
  }
  DerivativeCheck d;
  d.analytic = l_hat - static_cast<double>(w / z);
  d.finite_difference = (-3 * interpolation_hhat(f, m, xi, l_hat, 0) + 4 * interpolation_hhat(f, m, xi, l_hat, h) -
                         interpolation_hhat(f, m, xi, l_hat, 2 * h)) /
                        (2 * h);
  return d;
}

// ---------------------------------------------------------------- cone family

bool ConvexScan::midpoint_convex(double tol) const {
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    const double t = (s[i] - s[i - 1]) / (s[i + 1] - s[i - 1]);
    if (values[i] > (1 - t) * values[i - 1] + t * values[i + 1] + tol) return false;
  }
  return true;
}

double cone_value(double a_x, const DHMeasure& mu, int n, double s) {
  if (!(a_x > 0)) throw Error(ErrorKind::InvalidInput, "cone family needs A > 0");
  if (n < 1) throw Error(ErrorKind::InvalidInput, "ambient dimension must be at least 1");
  if (!(s < 1)) throw Error(ErrorKind::InvalidInput, "s must be below 1");
  const SupportInfo sup = support(mu);
  for (double x : {sup.lambda_min, sup.lambda_max}) {
    if (!(s * x + (1 - s) * a_x > 0)) {
      throw Error(ErrorKind::DenominatorVanishes, "s*x + (1-s)*A <= 0 at x = " + std::to_string(x) + ", s = " + std::to_string(s));
    }
  }
  const int p = n + 1;
  auto phi = [&](double x) { return std::pow(a_x / (s * x + (1 - s) * a_x), p); };
  auto dphi = [&](double x) {
    const double d = s * x + (1 - s) * a_x;
    return -p * s * std::pow(a_x / d, p) / d;
  };
  return integrate(mu, phi, dphi) / mass(mu);
}

std::vector<double> default_s_grid() {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i) g.push_back(0.05 * i);
  return g;
}

ConvexScan cone_family(double a_x, const DHMeasure& mu, int n, const std::vector<double>& s_grid) {
  ConvexScan scan;
  for (double s : s_grid) {
    scan.s.push_back(s);
    scan.values.push_back(cone_value(a_x, mu, n, s));
  }
  scan.derivative_at_start = (n + 1) * (a_x - moment(mu, 1)) / a_x;
  return scan;
}

double vol_g_tau(double v_g, const std::function<double(double)>& volg, double tau, int n, double support_end,
                 const std::vector<double>& breakpoints) {
  if (!(tau > 0)) throw Error(ErrorKind::InvalidInput, "tau must be positive");
  if (n < 1) throw Error(ErrorKind::InvalidInput, "ambient dimension must be at least 1");
  if (!(support_end >= 0)) throw Error(ErrorKind::InvalidVolumeFunction, "support end must be nonnegative");
  std::vector<double> pts{0.0, support_end};
  for (double b : breakpoints) {
    if (b > 0 && b < support_end) pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // monotonicity on a sample grid
  std::vector<double> probe;
  for (int i = 0; i <= 256; ++i) probe.push_back(support_end * i / 256.0);
  probe.insert(probe.end(), pts.begin(), pts.end());
  std::sort(probe.begin(), probe.end());
  double prev = volg(0.0);
  if (prev > v_g * (1 + 1e-12) + 1e-300) throw Error(ErrorKind::InvalidVolumeFunction, "vol_g(F^(0)) exceeds V_g");
  for (double x : probe) {
    const double y = volg(x);
    if (!std::isfinite(y) || y < 0) throw Error(ErrorKind::InvalidVolumeFunction, "volume function must be finite and nonnegative");
    if (y > prev + 1e-12 * std::max(1.0, std::fabs(prev))) {
      throw Error(ErrorKind::InvalidVolumeFunction, "volume function increases near x = " + std::to_string(x));
    }
    prev = y;
  }
  const int q = n + 2;
  auto integrand = [&](double x) { return volg(x) / std::pow(x + tau, q); };
  double integral = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    integral += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, pts[i], pts[i + 1], 15, 1e-13);
  }
  return v_g / std::pow(tau, n + 1) - (n + 1) * integral;
}

}  // namespace nadeg
