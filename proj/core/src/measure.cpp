#include "nadeg/measure.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "nadeg/error.hpp"

namespace nadeg {

namespace {

long double nfact(int n) {
  long double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Distinct vertex values of G, ascending: between consecutive ones the
// superlevel volume is a polynomial in x.
std::vector<double> breakpoints(const PLConcaveFunction& g) {
  std::vector<double> out;
  for (const auto& c : g.cells()) {
    for (const auto& v : c.simplex.vertices()) out.push_back(to_double(c.affine(v)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double superlevel(const DHMeasure& mu, double x) {
  return superlevel_gvolume(mu.transform(), exact_rational(x), mu.xi());
}

// Integrands here are polynomial (ξ = 0) or smooth between breakpoints, so a
// shallow recursion suffices; deep recursion only chases roundoff.
double gk(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 4, 1e-12);
}

}  // namespace

DHMeasure DHMeasure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw Error(ErrorKind::InvalidInput, "atomic measure needs at least one atom");
  size_t r = atoms.front().weight.size();
  for (const auto& a : atoms) {
    if (!(a.mass > 0)) throw Error(ErrorKind::InvalidInput, "atom masses must be positive");
    if (a.weight.size() != r) throw Error(ErrorKind::DimensionMismatch, "atoms carry torus weights of different ranks");
  }
  DHMeasure mu;
  mu.atoms_ = std::move(atoms);
  return mu;
}

DHMeasure DHMeasure::dirac(const Rational& at, const Rational& m) { return atomic({Atom{at, m, {}}}); }

DHMeasure DHMeasure::pushforward(PLConcaveFunction g, std::vector<double> xi) {
  if (static_cast<int>(xi.size()) > g.dim()) throw Error(ErrorKind::DimensionMismatch, "weight vector longer than the dimension of the domain");
  for (double x : xi) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "non-finite weight vector");
  }
  DHMeasure mu;
  mu.g_ = std::move(g);
  mu.xi_ = std::move(xi);
  return mu;
}

DHMeasure DHMeasure::uniform(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw Error(ErrorKind::DegeneratePolytope, "uniform measure needs lo < hi");
  return pushforward(PLConcaveFunction::affine_on(RationalPolytope::interval(lo, hi), AffineForm::coordinate(1, 0)));
}

const PLConcaveFunction& DHMeasure::transform() const {
  if (!g_) throw Error(ErrorKind::InvalidInput, "atomic measure has no concave transform");
  return *g_;
}

double mass(const DHMeasure& mu) {
  if (mu.is_atomic()) {
    Rational total = 0;
    for (const auto& a : mu.atoms()) total += a.mass;
    return to_double(total);
  }
  const auto& g = mu.transform();
  return static_cast<double>(nfact(g.dim()) * pl_integral(g, PLExponent{0, mu.xi()}).value);
}

double moment(const DHMeasure& mu, int k) {
  if (k < 0 || k > 4) throw Error(ErrorKind::UnsupportedOrder, "moment order " + std::to_string(k) + " outside 0..4");
  if (k == 0) return 1.0;
  if (mu.is_atomic()) {
    long double num = 0;
    long double den = 0;
    for (const auto& a : mu.atoms()) {
      const long double m = to_long_double(a.mass);
      num += m * std::pow(to_long_double(a.pos), k);
      den += m;
    }
    return static_cast<double>(num / den);
  }
  const auto& g = mu.transform();
  const long double z = pl_integral(g, PLExponent{0, mu.xi()}).value;
  const long double w = pl_integral(g, PLExponent{0, mu.xi()}, PLWeight{1, {}, 0}, k).value;
  return static_cast<double>(w / z);
}

double log_exp_moment(const DHMeasure& mu, double a) {
  if (mu.is_atomic()) {
    long double shift = std::numeric_limits<long double>::infinity();
    for (const auto& at : mu.atoms()) shift = std::min(shift, a * to_long_double(at.pos));
    long double num = 0;
    long double den = 0;
    for (const auto& at : mu.atoms()) {
      const long double m = to_long_double(at.mass);
      num += m * std::exp(-(a * to_long_double(at.pos) - shift));
      den += m;
    }
    return static_cast<double>(std::log(num / den) - shift);
  }
  const auto& g = mu.transform();
  const long double z = pl_integral(g, PLExponent{0, mu.xi()}).value;
  const long double w = pl_integral(g, PLExponent{a, mu.xi()}).value;
  return static_cast<double>(std::log(w) - std::log(z));
}

double exp_moment(const DHMeasure& mu, double a) { return std::exp(log_exp_moment(mu, a)); }

TiltedMoments tilted_moments(const DHMeasure& mu, double a) {
  TiltedMoments t;
  if (mu.is_atomic()) {
    long double shift = std::numeric_limits<long double>::infinity();
    for (const auto& at : mu.atoms()) shift = std::min(shift, a * to_long_double(at.pos));
    long double z = 0;
    long double m1 = 0;
    long double total = 0;
    std::vector<long double> w;
    for (const auto& at : mu.atoms()) {
      const long double m = to_long_double(at.mass);
      w.push_back(m * std::exp(-(a * to_long_double(at.pos) - shift)));
      z += w.back();
      m1 += w.back() * to_long_double(at.pos);
      total += m;
    }
    const long double mean = m1 / z;
    long double var = 0;
    for (size_t i = 0; i < w.size(); ++i) {
      const long double d = to_long_double(mu.atoms()[i].pos) - mean;
      var += w[i] * d * d;
    }
    t.log_partition = static_cast<double>(std::log(z / total) - shift);
    t.mean = static_cast<double>(mean);
    t.variance = static_cast<double>(var / z);
    return t;
  }
  const auto& g = mu.transform();
  const PLExponent e{a, mu.xi()};
  const long double z0 = pl_integral(g, PLExponent{0, mu.xi()}).value;
  const long double z = pl_integral(g, e).value;
  const long double mean = pl_integral(g, e, PLWeight{1, {}, 0}, 1).value / z;
  const long double var = pl_integral(g, e, PLWeight{1, {}, -mean}, 2).value / z;
  t.log_partition = static_cast<double>(std::log(z) - std::log(z0));
  t.mean = static_cast<double>(mean);
  t.variance = static_cast<double>(var);
  return t;
}

DHMeasure affine_transform(const DHMeasure& mu, const Rational& a, const Rational& b) {
  if (!(a > 0)) throw Error(ErrorKind::NonpositiveScale, "affine transform needs a > 0");
  if (mu.is_atomic()) {
    std::vector<Atom> atoms = mu.atoms();
    for (auto& at : atoms) at.pos = a * at.pos + b;
    return DHMeasure::atomic(std::move(atoms));
  }
  return DHMeasure::pushforward(mu.transform().transformed(a, b), mu.xi());
}

SupportInfo support(const DHMeasure& mu) {
  SupportInfo s;
  if (mu.is_atomic()) {
    const auto [lo, hi] = std::minmax_element(mu.atoms().begin(), mu.atoms().end(),
                                              [](const Atom& x, const Atom& y) { return x.pos < y.pos; });
    s.lambda_min = to_double(lo->pos);
    s.lambda_max = to_double(hi->pos);
    s.atom_at_max = true;
    return s;
  }
  s.lambda_min = to_double(mu.transform().min_value());
  s.lambda_max = to_double(mu.transform().max_value());
  s.atom_at_max = false;
  return s;
}

namespace {

// Normalized CDF with the per-query work hoisted out.
class CdfEval {
 public:
  explicit CdfEval(const DHMeasure& mu) : mu_(mu) {
    if (mu.is_atomic()) {
      std::vector<std::pair<double, Rational>> pm;
      Rational total = 0;
      for (const auto& a : mu.atoms()) {
        pm.emplace_back(to_double(a.pos), a.mass);
        total += a.mass;
      }
      std::sort(pm.begin(), pm.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      Rational run = 0;
      for (const auto& [x, m] : pm) {
        run += m;
        if (!pos_.empty() && pos_.back() == x) {
          cum_.back() = to_double(run / total);
        } else {
          pos_.push_back(x);
          cum_.push_back(to_double(run / total));
        }
      }
    } else {
      sup_ = support(mu);
      mass_ = mass(mu);
      flat_ = std::all_of(mu.xi().begin(), mu.xi().end(), [](double v) { return v == 0.0; });
      if (flat_) {
        mass_ = 0;
        for (const auto& c : mu.transform().cells()) {
          Piece p{&c, to_double(c.simplex.volume()), {}, true};
          for (const auto& v : c.simplex.vertices()) p.values.push_back(to_long_double(c.affine(v)));
          std::sort(p.values.begin(), p.values.end());
          const long double range = p.values.back() - p.values.front();
          for (size_t i = 1; i < p.values.size(); ++i) {
            if (p.values[i] - p.values[i - 1] <= 1e-4L * std::max(1.0L, range)) p.separated = false;
          }
          mass_ += p.vol;
          pieces_.push_back(std::move(p));
        }
      }
    }
  }

  double operator()(double x) const {
    if (mu_.is_atomic()) {
      auto it = std::upper_bound(pos_.begin(), pos_.end(), x);
      return it == pos_.begin() ? 0.0 : cum_[static_cast<size_t>(it - pos_.begin()) - 1];
    }
    if (x < sup_.lambda_min) return 0.0;
    if (x >= sup_.lambda_max) return 1.0;
    if (!flat_) return 1.0 - superlevel(mu_, x) / mass_;
    long double above = 0;
    for (const auto& p : pieces_) above += p.vol * fraction_above(p, x);
    return static_cast<double>(1.0L - above / mass_);
  }

 private:
  struct Piece {
    const PLCell* cell;
    double vol;
    std::vector<long double> values;  // of G at the vertices, ascending
    bool separated;
  };

  // share of a simplex where the affine G is ≥ x: divided difference of
  // (· − x)_+^n over the vertex values
  static long double fraction_above(const Piece& p, double x) {
    const long double t = x;
    if (t <= p.values.front()) return 1;
    if (t >= p.values.back()) return 0;
    if (!p.separated) {
      Rational vol = 0;
      for (const auto& piece : halfspace_slice(p.cell->simplex, p.cell->affine, exact_rational(x))) vol += piece.volume();
      return to_long_double(vol / p.cell->simplex.volume());
    }
    const size_t n = p.values.size() - 1;
    long double sum = 0;
    for (size_t i = 0; i < p.values.size(); ++i) {
      if (p.values[i] <= t) continue;
      long double term = std::pow(p.values[i] - t, static_cast<long double>(n));
      for (size_t j = 0; j < p.values.size(); ++j) {
        if (j != i) term /= p.values[i] - p.values[j];
      }
      sum += term;
    }
    return std::clamp(sum, 0.0L, 1.0L);
  }

  bool flat_ = false;
  std::vector<Piece> pieces_;
  const DHMeasure& mu_;
  std::vector<double> pos_;
  std::vector<double> cum_;
  SupportInfo sup_;
  double mass_ = 0;
};

// ∫_a^b |g| for g continuous on (a, b): split at sign changes found on a
// sample grid, then integrate g itself on each piece.
double integrate_abs(const std::function<double(double)>& g, double a, double b) {
  constexpr int kSamples = 16;
  std::vector<double> cuts{a};
  double xp = a + (b - a) * 1e-12;
  double gp = g(xp);
  for (int i = 1; i <= kSamples; ++i) {
    const double x = i == kSamples ? b - (b - a) * 1e-12 : a + (b - a) * i / kSamples;
    const double gx = g(x);
    if ((gp < 0 && gx > 0) || (gp > 0 && gx < 0)) {
      double lo = xp, hi = x, glo = gp;
      for (int k = 0; k < 80 && hi - lo > 1e-15 * (1 + std::fabs(lo)); ++k) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((glo < 0) == (gm < 0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      cuts.push_back(0.5 * (lo + hi));
    }
    xp = x;
    gp = gx;
  }
  cuts.push_back(b);
  double total = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) total += std::fabs(gk(g, cuts[i], cuts[i + 1]));
  return total;
}

}  // namespace

double cdf(const DHMeasure& mu, double x) { return CdfEval(mu)(x); }

double wasserstein1(const DHMeasure& a, const DHMeasure& b) {
  std::vector<double> pts;
  for (const DHMeasure* mu : {&a, &b}) {
    if (mu->is_atomic()) {
      for (const auto& at : mu->atoms()) pts.push_back(to_double(at.pos));
    } else {
      auto bp = breakpoints(mu->transform());
      pts.insert(pts.end(), bp.begin(), bp.end());
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const CdfEval fa(a);
  const CdfEval fb(b);
  const bool both_atomic = a.is_atomic() && b.is_atomic();
  auto diff = [&](double x) { return fa(x) - fb(x); };
  double total = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (both_atomic) {
      total += std::fabs(diff(pts[i])) * (pts[i + 1] - pts[i]);
    } else {
      total += integrate_abs(diff, pts[i], pts[i + 1]);
    }
  }
  return total;
}

double integrate(const DHMeasure& mu, const std::function<double(double)>& phi,
                 const std::function<double(double)>& dphi) {
  if (mu.is_atomic()) {
    long double sum = 0;
    for (const auto& a : mu.atoms()) sum += to_long_double(a.mass) * phi(to_double(a.pos));
    return static_cast<double>(sum);
  }
  // ∫φ dμ = φ(λ_min)·μ(total) + ∫_{λ_min}^{λ_max} φ'(x) μ(λ ≥ x) dx
  const auto bp = breakpoints(mu.transform());
  double total = phi(bp.front()) * mass(mu);
  for (size_t i = 0; i + 1 < bp.size(); ++i) {
    total += gk([&](double x) { return dphi(x) * superlevel(mu, x); }, bp[i], bp[i + 1]);
  }
  return total;
}

std::string cdf_csv(const DHMeasure& mu, int samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidInput, "cdf export needs at least 2 samples");
  const SupportInfo s = support(mu);
  std::string out = "x,cdf\n";
  char buf[96];
  for (int i = 0; i < samples; ++i) {
    const double x = s.lambda_min + (s.lambda_max - s.lambda_min) * i / (samples - 1);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, cdf(mu, x));
    out += buf;
  }
  return out;
}

}  // namespace nadeg
