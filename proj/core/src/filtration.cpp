#include "nadeg/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nadeg/error.hpp"
#include "nadeg/linalg.hpp"

namespace nadeg {

namespace {

void check_weights(const std::vector<RVector>& weights, size_t n) {
  if (weights.empty()) return;
  if (weights.size() != n) throw Error(ErrorKind::DimensionMismatch, "one torus weight per basis vector is required");
  const size_t r = weights.front().size();
  for (const auto& w : weights) {
    if (w.size() != r || r == 0) throw Error(ErrorKind::DimensionMismatch, "torus weights of inconsistent rank");
    for (const auto& x : w) {
      if (denominator(x) != 1) throw Error(ErrorKind::InvalidInput, "torus weights must be integral, got " + x.str());
    }
  }
}

long double factorial_ld(int n) {
  long double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

// ---------------------------------------------------------------- FiltrationLevel

FiltrationLevel FiltrationLevel::from_values(int degree, RVector values, std::vector<RVector> weights) {
  RMatrix basis = linalg::identity(static_cast<int>(values.size()));
  return from_basis(degree, std::move(basis), std::move(values), std::move(weights));
}

FiltrationLevel FiltrationLevel::from_basis(int degree, RMatrix basis, RVector values, std::vector<RVector> weights) {
  if (degree < 1) throw Error(ErrorKind::InvalidInput, "filtration degree must be at least 1");
  const size_t n = values.size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "filtration level of dimension 0");
  if (basis.size() != n) throw Error(ErrorKind::DimensionMismatch, "number of basis vectors differs from number of values");
  for (const auto& row : basis) {
    if (row.size() != n) throw Error(ErrorKind::DimensionMismatch, "basis vector of the wrong length");
  }
  if (linalg::rank(basis) != static_cast<int>(n)) throw Error(ErrorKind::NotABasis, "basis vectors are linearly dependent");
  check_weights(weights, n);

  // canonical order: values descending, ties keep input order
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] > values[b]; });
  FiltrationLevel lv;
  lv.degree_ = degree;
  for (size_t i : order) {
    lv.basis_.push_back(basis[i]);
    lv.values_.push_back(values[i]);
    if (!weights.empty()) lv.weights_.push_back(weights[i]);
  }
  return lv;
}

FiltrationLevel FiltrationLevel::from_flags(int degree, int dim, std::vector<FlagStep> flags) {
  if (flags.empty()) throw Error(ErrorKind::InvalidFlag, "empty flag");
  RMatrix basis;
  RVector values;
  int prev_rank = 0;
  for (size_t i = 0; i < flags.size(); ++i) {
    const auto& step = flags[i];
    if (i > 0 && !(step.value < flags[i - 1].value)) throw Error(ErrorKind::InvalidFlag, "flag values must be strictly decreasing");
    for (const auto& row : step.rows) {
      if (static_cast<int>(row.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "flag row of the wrong length");
    }
    const int r = linalg::rank(step.rows);
    RMatrix both = basis;
    both.insert(both.end(), step.rows.begin(), step.rows.end());
    if (linalg::rank(both) != r) throw Error(ErrorKind::InvalidFlag, "flag subspaces are not nested");
    if (r <= prev_rank) throw Error(ErrorKind::InvalidFlag, "flag step at value " + step.value.str() + " does not enlarge the subspace");
    for (int idx : linalg::greedy_extension(basis, step.rows)) {
      basis.push_back(step.rows[static_cast<size_t>(idx)]);
      values.push_back(step.value);
    }
    prev_rank = r;
  }
  if (prev_rank != dim) throw Error(ErrorKind::InvalidFlag, "last flag step must span the whole space");
  return from_basis(degree, std::move(basis), std::move(values));
}

Rational FiltrationLevel::value_of(const RVector& v) const {
  if (static_cast<int>(v.size()) != dim()) throw Error(ErrorKind::DimensionMismatch, "vector of the wrong length");
  auto c = linalg::coordinates(basis_, v);
  std::optional<Rational> best;
  for (size_t j = 0; j < c->size(); ++j) {
    if ((*c)[j] != 0 && (!best || values_[j] < *best)) best = values_[j];
  }
  if (!best) throw Error(ErrorKind::InvalidInput, "the zero vector has no finite value");
  return *best;
}

std::vector<FlagStep> FiltrationLevel::flags() const {
  std::vector<FlagStep> out;
  for (size_t j = 0; j < values_.size(); ++j) {
    if (out.empty() || values_[j] != out.back().value) {
      RMatrix rows = out.empty() ? RMatrix{} : out.back().rows;
      out.push_back(FlagStep{values_[j], std::move(rows)});
    }
    out.back().rows.push_back(basis_[j]);
  }
  return out;
}

FiltrationLevel FiltrationLevel::rescaled(const Rational& a, const Rational& b) const {
  if (!(a > 0)) throw Error(ErrorKind::NonpositiveScale, "rescaling factor must be positive");
  FiltrationLevel lv = *this;
  for (auto& v : lv.values_) v = a * v + b * degree_;
  return lv;
}

FiltrationLevel FiltrationLevel::twisted(const RVector& xi) const {
  if (!has_weights()) throw Error(ErrorKind::MissingTorusWeights, "twist needs torus weights at degree " + std::to_string(degree_));
  if (static_cast<int>(xi.size()) != torus_rank()) throw Error(ErrorKind::DimensionMismatch, "twist vector rank differs from torus rank");
  RVector values = values_;
  for (size_t j = 0; j < values.size(); ++j) values[j] += dot(weights_[j], xi);
  return from_basis(degree_, basis_, std::move(values), weights_);
}

// ---------------------------------------------------------------- GradedFiltration

void GradedFiltration::set_level(FiltrationLevel lv) {
  const int m = lv.degree();
  levels_.insert_or_assign(m, std::move(lv));
}

const FiltrationLevel& GradedFiltration::level(int m) const {
  auto it = levels_.find(m);
  if (it == levels_.end()) throw Error(ErrorKind::MissingLevel, "filtration has no level m=" + std::to_string(m));
  return it->second;
}

std::vector<int> GradedFiltration::degrees() const {
  std::vector<int> out;
  for (const auto& [m, lv] : levels_) out.push_back(m);
  return out;
}

RVector successive_minima(const FiltrationLevel& lv) {
  RVector v = lv.values();
  std::sort(v.begin(), v.end(), [](const Rational& a, const Rational& b) { return a > b; });
  return v;
}

GradedFiltration rescale_shift(const GradedFiltration& f, const Rational& a, const Rational& b) {
  if (!(a > 0)) throw Error(ErrorKind::NonpositiveScale, "rescaling factor must be positive");
  GradedFiltration out(f.label());
  for (const auto& [m, lv] : f.levels()) out.set_level(lv.rescaled(a, b));
  return out;
}

GradedFiltration twist(const GradedFiltration& f, const RVector& xi) {
  GradedFiltration out(f.label());
  for (const auto& [m, lv] : f.levels()) out.set_level(lv.twisted(xi));
  return out;
}

DHMeasure empirical_dh(const GradedFiltration& f, int m, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "ambient dimension must be at least 1");
  const auto& lv = f.level(m);
  Rational atom_mass = Rational(static_cast<long>(factorial_ld(n)));
  for (int i = 0; i < n; ++i) atom_mass /= m;
  const Rational inv_m = Rational(1, m);
  std::vector<Atom> atoms;
  for (size_t j = 0; j < lv.values().size(); ++j) {
    Atom a{lv.values()[j] * inv_m, atom_mass, {}};
    if (lv.has_weights()) a.weight = inv_m * lv.weights()[j];
    atoms.push_back(std::move(a));
  }
  return DHMeasure::atomic(std::move(atoms));
}

// ---------------------------------------------------------------- relative position

CommonBasis common_adapted_basis(const FiltrationLevel& lv0, const FiltrationLevel& lv1) {
  if (lv0.dim() != lv1.dim()) throw Error(ErrorKind::DimensionMismatch, "filtrations live on spaces of different dimension");
  const size_t n = static_cast<size_t>(lv0.dim());
  const RMatrix& e = lv0.basis();
  const RMatrix& g = lv1.basis();
  // rows of g in coordinates of e; both bases are sorted by value, descending
  const auto einv = linalg::inverse(e);
  if (!einv) throw Error(ErrorKind::NotABasis, "first filtration basis is singular");
  RMatrix coords(n, RVector(n, Rational(0)));
  for (size_t r = 0; r < n; ++r) {
    for (size_t k = 0; k < n; ++k) {
      if (g[r][k] == 0) continue;
      for (size_t j = 0; j < n; ++j) {
        if ((*einv)[k][j] != 0) coords[r][j] += g[r][k] * (*einv)[k][j];
      }
    }
  }
  auto last_nonzero = [&](const RVector& v) {
    for (size_t j = n; j-- > 0;) {
      if (v[j] != 0) return static_cast<long>(j);
    }
    return -1L;
  };
  // Reduce each row by earlier (higher valued) rows until its last nonzero
  // e-coordinate is unique; the result is triangular for both flags.
  std::vector<long> owner(n, -1);
  CommonBasis out;
  for (size_t r = 0; r < n; ++r) {
    RVector& row = coords[r];
    long p = last_nonzero(row);
    while (p >= 0 && owner[static_cast<size_t>(p)] >= 0) {
      const RVector& piv = coords[static_cast<size_t>(owner[static_cast<size_t>(p)])];
      const Rational f = row[static_cast<size_t>(p)] / piv[static_cast<size_t>(p)];
      for (size_t j = 0; j <= static_cast<size_t>(p); ++j) {
        if (piv[j] != 0) row[j] -= f * piv[j];
      }
      p = last_nonzero(row);
    }
    if (p < 0) throw Error(ErrorKind::NotABasis, "second filtration basis is singular");
    owner[static_cast<size_t>(p)] = static_cast<long>(r);
    RVector v(n, Rational(0));
    for (size_t j = 0; j <= static_cast<size_t>(p); ++j) {
      if (row[j] == 0) continue;
      for (size_t k = 0; k < n; ++k) {
        if (e[j][k] != 0) v[k] += row[j] * e[j][k];
      }
    }
    out.basis.push_back(std::move(v));
    out.values.emplace_back(lv0.values()[static_cast<size_t>(p)], lv1.values()[r]);
  }
  return out;
}

RVector relative_minima(const GradedFiltration& f0, const GradedFiltration& f1, int m) {
  const auto cb = common_adapted_basis(f0.level(m), f1.level(m));
  RVector out;
  for (const auto& [v0, v1] : cb.values) out.push_back(v1 - v0);
  std::sort(out.begin(), out.end());
  return out;
}

double d_p_level(const GradedFiltration& f0, const GradedFiltration& f1, int m, double p) {
  if (!(p >= 1)) throw Error(ErrorKind::InvalidInput, "d_p needs p >= 1");
  const RVector rel = relative_minima(f0, f1, m);
  long double sum = 0;
  for (const auto& x : rel) sum += std::pow(std::fabs(to_long_double(x) / m), static_cast<long double>(p));
  return static_cast<double>(std::pow(sum / rel.size(), 1.0L / p));
}

Rational d2_squared_level(const GradedFiltration& f0, const GradedFiltration& f1, int m) {
  const RVector rel = relative_minima(f0, f1, m);
  Rational sum = 0;
  for (const auto& x : rel) sum += x * x;
  return sum / (Rational(m) * m * static_cast<long>(rel.size()));
}

DpSequence d_p_sequence(const GradedFiltration& f0, const GradedFiltration& f1, const std::vector<int>& degrees, double p) {
  if (degrees.empty()) throw Error(ErrorKind::InsufficientDegrees, "d_p sequence needs at least one degree");
  DpSequence s;
  s.degrees = degrees;
  for (int m : degrees) s.values.push_back(d_p_level(f0, f1, m, p));
  if (degrees.size() == 1) {
    s.extrapolated = s.values.front();
    return s;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(degrees.size());
  for (size_t i = 0; i < degrees.size(); ++i) {
    const double x = 1.0 / degrees[i];
    sx += x;
    sy += s.values[i];
    sxx += x * x;
    sxy += x * s.values[i];
  }
  const double den = k * sxx - sx * sx;
  const double slope = den == 0 ? 0 : (k * sxy - sx * sy) / den;
  s.extrapolated = (sy - slope * sx) / k;
  return s;
}

// ---------------------------------------------------------------- Q_m, Ψ_m

double q_m(const GradedFiltration& f, int m) {
  const auto& lv = f.level(m);
  long double sum = 0;
  for (const auto& v : lv.values()) sum += std::exp(-to_long_double(v) / m);
  return static_cast<double>(sum / lv.dim());
}

double psi_m(const GradedFiltration& f, int m) { return 1.0 - q_m(f, m); }

double q_of_basis(const GradedFiltration& f, int m, const RMatrix& basis) {
  const auto& lv = f.level(m);
  if (static_cast<int>(basis.size()) != lv.dim()) throw Error(ErrorKind::NotABasis, "wrong number of basis vectors");
  for (const auto& row : basis) {
    if (static_cast<int>(row.size()) != lv.dim()) throw Error(ErrorKind::DimensionMismatch, "basis vector of the wrong length");
  }
  if (linalg::rank(basis) != lv.dim()) throw Error(ErrorKind::NotABasis, "vectors do not span the level");
  long double sum = 0;
  for (const auto& row : basis) sum += std::exp(-to_long_double(lv.value_of(row)) / m);
  return static_cast<double>(sum / lv.dim());
}

std::vector<std::string> superadditivity_warnings(const GradedFiltration& f) {
  std::vector<std::string> out;
  auto lmax = [&](int m) { return successive_minima(f.level(m)).front(); };
  const auto ds = f.degrees();
  for (size_t i = 0; i < ds.size(); ++i) {
    for (size_t j = i; j < ds.size(); ++j) {
      const int s = ds[i] + ds[j];
      if (!f.has_level(s)) continue;
      if (lmax(s) < lmax(ds[i]) + lmax(ds[j])) {
        out.push_back("lambda_max(" + std::to_string(s) + ") < lambda_max(" + std::to_string(ds[i]) + ") + lambda_max(" +
                      std::to_string(ds[j]) + "): levels cannot come from a multiplicative filtration");
      }
    }
  }
  return out;
}

}  // namespace nadeg
