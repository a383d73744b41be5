#include "nadeg/expint.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <string>
#include <thread>

#include "nadeg/error.hpp"
#include "nadeg/linalg.hpp"

namespace nadeg {

namespace {

std::atomic<int> g_threads{1};

// Error-free transformation: a + b = s + e exactly.
struct Compensated {
  long double hi = 0;
  long double lo = 0;

  void add(long double x) {
    const long double s = hi + x;
    const long double bp = s - hi;
    lo += (hi - (s - bp)) + (x - bp);
    hi = s;
  }
  void add(const Compensated& other) {
    add(other.hi);
    lo += other.lo;
  }
  long double value() const { return hi + lo; }
};

// Pairwise reduction in index order; bit-stable for a fixed input order.
Compensated tree_sum(std::vector<Compensated> parts) {
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<Compensated> next;
    next.reserve((parts.size() + 1) / 2);
    for (size_t i = 0; i + 1 < parts.size(); i += 2) {
      Compensated c = parts[i];
      c.add(parts[i + 1]);
      next.push_back(c);
    }
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts.swap(next);
  }
  return parts.front();
}

template <typename F>
void parallel_for(size_t count, F&& body) {
  const size_t workers = std::min<size_t>(static_cast<size_t>(std::max(1, g_threads.load())), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

long double factorial_ld(int n) {
  long double f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<long double>(i);
  return f;
}

std::pair<size_t, size_t> widest_edge(std::span<const long double> values) {
  std::pair<size_t, size_t> best{0, 0};
  long double gap = -1;
  for (size_t i = 0; i < values.size(); ++i) {
    for (size_t j = i + 1; j < values.size(); ++j) {
      long double d = std::fabs(values[i] - values[j]);
      if (d > gap) {
        gap = d;
        best = {i, j};
      }
    }
  }
  return best;
}

long double spread_of(std::span<const long double> values) {
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

// Splitting a simplex at the midpoint of edge (i, j) yields two simplices of
// half the volume whose vertex values replace values[i] (resp. values[j]) by
// the midpoint value; affine integrands stay affine.
template <typename Eval>
ExpIntegralResult split_and_sum(long double measure, std::vector<long double> values, std::vector<long double> weights,
                                Eval&& eval) {
  auto [i, j] = widest_edge(values);
  const long double mid = 0.5L * (values[i] + values[j]);
  const long double wmid = weights.empty() ? 0.0L : 0.5L * (weights[i] + weights[j]);
  auto left = values;
  auto right = values;
  left[i] = mid;
  right[j] = mid;
  auto lw = weights;
  auto rw = weights;
  if (!weights.empty()) {
    lw[i] = wmid;
    rw[j] = wmid;
  }
  ExpIntegralResult a = eval(0.5L * measure, left, lw);
  ExpIntegralResult b = eval(0.5L * measure, right, rw);
  Compensated c;
  c.add(a.value);
  c.add(b.value);
  ExpIntegralResult out;
  out.value = c.value();
  out.method = ExpMethod::subdivision;
  const long double mag = std::fabs(a.value) + std::fabs(b.value);
  out.est_rel_error = out.value == 0 ? std::max(a.est_rel_error, b.est_rel_error)
                                     : static_cast<double>(mag / std::fabs(out.value)) * std::max(a.est_rel_error, b.est_rel_error);
  return out;
}

DividedDifference dd(std::span<const long double> nodes, const EvalOptions& opts) {
  if (opts.force && *opts.force != ExpMethod::subdivision) return exp_divided_difference(nodes, *opts.force);
  return exp_divided_difference(nodes);
}

}  // namespace

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }
int thread_count() { return g_threads.load(); }

// ---------------------------------------------------------------- kernels

ExpIntegralResult exp_integral_from_values(long double measure, std::span<const long double> values, EvalOptions opts) {
  if (values.empty()) throw Error(ErrorKind::DegenerateSimplex, "simplex without vertices");
  const bool forced_split = opts.force == ExpMethod::subdivision;
  if (forced_split || spread_of(values) > kSubdivisionSpread) {
    return split_and_sum(measure, std::vector<long double>(values.begin(), values.end()), {},
                         [](long double m, const std::vector<long double>& v, const std::vector<long double>&) {
                           return exp_integral_from_values(m, v, {});
                         });
  }
  std::vector<long double> nodes(values.size());
  for (size_t i = 0; i < values.size(); ++i) nodes[i] = -values[i];
  DividedDifference d = dd(nodes, opts);
  return ExpIntegralResult{measure * d.value, d.est_rel_error, d.method};
}

ExpIntegralResult weighted_exp_integral_from_values(long double measure, std::span<const long double> values,
                                                    std::span<const long double> weights, int k, EvalOptions opts) {
  if (k < 0 || k > 4) throw Error(ErrorKind::UnsupportedOrder, "moment order " + std::to_string(k) + " outside 0..4");
  if (weights.size() != values.size()) throw Error(ErrorKind::DimensionMismatch, "weight and exponent vertex counts differ");
  if (k == 0) return exp_integral_from_values(measure, values, opts);
  const bool forced_split = opts.force == ExpMethod::subdivision;
  if (forced_split || spread_of(values) > kSubdivisionSpread) {
    return split_and_sum(measure, std::vector<long double>(values.begin(), values.end()),
                         std::vector<long double>(weights.begin(), weights.end()),
                         [k](long double m, const std::vector<long double>& v, const std::vector<long double>& w) {
                           return weighted_exp_integral_from_values(m, v, w, k, {});
                         });
  }

  // d^k/dτ^k of the divided difference at nodes x_i + τ w_i is
  // k! Σ_{|β| = k} w^β [x, x_i repeated β_i times] exp, summed here over
  // nondecreasing index sequences (one per multi-index β).
  const size_t n = values.size();
  std::vector<long double> nodes(n + static_cast<size_t>(k));
  for (size_t i = 0; i < n; ++i) nodes[i] = -values[i];
  std::vector<size_t> seq(static_cast<size_t>(k), 0);
  Compensated sum;
  long double magnitude = 0;
  double worst = 0;
  ExpMethod method = ExpMethod::divided_difference;
  bool first = true;
  while (true) {
    long double coeff = 1;
    for (size_t r = 0; r < seq.size(); ++r) {
      coeff *= weights[seq[r]];
      nodes[n + r] = nodes[seq[r]];
    }
    if (coeff != 0) {
      DividedDifference d = dd(nodes, opts);
      if (first) {
        method = d.method;
        first = false;
      }
      const long double term = coeff * d.value;
      sum.add(term);
      magnitude += std::fabs(term);
      worst = std::max(worst, d.est_rel_error);
    }
    // next nondecreasing sequence
    int pos = k - 1;
    while (pos >= 0 && seq[static_cast<size_t>(pos)] == n - 1) --pos;
    if (pos < 0) break;
    ++seq[static_cast<size_t>(pos)];
    for (size_t r = static_cast<size_t>(pos) + 1; r < seq.size(); ++r) seq[r] = seq[static_cast<size_t>(pos)];
  }
  const long double total = sum.value();
  ExpIntegralResult out;
  out.value = measure * factorial_ld(k) * total;
  out.method = method;
  out.est_rel_error = total == 0 ? worst : static_cast<double>(magnitude / std::fabs(total)) * worst;
  return out;
}

ExpIntegralResult simplex_exp_integral(const Simplex& s, const AffineForm& l, EvalOptions opts) {
  std::vector<long double> values;
  for (const auto& v : s.vertices()) values.push_back(to_long_double(l(v)));
  const long double measure = to_long_double(s.volume()) * factorial_ld(s.dim());
  return exp_integral_from_values(measure, values, opts);
}

ExpIntegralResult simplex_weighted_exp_integral(const Simplex& s, const AffineForm& l, const AffineForm& w, int k,
                                                EvalOptions opts) {
  std::vector<long double> values;
  std::vector<long double> weights;
  for (const auto& v : s.vertices()) {
    values.push_back(to_long_double(l(v)));
    weights.push_back(to_long_double(w(v)));
  }
  const long double measure = to_long_double(s.volume()) * factorial_ld(s.dim());
  return weighted_exp_integral_from_values(measure, values, weights, k, opts);
}

// ---------------------------------------------------------------- PLConcaveFunction

namespace {

std::string vkey(const RVector& v) {
  std::string k;
  for (const auto& c : v) k += c.str() + ",";
  return k;
}

bool cell_less(const PLCell& a, const PLCell& b) {
  auto sorted = [](const Simplex& s) {
    auto vs = s.vertices();
    std::sort(vs.begin(), vs.end(), lex_less);
    return vs;
  };
  auto va = sorted(a.simplex);
  auto vb = sorted(b.simplex);
  return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end(), lex_less);
}

std::vector<Simplex> slice_all(const std::vector<Simplex>& pieces, const AffineForm& h) {
  std::vector<Simplex> out;
  for (const auto& s : pieces) {
    auto part = halfspace_slice(s, h, 0);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace

PLConcaveFunction::PLConcaveFunction(std::vector<PLCell> cells, bool certify_concave)
    : PLConcaveFunction(
          [&] {
            if (cells.empty()) throw Error(ErrorKind::InvalidInput, "piecewise-linear function with no cells");
            std::vector<RVector> pts;
            for (const auto& c : cells) pts.insert(pts.end(), c.simplex.vertices().begin(), c.simplex.vertices().end());
            return RationalPolytope::from_vertices(cells.front().simplex.dim(), std::move(pts));
          }(),
          std::move(cells), certify_concave) {}

PLConcaveFunction::PLConcaveFunction(RationalPolytope domain, std::vector<PLCell>&& cells, bool certified)
    : domain_(std::move(domain)), cells_(std::move(cells)), certified_(false) {
  const int n = domain_.dim();
  if (!domain_.is_full_dimensional()) throw Error(ErrorKind::DegeneratePolytope, "domain of a PL function must be full-dimensional");
  std::map<std::string, Rational> at_vertex;
  Rational covered = 0;
  for (const auto& c : cells_) {
    if (c.simplex.dim() != n || static_cast<int>(c.affine.gradient.size()) != n) {
      throw Error(ErrorKind::DimensionMismatch, "cell of a PL function has the wrong dimension");
    }
    covered += c.simplex.volume();
    for (const auto& v : c.simplex.vertices()) {
      Rational val = c.affine(v);
      auto [it, inserted] = at_vertex.emplace(vkey(v), val);
      if (!inserted && it->second != val) {
        throw Error(ErrorKind::InvalidInput, "adjacent affine pieces disagree at a shared vertex (discontinuous PL function)");
      }
    }
  }
  if (covered != volume(domain_)) {
    throw Error(ErrorKind::InvalidInput, "cells do not triangulate their convex hull (volumes " + covered.str() + " vs " +
                                             volume(domain_).str() + ")");
  }
  if (certified) {
    for (const auto& c : cells_) {
      for (const auto& other : cells_) {
        for (const auto& v : c.simplex.vertices()) {
          if (other.affine(v) < at_vertex.at(vkey(v))) {
            throw Error(ErrorKind::InvalidInput, "concavity certificate fails: function is not the minimum of its pieces");
          }
        }
      }
    }
    certified_ = true;
  }
  std::stable_sort(cells_.begin(), cells_.end(), cell_less);
}

PLConcaveFunction PLConcaveFunction::affine_on(const RationalPolytope& domain, const AffineForm& f) {
  std::vector<PLCell> cells;
  for (auto& s : triangulate(domain)) cells.push_back(PLCell{std::move(s), f});
  return PLConcaveFunction(domain, std::move(cells), true);
}

PLConcaveFunction PLConcaveFunction::min_of_affine(const RationalPolytope& domain, const std::vector<AffineForm>& pieces) {
  std::vector<AffineForm> unique;
  for (const auto& p : pieces) {
    bool dup = std::any_of(unique.begin(), unique.end(), [&](const AffineForm& q) {
      return q.gradient == p.gradient && q.constant == p.constant;
    });
    if (!dup) unique.push_back(p);
  }
  if (unique.empty()) throw Error(ErrorKind::InvalidInput, "min of an empty family of affine functions");
  std::vector<PLCell> cells;
  const auto base = triangulate(domain);
  for (size_t j = 0; j < unique.size(); ++j) {
    std::vector<Simplex> region = base;
    for (size_t i = 0; i < unique.size() && !region.empty(); ++i) {
      if (i == j) continue;
      // region where f_i - f_j ≥ 0; ties on a full-dimensional set are impossible after dedup
      region = slice_all(region, unique[i] + Rational(-1) * unique[j]);
    }
    for (auto& s : region) cells.push_back(PLCell{std::move(s), unique[j]});
  }
  return PLConcaveFunction(domain, std::move(cells), true);
}

Rational PLConcaveFunction::operator()(const RVector& y) const {
  for (const auto& c : cells_) {
    const auto& vs = c.simplex.vertices();
    RMatrix edges;
    for (size_t i = 1; i < vs.size(); ++i) edges.push_back(vs[i] - vs[0]);
    auto coords = linalg::coordinates(edges, y - vs[0]);
    if (!coords) continue;
    Rational total = 0;
    bool inside = true;
    for (const auto& x : *coords) {
      if (x < 0) inside = false;
      total += x;
    }
    if (inside && total <= 1) return c.affine(y);
  }
  throw Error(ErrorKind::InvalidInput, "point outside the domain of the PL function");
}

Rational PLConcaveFunction::min_value() const {
  std::optional<Rational> best;
  for (const auto& c : cells_) {
    for (const auto& v : c.simplex.vertices()) {
      Rational x = c.affine(v);
      if (!best || x < *best) best = x;
    }
  }
  return *best;
}

Rational PLConcaveFunction::max_value() const {
  std::optional<Rational> best;
  for (const auto& c : cells_) {
    for (const auto& v : c.simplex.vertices()) {
      Rational x = c.affine(v);
      if (!best || x > *best) best = x;
    }
  }
  return *best;
}

PLConcaveFunction PLConcaveFunction::transformed(const Rational& a, const Rational& b) const {
  if (!(a > 0)) throw Error(ErrorKind::NonpositiveScale, "rescaling factor must be positive");
  std::vector<PLCell> cells;
  for (const auto& c : cells_) {
    AffineForm f = a * c.affine;
    f.constant += b;
    cells.push_back(PLCell{c.simplex, std::move(f)});
  }
  return PLConcaveFunction(domain_, std::move(cells), certified_);
}

PLConcaveFunction PLConcaveFunction::twisted(const RVector& xi) const {
  const AffineForm pairing = AffineForm::pairing(dim(), xi);
  std::vector<PLCell> cells;
  for (const auto& c : cells_) cells.push_back(PLCell{c.simplex, c.affine + pairing});
  return PLConcaveFunction(domain_, std::move(cells), certified_);
}

// ---------------------------------------------------------------- PL integrals

ExpIntegralResult pl_exp_integral(const PLConcaveFunction& g, const AffineForm& shift, EvalOptions opts) {
  const auto& cells = g.cells();
  std::vector<ExpIntegralResult> parts(cells.size());
  parallel_for(cells.size(), [&](size_t i) {
    parts[i] = simplex_exp_integral(cells[i].simplex, cells[i].affine + shift, opts);
  });
  std::vector<Compensated> sums(parts.size());
  ExpIntegralResult out;
  long double magnitude = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    sums[i].add(parts[i].value);
    magnitude += std::fabs(parts[i].value);
    out.est_rel_error = std::max(out.est_rel_error, parts[i].est_rel_error);
    if (parts[i].method != ExpMethod::divided_difference) out.method = parts[i].method;
  }
  out.value = tree_sum(std::move(sums)).value();
  if (out.value != 0) out.est_rel_error *= static_cast<double>(magnitude / std::fabs(out.value));
  return out;
}

ExpIntegralResult pl_integral(const PLConcaveFunction& g, const PLExponent& exponent, const PLWeight& weight, int k,
                              EvalOptions opts) {
  const int n = g.dim();
  if (static_cast<int>(exponent.xi.size()) > n || static_cast<int>(weight.eta.size()) > n) {
    throw Error(ErrorKind::DimensionMismatch, "pairing vector longer than the ambient dimension");
  }
  const auto& cells = g.cells();
  const long double nfact = factorial_ld(n);
  std::vector<ExpIntegralResult> parts(cells.size());
  parallel_for(cells.size(), [&](size_t c) {
    const auto& cell = cells[c];
    std::vector<long double> values;
    std::vector<long double> weights;
    for (const auto& v : cell.simplex.vertices()) {
      const long double gv = to_long_double(cell.affine(v));
      long double t = exponent.scale * gv;
      for (size_t j = 0; j < exponent.xi.size(); ++j) t += static_cast<long double>(exponent.xi[j]) * to_long_double(v[j]);
      long double w = weight.transform * gv + weight.constant;
      for (size_t j = 0; j < weight.eta.size(); ++j) w += static_cast<long double>(weight.eta[j]) * to_long_double(v[j]);
      values.push_back(t);
      weights.push_back(w);
    }
    const long double measure = to_long_double(cell.simplex.volume()) * nfact;
    parts[c] = weighted_exp_integral_from_values(measure, values, weights, k, opts);
  });
  std::vector<Compensated> sums(parts.size());
  ExpIntegralResult out;
  long double magnitude = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    sums[i].add(parts[i].value);
    magnitude += std::fabs(parts[i].value);
    out.est_rel_error = std::max(out.est_rel_error, parts[i].est_rel_error);
    if (parts[i].method != ExpMethod::divided_difference) out.method = parts[i].method;
  }
  out.value = tree_sum(std::move(sums)).value();
  if (out.value != 0) out.est_rel_error *= static_cast<double>(magnitude / std::fabs(out.value));
  return out;
}

double superlevel_gvolume(const PLConcaveFunction& g, const Rational& x, std::span<const double> xi) {
  const int n = g.dim();
  if (static_cast<int>(xi.size()) > n) throw Error(ErrorKind::DimensionMismatch, "pairing vector longer than the ambient dimension");
  const long double nfact = factorial_ld(n);
  const auto& cells = g.cells();
  std::vector<Compensated> sums(cells.size());
  parallel_for(cells.size(), [&](size_t c) {
    for (const auto& piece : halfspace_slice(cells[c].simplex, cells[c].affine, x)) {
      std::vector<long double> values;
      for (const auto& v : piece.vertices()) {
        long double t = 0;
        for (size_t j = 0; j < xi.size(); ++j) t += static_cast<long double>(xi[j]) * to_long_double(v[j]);
        values.push_back(t);
      }
      sums[c].add(exp_integral_from_values(to_long_double(piece.volume()) * nfact, values).value);
    }
  });
  return static_cast<double>(nfact * tree_sum(std::move(sums)).value());
}

}  // namespace nadeg
