#include "nadeg/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "nadeg/error.hpp"
#include "nadeg/linalg.hpp"

namespace nadeg {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------- AffineForm

Rational AffineForm::operator()(const RVector& y) const {
  if (y.size() != gradient.size()) throw Error(ErrorKind::DimensionMismatch, "affine form evaluated at a point of wrong dimension");
  return dot(gradient, y) + constant;
}

AffineForm AffineForm::zero(int dim) { return AffineForm{RVector(static_cast<size_t>(dim), Rational(0)), 0}; }

AffineForm AffineForm::coordinate(int dim, int index) {
  AffineForm f = zero(dim);
  f.gradient.at(static_cast<size_t>(index)) = 1;
  return f;
}

AffineForm AffineForm::pairing(int dim, const RVector& xi) {
  if (static_cast<int>(xi.size()) > dim) throw Error(ErrorKind::DimensionMismatch, "pairing vector longer than the ambient dimension");
  AffineForm f = zero(dim);
  for (size_t j = 0; j < xi.size(); ++j) f.gradient[j] = xi[j];
  return f;
}

AffineForm operator+(const AffineForm& a, const AffineForm& b) {
  return AffineForm{a.gradient + b.gradient, a.constant + b.constant};
}

AffineForm operator*(const Rational& s, const AffineForm& a) { return AffineForm{s * a.gradient, s * a.constant}; }

// ---------------------------------------------------------------- helpers

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

RMatrix differences(const std::vector<RVector>& pts, const std::vector<int>& idx) {
  RMatrix d;
  for (size_t k = 1; k < idx.size(); ++k) d.push_back(pts[static_cast<size_t>(idx[k])] - pts[static_cast<size_t>(idx[0])]);
  return d;
}

// Scales (normal, offset) so the normal is a primitive integer vector.
Halfspace canonical(Halfspace h) {
  mp::mpz_int lcm = 1;
  for (const auto& c : h.normal) lcm = mp::lcm(lcm, mp::denominator(c));
  RVector scaled;
  mp::mpz_int g = 0;
  for (const auto& c : h.normal) {
    Rational s = c * Rational(lcm);
    g = mp::gcd(g, mp::numerator(s));
    scaled.push_back(s);
  }
  if (g == 0) return h;
  Rational factor = Rational(lcm) / Rational(g);
  for (auto& c : h.normal) c *= factor;
  h.offset *= factor;
  return h;
}

std::string key_of(const Halfspace& h) {
  std::string k;
  for (const auto& c : h.normal) k += c.str() + ",";
  return k + "|" + h.offset.str();
}

std::vector<RVector> dedupe_sorted(std::vector<RVector> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Calls f on every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& f) {
  if (k > n || k < 0) return;
  std::vector<int> idx(static_cast<size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
}

// Facets of conv(pts) for full-dimensional point sets: every hyperplane
// through n affinely independent points that leaves all points on one side.
std::vector<Halfspace> facets_of(int dim, const std::vector<RVector>& pts) {
  std::map<std::string, Halfspace> found;
  const int n = static_cast<int>(pts.size());
  for_each_subset(n, dim, [&](const std::vector<int>& idx) {
    RMatrix d = differences(pts, idx);
    RVector normal;
    if (dim == 1) {
      normal = RVector{Rational(1)};
    } else {
      RMatrix ns = linalg::nullspace(d, dim);
      if (ns.size() != 1) return;
      normal = ns.front();
    }
    Rational offset = dot(normal, pts[static_cast<size_t>(idx[0])]);
    bool any_pos = false;
    bool any_neg = false;
    for (const auto& p : pts) {
      Rational s = dot(normal, p) - offset;
      if (s > 0) any_pos = true;
      if (s < 0) any_neg = true;
      if (any_pos && any_neg) return;
    }
    if (!any_pos && !any_neg) return;
    Halfspace h = any_pos ? Halfspace{Rational(-1) * normal, -offset} : Halfspace{normal, offset};
    h = canonical(std::move(h));
    found.emplace(key_of(h), h);
  });
  std::vector<Halfspace> out;
  for (auto& [k, h] : found) out.push_back(std::move(h));
  return out;
}

bool on_boundary(const Halfspace& h, const RVector& p) { return dot(h.normal, p) == h.offset; }

std::vector<RVector> extreme_points(int dim, const std::vector<RVector>& pts, const std::vector<Halfspace>& facets) {
  std::vector<RVector> out;
  for (const auto& p : pts) {
    RMatrix tight;
    for (const auto& h : facets) {
      if (on_boundary(h, p)) tight.push_back(h.normal);
    }
    if (static_cast<int>(tight.size()) >= dim && linalg::rank(tight) == dim) out.push_back(p);
  }
  return out;
}

bool satisfies(const std::vector<Halfspace>& hs, const RVector& p) {
  for (const auto& h : hs) {
    if (dot(h.normal, p) > h.offset) return false;
  }
  return true;
}

// Nonzero direction d with ⟨a_i, d⟩ ≤ 0 for all i exists iff the halfspace
// intersection is unbounded (for a nonempty pointed intersection).
bool recession_cone_trivial(int dim, const std::vector<Halfspace>& hs) {
  bool trivial = true;
  auto check_dir = [&](const RVector& d) {
    for (int sign : {1, -1}) {
      bool ok = true;
      for (const auto& h : hs) {
        if (Rational(sign) * dot(h.normal, d) > 0) {
          ok = false;
          break;
        }
      }
      if (ok) trivial = false;
    }
  };
  const int m = static_cast<int>(hs.size());
  for_each_subset(m, dim - 1, [&](const std::vector<int>& idx) {
    if (!trivial) return;
    RMatrix rows;
    for (int i : idx) rows.push_back(hs[static_cast<size_t>(i)].normal);
    RMatrix ns = linalg::nullspace(rows, dim);
    if (ns.size() == 1) check_dir(ns.front());
  });
  return trivial;
}

std::vector<RVector> vertices_of(int dim, const std::vector<Halfspace>& hs) {
  std::vector<RVector> out;
  const int m = static_cast<int>(hs.size());
  for_each_subset(m, dim, [&](const std::vector<int>& idx) {
    RMatrix a;
    RVector b;
    for (int i : idx) {
      a.push_back(hs[static_cast<size_t>(i)].normal);
      b.push_back(hs[static_cast<size_t>(i)].offset);
    }
    auto inv = linalg::inverse(a);
    if (!inv) return;
    RVector x(static_cast<size_t>(dim), Rational(0));
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) x[static_cast<size_t>(r)] += (*inv)[static_cast<size_t>(r)][static_cast<size_t>(c)] * b[static_cast<size_t>(c)];
    }
    if (satisfies(hs, x)) out.push_back(std::move(x));
  });
  return dedupe_sorted(std::move(out));
}

// Recursive pulling triangulation over vertex index sets.
void triangulate_face(const std::vector<RVector>& verts, const std::vector<Halfspace>& facets,
                      const std::vector<int>& face, int k, std::vector<std::vector<int>>& out) {
  if (k == 0) {
    out.push_back({face.front()});
    return;
  }
  const int apex = face.front();  // vertices are lex-sorted, so the smallest index is the lex-min vertex
  std::set<std::vector<int>> seen;
  for (const auto& h : facets) {
    if (on_boundary(h, verts[static_cast<size_t>(apex)])) continue;
    std::vector<int> sub;
    for (int i : face) {
      if (on_boundary(h, verts[static_cast<size_t>(i)])) sub.push_back(i);
    }
    if (static_cast<int>(sub.size()) < k) continue;
    if (!seen.insert(sub).second) continue;
    std::vector<RVector> pts;
    for (int i : sub) pts.push_back(verts[static_cast<size_t>(i)]);
    if (affine_dimension(pts) != k - 1) continue;
    std::vector<std::vector<int>> cells;
    triangulate_face(verts, facets, sub, k - 1, cells);
    for (auto& c : cells) {
      c.insert(c.begin(), apex);
      out.push_back(std::move(c));
    }
  }
}

}  // namespace

int affine_dimension(const std::vector<RVector>& points) {
  if (points.empty()) return -1;
  RMatrix d;
  for (size_t i = 1; i < points.size(); ++i) d.push_back(points[i] - points[0]);
  return d.empty() ? 0 : linalg::rank(d);
}

// ---------------------------------------------------------------- Simplex

Simplex::Simplex(std::vector<RVector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error(ErrorKind::DegenerateSimplex, "simplex with no vertices");
  dim_ = static_cast<int>(vertices_.front().size());
  if (static_cast<int>(vertices_.size()) != dim_ + 1) {
    throw Error(ErrorKind::DegenerateSimplex, "a simplex in Q^" + std::to_string(dim_) + " needs " + std::to_string(dim_ + 1) + " vertices");
  }
  for (const auto& v : vertices_) {
    if (static_cast<int>(v.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "simplex vertices of mixed dimension");
  }
  RMatrix edges;
  for (int i = 1; i <= dim_; ++i) edges.push_back(vertices_[static_cast<size_t>(i)] - vertices_[0]);
  Rational det = dim_ == 0 ? Rational(1) : linalg::determinant(edges);
  if (det == 0) throw Error(ErrorKind::DegenerateSimplex, "simplex vertices are affinely dependent");
  volume_ = (det < 0 ? Rational(-det) : det) / factorial(dim_);
}

// ---------------------------------------------------------------- RationalPolytope

RationalPolytope RationalPolytope::from_vertices(int dim, std::vector<RVector> points) {
  if (dim < 1) throw Error(ErrorKind::InvalidInput, "polytope dimension must be at least 1");
  if (points.empty()) throw Error(ErrorKind::DegeneratePolytope, "polytope with no vertices");
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "vertex of wrong dimension");
  }
  RationalPolytope poly;
  poly.dim_ = dim;
  auto pts = dedupe_sorted(std::move(points));
  poly.affine_dim_ = affine_dimension(pts);
  if (poly.affine_dim_ < dim) {
    poly.vertices_ = std::move(pts);
    return poly;
  }
  poly.halfspaces_ = facets_of(dim, pts);
  poly.vertices_ = extreme_points(dim, pts, poly.halfspaces_);
  return poly;
}

RationalPolytope RationalPolytope::from_halfspaces(int dim, std::vector<Halfspace> halfspaces) {
  if (dim < 1) throw Error(ErrorKind::InvalidInput, "polytope dimension must be at least 1");
  for (const auto& h : halfspaces) {
    if (static_cast<int>(h.normal.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "halfspace normal of wrong dimension");
  }
  if (!recession_cone_trivial(dim, halfspaces)) throw Error(ErrorKind::UnboundedPolytope, "halfspace intersection is unbounded");
  auto verts = vertices_of(dim, halfspaces);
  if (verts.empty()) throw Error(ErrorKind::DegeneratePolytope, "halfspace intersection is empty");
  return from_vertices(dim, std::move(verts));
}

RationalPolytope RationalPolytope::from_both(int dim, std::vector<RVector> vertices, std::vector<Halfspace> halfspaces) {
  RationalPolytope from_h = from_halfspaces(dim, halfspaces);
  RationalPolytope from_v = from_vertices(dim, std::move(vertices));
  if (from_h.vertices_ != from_v.vertices_) {
    throw Error(ErrorKind::InconsistentRepresentation, "vertex list and halfspace list describe different polytopes");
  }
  return from_v;
}

RationalPolytope RationalPolytope::interval(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw Error(ErrorKind::DegeneratePolytope, "interval needs lo < hi");
  RationalPolytope p;
  p.dim_ = 1;
  p.affine_dim_ = 1;
  p.vertices_ = {RVector{lo}, RVector{hi}};
  p.halfspaces_ = {canonical(Halfspace{RVector{Rational(-1)}, -lo}), canonical(Halfspace{RVector{Rational(1)}, hi})};
  return p;
}

RationalPolytope RationalPolytope::box(const RVector& lo, const RVector& hi) {
  const int dim = static_cast<int>(lo.size());
  if (dim < 1 || hi.size() != lo.size()) throw Error(ErrorKind::DimensionMismatch, "box corners of different dimension");
  RationalPolytope p;
  p.dim_ = dim;
  p.affine_dim_ = dim;
  for (int j = 0; j < dim; ++j) {
    if (!(lo[static_cast<size_t>(j)] < hi[static_cast<size_t>(j)])) throw Error(ErrorKind::DegeneratePolytope, "box needs lo < hi in every coordinate");
  }
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    RVector v(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j) v[static_cast<size_t>(j)] = (mask >> j) & 1u ? hi[static_cast<size_t>(j)] : lo[static_cast<size_t>(j)];
    p.vertices_.push_back(std::move(v));
  }
  p.vertices_ = dedupe_sorted(std::move(p.vertices_));
  std::map<std::string, Halfspace> hs;
  for (int j = 0; j < dim; ++j) {
    RVector e(static_cast<size_t>(dim), Rational(0));
    e[static_cast<size_t>(j)] = 1;
    Halfspace up = canonical(Halfspace{e, hi[static_cast<size_t>(j)]});
    Halfspace down = canonical(Halfspace{Rational(-1) * e, -lo[static_cast<size_t>(j)]});
    hs.emplace(key_of(up), up);
    hs.emplace(key_of(down), down);
  }
  for (auto& [k, h] : hs) p.halfspaces_.push_back(h);
  return p;
}

RationalPolytope RationalPolytope::standard_simplex(int dim) {
  std::vector<RVector> pts{RVector(static_cast<size_t>(dim), Rational(0))};
  for (int j = 0; j < dim; ++j) {
    RVector e(static_cast<size_t>(dim), Rational(0));
    e[static_cast<size_t>(j)] = 1;
    pts.push_back(std::move(e));
  }
  return from_vertices(dim, std::move(pts));
}

bool RationalPolytope::contains(const RVector& y) const {
  if (static_cast<int>(y.size()) != dim_) throw Error(ErrorKind::DimensionMismatch, "containment test with point of wrong dimension");
  if (is_full_dimensional()) return satisfies(halfspaces_, y);
  // Reduce to a full-dimensional problem inside the affine hull.
  const RVector& base = vertices_.front();
  RMatrix dirs = linalg::row_basis([&] {
    RMatrix d;
    for (size_t i = 1; i < vertices_.size(); ++i) d.push_back(vertices_[i] - base);
    return d;
  }());
  if (dirs.empty()) return y == base;
  auto local = [&](const RVector& p) { return linalg::coordinates(dirs, p - base); };
  auto yc = local(y);
  if (!yc) return false;
  std::vector<RVector> pts;
  for (const auto& v : vertices_) pts.push_back(*local(v));
  return from_vertices(static_cast<int>(dirs.size()), std::move(pts)).contains(*yc);
}

bool RationalPolytope::contains_in_interior(const RVector& y) const {
  if (!is_full_dimensional()) return false;
  for (const auto& h : halfspaces_) {
    if (!(dot(h.normal, y) < h.offset)) return false;
  }
  return true;
}

RationalPolytope RationalPolytope::translated(const RVector& shift) const {
  RationalPolytope p = *this;
  for (auto& v : p.vertices_) v = v + shift;
  for (auto& h : p.halfspaces_) h.offset += dot(h.normal, shift);
  return p;
}

RationalPolytope RationalPolytope::scaled(const Rational& factor) const {
  if (!(factor > 0)) throw Error(ErrorKind::NonpositiveScale, "polytope scale factor must be positive");
  RationalPolytope p = *this;
  for (auto& v : p.vertices_) v = factor * v;
  for (auto& h : p.halfspaces_) h.offset *= factor;
  return p;
}

RationalPolytope RationalPolytope::projected(int r) const {
  if (r < 1 || r > dim_) throw Error(ErrorKind::DimensionMismatch, "projection rank out of range");
  std::vector<RVector> pts;
  for (const auto& v : vertices_) pts.emplace_back(v.begin(), v.begin() + r);
  return from_vertices(r, std::move(pts));
}

// ---------------------------------------------------------------- operations

std::vector<Simplex> triangulate(const RationalPolytope& p) {
  if (!p.is_full_dimensional()) throw Error(ErrorKind::DegeneratePolytope, "triangulation requires a full-dimensional polytope");
  const auto& verts = p.vertices();
  std::vector<int> all(verts.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<int>> cells;
  triangulate_face(verts, p.halfspaces(), all, p.dim(), cells);
  std::vector<Simplex> out;
  out.reserve(cells.size());
  for (const auto& c : cells) {
    std::vector<RVector> vs;
    for (int i : c) vs.push_back(verts[static_cast<size_t>(i)]);
    out.emplace_back(std::move(vs));
  }
  return out;
}

Rational volume(const RationalPolytope& p) {
  if (!p.is_full_dimensional()) return 0;
  Rational v = 0;
  for (const auto& s : triangulate(p)) v += s.volume();
  return v;
}

std::vector<Simplex> halfspace_slice(const Simplex& s, const AffineForm& h, const Rational& level) {
  const auto& vs = s.vertices();
  std::vector<Rational> val;
  val.reserve(vs.size());
  bool all_above = true;
  bool any_above = false;
  for (const auto& v : vs) {
    val.push_back(h(v) - level);
    if (val.back() < 0) all_above = false;
    if (val.back() > 0) any_above = true;
  }
  if (all_above) return {s};
  if (!any_above) return {};
  std::vector<RVector> pts;
  for (size_t i = 0; i < vs.size(); ++i) {
    if (val[i] >= 0) pts.push_back(vs[i]);
    for (size_t j = i + 1; j < vs.size(); ++j) {
      if ((val[i] > 0 && val[j] < 0) || (val[i] < 0 && val[j] > 0)) {
        Rational t = val[i] / (val[i] - val[j]);
        pts.push_back(vs[i] + t * (vs[j] - vs[i]));
      }
    }
  }
  RationalPolytope piece = RationalPolytope::from_vertices(s.dim(), std::move(pts));
  if (!piece.is_full_dimensional()) return {};
  return triangulate(piece);
}

RVector barycenter(const RationalPolytope& p) {
  if (!p.is_full_dimensional()) throw Error(ErrorKind::DegeneratePolytope, "barycenter requires a full-dimensional polytope");
  RVector acc(static_cast<size_t>(p.dim()), Rational(0));
  Rational total = 0;
  for (const auto& s : triangulate(p)) {
    RVector c(static_cast<size_t>(p.dim()), Rational(0));
    for (const auto& v : s.vertices()) c = c + v;
    acc = acc + (s.volume() / Rational(p.dim() + 1)) * c;
    total += s.volume();
  }
  return (Rational(1) / total) * acc;
}

}  // namespace nadeg
