#pragma once

#include <vector>

#include "nadeg/rational.hpp"

namespace nadeg {

/// y ↦ ⟨gradient, y⟩ + constant.
struct AffineForm {
  RVector gradient;
  Rational constant = 0;

  Rational operator()(const RVector& y) const;

  static AffineForm zero(int dim);
  /// y ↦ y[index]
  static AffineForm coordinate(int dim, int index);
  /// y ↦ Σ_{j < xi.size()} xi[j] y[j]: pairing against the first r coordinates.
  static AffineForm pairing(int dim, const RVector& xi);
};

AffineForm operator+(const AffineForm& a, const AffineForm& b);
AffineForm operator*(const Rational& s, const AffineForm& a);

/// n+1 affinely independent points in Q^n.
class Simplex {
 public:
  explicit Simplex(std::vector<RVector> vertices);

  int dim() const { return dim_; }
  const std::vector<RVector>& vertices() const { return vertices_; }
  /// Exact Lebesgue volume |det(v_i - v_0)| / n!.
  const Rational& volume() const { return volume_; }

 private:
  int dim_;
  std::vector<RVector> vertices_;
  Rational volume_;
};

/// {y : ⟨normal, y⟩ ≤ offset}
struct Halfspace {
  RVector normal;
  Rational offset;
};

/// Bounded convex polytope with both vertex and halfspace descriptions.
///
/// Lower-dimensional polytopes are representable (volume 0) but carry no
/// facet list; operations that need one throw DegeneratePolytope.
class RationalPolytope {
 public:
  static RationalPolytope from_vertices(int dim, std::vector<RVector> points);
  static RationalPolytope from_halfspaces(int dim, std::vector<Halfspace> halfspaces);
  /// Both descriptions given: each is recomputed from the other and compared.
  static RationalPolytope from_both(int dim, std::vector<RVector> vertices, std::vector<Halfspace> halfspaces);

  static RationalPolytope interval(const Rational& lo, const Rational& hi);
  static RationalPolytope box(const RVector& lo, const RVector& hi);
  static RationalPolytope standard_simplex(int dim);

  int dim() const { return dim_; }
  int affine_dim() const { return affine_dim_; }
  bool is_full_dimensional() const { return affine_dim_ == dim_; }
  /// Extreme points, sorted lexicographically.
  const std::vector<RVector>& vertices() const { return vertices_; }
  /// Facet inequalities (for full-dimensional polytopes: one per facet, with
  /// primitive integer normals).
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

  bool contains(const RVector& y) const;
  bool contains_in_interior(const RVector& y) const;

  RationalPolytope translated(const RVector& shift) const;
  RationalPolytope scaled(const Rational& factor) const;
  /// Image under the coordinate projection onto the first r coordinates.
  RationalPolytope projected(int r) const;

 private:
  RationalPolytope() = default;

  int dim_ = 0;
  int affine_dim_ = 0;
  std::vector<RVector> vertices_;
  std::vector<Halfspace> halfspaces_;
};

/// Pulling triangulation: fan from the lexicographically smallest vertex over
/// a recursive triangulation of the facets not containing it.
std::vector<Simplex> triangulate(const RationalPolytope& p);

Rational volume(const RationalPolytope& p);

/// Triangulation of s ∩ {h ≥ level}; empty when the intersection is
/// lower-dimensional.
std::vector<Simplex> halfspace_slice(const Simplex& s, const AffineForm& h, const Rational& level);

RVector barycenter(const RationalPolytope& p);

/// Affine dimension of a point set.
int affine_dimension(const std::vector<RVector>& points);

}  // namespace nadeg
