#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nadeg/divided_difference.hpp"
#include "nadeg/geometry.hpp"

namespace nadeg {

struct ExpIntegralResult {
  long double value = 0;
  double est_rel_error = 0;
  ExpMethod method = ExpMethod::divided_difference;
};

struct EvalOptions {
  /// Force an evaluation path. `subdivision` splits the simplex once along
  /// its edge of largest value spread and integrates both halves.
  std::optional<ExpMethod> force;
};

// Node spreads above this are split before evaluation to keep exp() in range.
inline constexpr long double kSubdivisionSpread = 5000.0L;

/// ∫_s e^{-ℓ(y)} dy = n!·vol(s)·[-ℓ(v_0), ..., -ℓ(v_n)] exp.
ExpIntegralResult simplex_exp_integral(const Simplex& s, const AffineForm& l, EvalOptions opts = {});

/// ∫_s w(y)^k e^{-ℓ(y)} dy for 0 ≤ k ≤ 4.
ExpIntegralResult simplex_weighted_exp_integral(const Simplex& s, const AffineForm& l, const AffineForm& w, int k,
                                                EvalOptions opts = {});

/// Value-level kernels: `values[i]` is ℓ at vertex i and `weights[i]` is w at
/// vertex i; `measure` is n!·vol of the simplex.
ExpIntegralResult exp_integral_from_values(long double measure, std::span<const long double> values,
                                           EvalOptions opts = {});
ExpIntegralResult weighted_exp_integral_from_values(long double measure, std::span<const long double> values,
                                                    std::span<const long double> weights, int k, EvalOptions opts = {});

struct PLCell {
  Simplex simplex;
  AffineForm affine;
};

/// Piecewise-linear function given by affine pieces on a triangulation.
class PLConcaveFunction {
 public:
  /// Validates continuity at shared vertices and that the cells tile their
  /// convex hull. With `certify_concave`, also checks that the function equals
  /// the minimum of its pieces (throws InvalidInput otherwise).
  explicit PLConcaveFunction(std::vector<PLCell> cells, bool certify_concave = false);

  /// One affine piece over a triangulation of `domain`.
  static PLConcaveFunction affine_on(const RationalPolytope& domain, const AffineForm& f);
  /// y ↦ min_j f_j(y) on `domain`; carries the concavity certificate.
  static PLConcaveFunction min_of_affine(const RationalPolytope& domain, const std::vector<AffineForm>& pieces);

  int dim() const { return domain_.dim(); }
  const std::vector<PLCell>& cells() const { return cells_; }
  const RationalPolytope& domain() const { return domain_; }
  bool concave_certified() const { return certified_; }

  /// Value at a point of the domain (first containing cell).
  Rational operator()(const RVector& y) const;
  Rational min_value() const;
  Rational max_value() const;

  /// a·G + b
  PLConcaveFunction transformed(const Rational& a, const Rational& b) const;
  /// G + ⟨y', ξ⟩ with ξ paired against the first ξ.size() coordinates.
  PLConcaveFunction twisted(const RVector& xi) const;

 private:
  PLConcaveFunction(RationalPolytope domain, std::vector<PLCell>&& cells, bool certified);

  RationalPolytope domain_;
  std::vector<PLCell> cells_;
  bool certified_ = false;
};

/// ∫_Δ e^{-(G(y) + shift(y))} dy summed over cells in canonical order.
ExpIntegralResult pl_exp_integral(const PLConcaveFunction& g, const AffineForm& shift, EvalOptions opts = {});

/// Floating-point exponent a·G(y) + ⟨y', ξ⟩.
struct PLExponent {
  long double scale = 1;
  std::vector<double> xi;
};

/// Floating-point weight c_G·G(y) + ⟨y', η⟩ + c.
struct PLWeight {
  long double transform = 0;
  std::vector<double> eta;
  long double constant = 0;
};

/// ∫_Δ w(y)^k e^{-(a G(y) + ⟨y', ξ⟩)} dy.
ExpIntegralResult pl_integral(const PLConcaveFunction& g, const PLExponent& exponent, const PLWeight& weight = {},
                              int k = 0, EvalOptions opts = {});

/// n!·∫_{G ≥ x} e^{-⟨y', ξ⟩} dy.
double superlevel_gvolume(const PLConcaveFunction& g, const Rational& x, std::span<const double> xi);

/// Worker threads used for cell integrals. Results do not depend on it.
void set_thread_count(int n);
int thread_count();

}  // namespace nadeg
