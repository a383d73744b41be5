#pragma once

#include <map>
#include <string>
#include <vector>

#include "nadeg/measure.hpp"
#include "nadeg/rational.hpp"

namespace nadeg {

/// F^value is the row space of `rows`.
struct FlagStep {
  Rational value;
  RMatrix rows;
};

/// One degree of a filtration, stored through an adapted basis: a basis
/// (s_j) of R_m with values μ_j such that F^λ R_m = span{s_j : μ_j ≥ λ}.
class FiltrationLevel {
 public:
  /// Standard basis e_j with value values[j].
  static FiltrationLevel from_values(int degree, RVector values, std::vector<RVector> weights = {});
  /// Rows of `basis` with the given values.
  static FiltrationLevel from_basis(int degree, RMatrix basis, RVector values, std::vector<RVector> weights = {});
  /// Flag with strictly decreasing values and nested, increasing row spaces;
  /// the last step must span the whole space.
  static FiltrationLevel from_flags(int degree, int dim, std::vector<FlagStep> flags);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(values_.size()); }
  const RMatrix& basis() const { return basis_; }
  const RVector& values() const { return values_; }
  bool has_weights() const { return !weights_.empty(); }
  const std::vector<RVector>& weights() const { return weights_; }
  int torus_rank() const { return weights_.empty() ? 0 : static_cast<int>(weights_.front().size()); }

  /// max{λ : v ∈ F^λ}: the minimum of μ_j over the support of v in the basis.
  Rational value_of(const RVector& v) const;
  /// Distinct values, descending, each with a basis of F^value.
  std::vector<FlagStep> flags() const;

  /// μ ↦ a·μ + b·m
  FiltrationLevel rescaled(const Rational& a, const Rational& b) const;
  /// μ_j ↦ μ_j + ⟨α_j, ξ⟩
  FiltrationLevel twisted(const RVector& xi) const;

 private:
  int degree_ = 1;
  RMatrix basis_;
  RVector values_;
  std::vector<RVector> weights_;
};

class GradedFiltration {
 public:
  GradedFiltration() = default;
  explicit GradedFiltration(std::string label) : label_(std::move(label)) {}

  void set_level(FiltrationLevel lv);
  const FiltrationLevel& level(int m) const;
  bool has_level(int m) const { return levels_.count(m) > 0; }
  const std::map<int, FiltrationLevel>& levels() const { return levels_; }
  std::vector<int> degrees() const;
  const std::string& label() const { return label_; }

 private:
  std::string label_;
  std::map<int, FiltrationLevel> levels_;
};

/// Descending multiset of jump values.
RVector successive_minima(const FiltrationLevel& lv);

GradedFiltration rescale_shift(const GradedFiltration& f, const Rational& a, const Rational& b);
GradedFiltration twist(const GradedFiltration& f, const RVector& xi);

/// ν_m: atoms λ_i/m of mass n!/m^n carrying torus weights α_i/m.
DHMeasure empirical_dh(const GradedFiltration& f, int m, int n);

struct CommonBasis {
  RMatrix basis;
  std::vector<std::pair<Rational, Rational>> values;  // (μ_{k,0}, μ_{k,1})
};

/// A basis adapted to both filtrations of the same space.
CommonBasis common_adapted_basis(const FiltrationLevel& lv0, const FiltrationLevel& lv1);

/// Ascending multiset {μ_{k,1} − μ_{k,0}}.
RVector relative_minima(const GradedFiltration& f0, const GradedFiltration& f1, int m);

double d_p_level(const GradedFiltration& f0, const GradedFiltration& f1, int m, double p);
/// d_2(m)^2 = (1/N_m)·Σ (Δμ_k/m)^2, exactly.
Rational d2_squared_level(const GradedFiltration& f0, const GradedFiltration& f1, int m);

struct DpSequence {
  std::vector<int> degrees;
  std::vector<double> values;
  double extrapolated = 0;  // intercept of a least-squares line in 1/m
};
DpSequence d_p_sequence(const GradedFiltration& f0, const GradedFiltration& f1, const std::vector<int>& degrees, double p);

/// Q_m = (1/N_m)·Σ e^{-λ_i/m}
double q_m(const GradedFiltration& f, int m);
double psi_m(const GradedFiltration& f, int m);
/// (1/N_m)·Σ_j e^{-v(s_j)/m} for an arbitrary basis (rows) of R_m.
double q_of_basis(const GradedFiltration& f, int m, const RMatrix& basis);

/// Stored pairs (m1, m2, m1 + m2) violating λ_max(m1 + m2) ≥ λ_max(m1) + λ_max(m2).
std::vector<std::string> superadditivity_warnings(const GradedFiltration& f);

/// Polynomial ring in `num_vars` variables; degree-m monomials in graded-lex
/// order (x_0^m first).
class MonomialModel {
 public:
  explicit MonomialModel(int num_vars);
  int num_vars() const { return num_vars_; }
  std::vector<std::vector<int>> monomials(int m) const;
  int dimension(int m) const;

 private:
  int num_vars_;
};

/// F_0 = weight filtration of w: the value of a monomial x^a is ⟨a, w⟩ and the
/// value of a polynomial is the minimum over its monomials. Torus weight of
/// x^a is ⟨a, w⟩ (rank 1).
FiltrationLevel weight_filtration(const MonomialModel& model, const std::vector<long>& w, int m);

/// F'_1 on the associated graded of F_0 at degree m: F'_1^λ is spanned by the
/// lowest-weight parts of the elements of F_1^λ. The result carries the rank-1
/// torus weight ⟨a, w⟩ so that twist(F'_1, -1) has the relative minima of
/// (F_0, F_1) as successive minima.
GradedFiltration initial_term_degeneration(const MonomialModel& model, const std::vector<long>& w,
                                           const GradedFiltration& f1, int m);

}  // namespace nadeg
