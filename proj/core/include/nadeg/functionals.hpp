#pragma once

#include <array>
#include <utility>
#include <vector>

#include "nadeg/filtration.hpp"
#include "nadeg/geometry.hpp"
#include "nadeg/measure.hpp"

namespace nadeg {

/// Where the L^NA term comes from.
struct LPolicy {
  enum class Kind { supplied, weight_twist, special_valuation };
  Kind kind = Kind::supplied;
  double value = 0;  // supplied L, or A(v) for special valuations

  static LPolicy supplied(double l) { return {Kind::supplied, l}; }
  static LPolicy weight_twist() { return {Kind::weight_twist, 0}; }
  static LPolicy special_valuation(double a);

  double L() const { return kind == Kind::weight_twist ? 0.0 : value; }
};

const char* to_string(LPolicy::Kind k);

inline constexpr double kConsistencyTol = 1e-10;

struct NAReport {
  double V = 0;
  double E = 0;
  std::array<double, 5> E_k{};  // E_k[k] = moment k, k = 0..4
  double S_tilde = 0;
  double L = 0;
  double H = 0;
  double D = 0;
  std::vector<std::pair<double, double>> Q;  // (a, Q^(a))
  bool normalized = false;                   // |L| ≤ tol
  bool s_tilde_le_e = false;                 // S̃ ≤ E + tol
  double tol = kConsistencyTol;
};

NAReport na_report(const DHMeasure& mu, const LPolicy& l, const std::vector<double>& a_list = {},
                   double tol = kConsistencyTol);

/// S̃ = -log((1/V)∫ e^{-λ} dμ)
double tilde_S(const DHMeasure& mu);

/// β̃ = A + log((1/V)∫ e^{-λ} dμ) = A - S̃
double tilde_beta(double a, const DHMeasure& mu);

/// β_g = A - E_g for μ_g supported in [0, ∞).
double beta_g(double a, const DHMeasure& mu_g, double tol = kConsistencyTol);

/// H(wt_ξ) = log((n!/V)∫_Δ e^{-⟨y',ξ⟩} dy), ξ paired with the first ξ.size() coordinates.
double h_weight(const RationalPolytope& delta, const std::vector<double>& xi);

/// Fut_ξ(η) = -(n!/V_ξ)∫_Δ ⟨y',η⟩ e^{-⟨y',ξ⟩} dy
double fut(const RationalPolytope& delta, const std::vector<double>& xi, const std::vector<double>& eta);

/// a·Σ e_i Q_i / Q for a decomposition Q = Σ Q_i.
double ds_tilde_S(const std::vector<std::pair<double, double>>& components, double a, double q, double tol = kConsistencyTol);

struct EkFit {
  Rational coefficient;  // m^{n+k} coefficient of Σ_i (λ_i^{(m)})^k
  Rational estimate;     // coefficient·n!/V
};

/// Exact least-squares fit of m ↦ Σ_i (λ_i^{(m)})^k by a polynomial of degree n+k.
EkFit ek_from_minima_polynomial(const GradedFiltration& f, const std::vector<int>& degrees, int k, int n, const Rational& v);

}  // namespace nadeg
