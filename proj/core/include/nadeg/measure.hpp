#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nadeg/expint.hpp"
#include "nadeg/rational.hpp"

namespace nadeg {

struct Atom {
  Rational pos;
  Rational mass;
  RVector weight;  // torus weight, empty when absent
};

struct SupportInfo {
  double lambda_min = 0;
  double lambda_max = 0;
  bool atom_at_max = false;
};

/// Spectral measure: finitely many atoms, or n!·G_*(e^{-⟨y',ξ⟩} dy) for a PL
/// transform G on its domain Δ.
class DHMeasure {
 public:
  static DHMeasure atomic(std::vector<Atom> atoms);
  static DHMeasure dirac(const Rational& at, const Rational& mass = 1);
  static DHMeasure pushforward(PLConcaveFunction g, std::vector<double> xi = {});
  /// Lebesgue measure on [lo, hi] (pushforward of y ↦ y).
  static DHMeasure uniform(const Rational& lo, const Rational& hi);

  bool is_atomic() const { return !g_.has_value(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const PLConcaveFunction& transform() const;
  const std::vector<double>& xi() const { return xi_; }
  /// Ambient dimension n of Δ (pushforward only; 0 for atomic measures).
  int dim() const { return g_ ? g_->dim() : 0; }

 private:
  std::vector<Atom> atoms_;
  std::optional<PLConcaveFunction> g_;
  std::vector<double> xi_;
};

double mass(const DHMeasure& mu);
/// (1/mass)·∫ λ^k dμ for 0 ≤ k ≤ 4.
double moment(const DHMeasure& mu, int k);
/// (1/mass)·∫ e^{-aλ} dμ.
double exp_moment(const DHMeasure& mu, double a);
/// log of exp_moment, computed without overflow.
double log_exp_moment(const DHMeasure& mu, double a);

/// Moments of the tilted probability measure e^{-aλ}dμ / ∫e^{-aλ}dμ.
struct TiltedMoments {
  double log_partition = 0;  // log((1/mass)∫ e^{-aλ} dμ)
  double mean = 0;
  double variance = 0;
};
TiltedMoments tilted_moments(const DHMeasure& mu, double a);

DHMeasure affine_transform(const DHMeasure& mu, const Rational& a, const Rational& b);

SupportInfo support(const DHMeasure& mu);

/// Normalized distribution function μ(λ ≤ x) / mass.
double cdf(const DHMeasure& mu, double x);
/// W1 between the normalized measures.
double wasserstein1(const DHMeasure& a, const DHMeasure& b);

/// ∫ φ dμ (not normalized). Pushforward measures need φ' as well: the
/// integral is computed by parts against the superlevel volume.
double integrate(const DHMeasure& mu, const std::function<double(double)>& phi,
                 const std::function<double(double)>& dphi);

/// "x,cdf" rows at `samples` equispaced points over the support.
std::string cdf_csv(const DHMeasure& mu, int samples);

}  // namespace nadeg
