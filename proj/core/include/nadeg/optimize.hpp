#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "nadeg/filtration.hpp"
#include "nadeg/functionals.hpp"
#include "nadeg/geometry.hpp"
#include "nadeg/measure.hpp"

namespace nadeg {

struct OptResult {
  std::vector<double> argmin;
  double value = 0;
  double grad_norm = 0;
  double hessian_min_eig = 0;
  int iterations = 0;
  bool converged = false;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 100;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double max_condition = 1e12;
};

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using HessianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Damped Newton with Armijo backtracking; gradient steps when the Hessian
/// condition number exceeds opts.max_condition. Never throws on
/// non-convergence: `converged` reports grad_norm ≤ tol.
OptResult newton_minimize(const ObjectiveFn& f, const GradientFn& grad, const HessianFn& hess, Eigen::VectorXd x0,
                          const NewtonOptions& opts = {});

/// Minimizer of ξ ↦ log((n!/V)∫_Δ e^{-⟨y',ξ⟩} dy) with y' the first r
/// coordinates. The value is H(wt_ξ*) = -S̃(wt_ξ*).
OptResult soliton_vector(const RationalPolytope& delta, int r, const NewtonOptions& opts = {});

/// f(a) = aA + log((1/V)∫e^{-ax} dμ) with f' and f''.
struct RescaleEval {
  double f = 0;
  double df = 0;
  double d2f = 0;
};
RescaleEval rescale_eval(double a_x, const DHMeasure& mu, double a);

inline constexpr double kDiracVariance = 1e-14;

/// Minimizes f over a ≥ 0. a_* = 0 when β = A - E ≥ 0. When the variance at
/// a = 1 is below kDiracVariance the objective is affine: argmin = +inf,
/// value = -inf, converged = false.
OptResult rescale_opt(double a_x, const DHMeasure& mu, const NewtonOptions& opts = {});

/// Minimizes ξ ↦ mean over m of [L - S̃(twist(F, ξ)) at level m] using the
/// empirical measures ν_m (n = ambient dimension).
OptResult twist_opt(const GradedFiltration& f, const std::vector<int>& degrees, const LPolicy& l, int n,
                    std::optional<std::vector<double>> x0 = std::nullopt, const NewtonOptions& opts = {});

struct DerivativeCheck {
  double analytic = 0;
  double finite_difference = 0;
};

/// Ĥ(F_s) = s·L̂ + log((n!/V)∫_Δ e^{-((1-s)⟨y',ξ⟩ + s G(y))} dy)
double interpolation_hhat(const PLConcaveFunction& g, const std::vector<double>& xi, double l_hat, double s);
/// Analytic d/ds Ĥ(F_s) at 0 and a second-order forward difference over s ∈ {0, h, 2h}.
DerivativeCheck interpolation_derivative(const PLConcaveFunction& g, const std::vector<double>& xi, double l_hat,
                                         double h = 1e-4);

/// Finite-level version on ν_m with atoms shifted by ⟨α/m, ξ⟩.
double interpolation_hhat(const GradedFiltration& f, int m, const std::vector<double>& xi, double l_hat, double s);
DerivativeCheck interpolation_derivative(const GradedFiltration& f, int m, const std::vector<double>& xi, double l_hat,
                                         double h = 1e-4);

struct ConvexScan {
  std::vector<double> s;
  std::vector<double> values;
  std::optional<double> derivative_at_start;

  /// f((s_{i-1}+s_{i+1})/2)-type check on consecutive triples, using linear
  /// interpolation for non-uniform grids.
  bool midpoint_convex(double tol = 1e-10) const;
};

/// f(s) = A^{n+1}·(1/mass)·∫ dμ(x) / (s x + (1-s) A)^{n+1}
double cone_value(double a_x, const DHMeasure& mu, int n, double s);
std::vector<double> default_s_grid();
/// Values of f on s_grid and f'(0) = (n+1)(A - E)/A.
ConvexScan cone_family(double a_x, const DHMeasure& mu, int n, const std::vector<double>& s_grid = default_s_grid());

/// V_g/τ^{n+1} - (n+1)∫_0^T volg(x)/(x+τ)^{n+2} dx; volg vanishes beyond T and
/// may jump at the given breakpoints.
double vol_g_tau(double v_g, const std::function<double(double)>& volg, double tau, int n, double support_end,
                 const std::vector<double>& breakpoints = {});

}  // namespace nadeg
