#include <cmath>
#include <limits>

#include "nadeg/optimize.hpp"

namespace nadeg {

namespace {

double min_eig(const Eigen::MatrixXd& h) {
  if (h.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

OptResult newton_minimize(const ObjectiveFn& f, const GradientFn& grad, const HessianFn& hess, Eigen::VectorXd x,
                          const NewtonOptions& opts) {
  OptResult r;
  double fx = f(x);
  Eigen::VectorXd g = grad(x);
  int it = 0;
  for (; it < opts.max_iter && g.norm() > opts.tol; ++it) {
    const Eigen::MatrixXd h = hess(x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const auto& ev = es.eigenvalues();
    Eigen::VectorXd step;
    const bool well_conditioned = ev.minCoeff() > 0 && ev.maxCoeff() / ev.minCoeff() <= opts.max_condition;
    if (well_conditioned) {
      step = -es.eigenvectors() * (es.eigenvectors().transpose() * g).cwiseQuotient(ev);
    } else {
      step = -g;
    }
    const double slope = g.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      Eigen::VectorXd trial = x + t * step;
      const double ft = f(trial);
      if (std::isfinite(ft) && ft <= fx + opts.armijo * t * slope) {
        x = trial;
        fx = ft;
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) {
      // roundoff floor: f cannot decrease further, take the full step if it
      // still reduces the gradient
      Eigen::VectorXd trial = x + step;
      Eigen::VectorXd gt = grad(trial);
      if (gt.norm() < g.norm()) {
        x = trial;
        fx = f(x);
        g = gt;
        continue;
      }
      break;
    }
    g = grad(x);
  }
  r.argmin.assign(x.data(), x.data() + x.size());
  r.value = fx;
  r.grad_norm = g.norm();
  r.hessian_min_eig = std::max(0.0, min_eig(hess(x)));
  r.iterations = it;
  r.converged = r.grad_norm <= opts.tol;
  return r;
}

}  // namespace nadeg
