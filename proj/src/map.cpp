#include <cmath>
#include <deque>
#include <limits>

#include "rlsm/parameterization.hpp"
#include "rlsm/sampler.hpp"

namespace rlsm {

OptimizerResult lbfgs_maximize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
    const OptimizerOptions& options) {
  // Works on the negated objective.
  Eigen::VectorXd grad(x0.size());
  double value = -f(x0, grad);
  grad = -grad;
  OptimizerResult best{x0, -value, grad.cwiseAbs().maxCoeff(), 0, false};
  if (!std::isfinite(value)) return best;

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd next_x, next_grad(x.size());
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    best.iterations = iter;
    if (grad.cwiseAbs().maxCoeff() < options.gradient_tolerance) {
      best.converged = true;
      break;
    }
    // two-loop recursion
    Eigen::VectorXd direction = -grad;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(direction);
      direction -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty())
      direction *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(direction);
      direction += (alpha[k] - beta) * s_hist[k];
    }
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      direction = -grad;
      slope = -grad.squaredNorm();
    }
    double step = s_hist.empty() ? std::min(1.0, 1.0 / grad.cwiseAbs().maxCoeff()) : 1.0;
    double next_value = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int trial = 0; trial < 60; ++trial, step *= 0.5) {
      next_x = x + step * direction;
      next_value = -f(next_x, next_grad);
      if (std::isfinite(next_value) && next_value <= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    next_grad = -next_grad;
    Eigen::VectorXd s = next_x - x;
    Eigen::VectorXd y = next_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = next_x;
    grad = next_grad;
    value = next_value;
    if (-value >= best.value) {
      best.x = x;
      best.value = -value;
      best.gradient_max_norm = grad.cwiseAbs().maxCoeff();
    }
  }
  if (grad.cwiseAbs().maxCoeff() < options.gradient_tolerance) best.converged = true;
  return best;
}

MapEstimate map_estimate(const DirectedNetwork& net, int d, const PriorConstantsd& c,
                         const InitReport& init, Variant variant, const OptimizerOptions& options) {
  const PosteriorDensity density(net, d, variant, c);
  const ParameterLayout& layout = density.layout();
  ModelParamsd theta0 = init.theta0;
  if (!estimates_rho(variant)) theta0.rho = 0.0;
  if (!estimates_phi(variant)) theta0.phi = 0.0;
  Eigen::VectorXd full = layout.pack(theta0, init.nu0);

  // The joint density is unbounded as gamma_sr -> +-1 with s and r exactly
  // proportional, so the hyperparameters stay at their starting values and
  // only theta is optimized.
  const int free = layout.mu_offset();
  const auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    full.head(free) = x;
    Eigen::VectorXd g;
    const double value = density.evaluate(full, &g, false);
    grad = g.head(free);
    return value;
  };
  const OptimizerResult opt = lbfgs_maximize(objective, full.head(free), options);
  full.head(free) = opt.x;

  MapEstimate out;
  layout.unpack(full, out.theta, out.nu);
  out.log_posterior = opt.value;
  out.gradient_max_norm = opt.gradient_max_norm;
  out.iterations = opt.iterations;
  out.converged = opt.converged;
  if (!opt.converged)
    out.warnings.push_back("map: gradient max-norm " + std::to_string(opt.gradient_max_norm) +
                           " above tolerance after " + std::to_string(opt.iterations) +
                           " iterations; returning best point visited");
  return out;
}

}  // namespace rlsm
