#include "rlsm/simulate.hpp"

#include <cmath>

#include "rlsm/diagnostics.hpp"

namespace rlsm {

void SimDesign::validate() const {
  if (n < 2 || d < 1) throw ValidationError("design needs n >= 2 and d >= 1");
  if (!(sigma_s2 > 0.0 && sigma_r2 > 0.0 && mixture_var > 0.0))
    throw ValidationError("design variances must be positive");
  if (!(gamma_sr > -1.0 && gamma_sr < 1.0)) throw ValidationError("gamma_sr must lie in (-1, 1)");
  if (!(target_density > 0.0 && target_density < 1.0))
    throw ValidationError("target_density must lie in (0, 1)");
  if (!(phi_low <= phi_high)) throw ValidationError("phi range is empty");
  if (!(target_mean_odds_ratio > 0.0)) throw ValidationError("target odds ratio must be positive");
  if (mixture_means.empty()) throw ValidationError("mixture needs at least one component");
  for (const auto& m : mixture_means)
    if (m.size() != d) throw ValidationError("mixture means must have dimension d");
}

ModelParamsd draw_truth(const SimDesign& design, Rng& rng) {
  design.validate();
  ModelParamsd theta = ModelParamsd::Zero(design.n, design.d);
  const double sd_s = std::sqrt(design.sigma_s2);
  const double sd_r = std::sqrt(design.sigma_r2);
  const double resid = std::sqrt(1.0 - design.gamma_sr * design.gamma_sr);
  for (int i = 0; i < design.n; ++i) {
    const double e1 = rng.normal();
    const double e2 = rng.normal();
    theta.s(i) = sd_s * e1;
    theta.r(i) = sd_r * (design.gamma_sr * e1 + resid * e2);
  }
  const double sd_z = std::sqrt(design.mixture_var);
  const auto components = static_cast<std::uint64_t>(design.mixture_means.size());
  for (int i = 0; i < design.n; ++i) {
    const auto& centre = design.mixture_means[rng.below(components)];
    for (int k = 0; k < design.d; ++k) theta.z(i, k) = centre(k) + sd_z * rng.normal();
  }
  theta.phi = rng.uniform(design.phi_low, design.phi_high);
  theta.rho = 0.0;
  return theta;
}

double expected_density(const ModelParamsd& theta) {
  const int n = theta.num_nodes();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto p = dyad_probabilities(natural_params(theta, i, j));
      total += 2.0 * p.p_mutual + p.p_out + p.p_in;
    }
  }
  return total / (static_cast<double>(n) * (n - 1));
}

double mean_latent_distance(const ModelParamsd& theta) {
  const int n = theta.num_nodes();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) total += latent_distance(theta, i, j);
  return total / (0.5 * n * (n - 1));
}

double calibrate_mu_sr(const ModelParamsd& truth, const SimDesign& design) {
  auto density_at = [&truth](double shift) {
    ModelParamsd shifted = truth;
    shifted.s.array() += shift;
    shifted.r.array() += shift;
    return expected_density(shifted);
  };
  double lo = -20.0, hi = 20.0;
  const double target = design.target_density;
  if (!(density_at(lo) < target && density_at(hi) > target))
    throw std::runtime_error("calibrate_mu_sr: target density not bracketed by [-20, 20]");
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (density_at(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double calibrate_rho(const ModelParamsd& truth, const SimDesign& design) {
  if (design.rho_fixed) return *design.rho_fixed;
  const double log_target = std::log(design.target_mean_odds_ratio);
  if (design.odds_calibration == OddsRatioCalibration::kMeanLogOdds)
    return log_target - truth.phi * mean_latent_distance(truth);
  const int n = truth.num_nodes();
  double mean_odds = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) mean_odds += std::exp(truth.phi * latent_distance(truth, i, j));
  mean_odds /= 0.5 * n * (n - 1);
  return log_target - std::log(mean_odds);
}

SimInstance generate(const SimDesign& design) {
  Rng rng(design.seed, 0);
  SimInstance out;
  out.truth = draw_truth(design, rng);
  // rho does not depend on the shift, while the density depends on rho, so
  // rho is calibrated first.
  out.truth.rho = calibrate_rho(out.truth, design);
  out.mu_sr = calibrate_mu_sr(out.truth, design);
  out.truth.s.array() += out.mu_sr;
  out.truth.r.array() += out.mu_sr;
  out.expected_density = expected_density(out.truth);
  Rng network_rng(design.seed, 1);
  out.net = simulate_from_params(out.truth, network_rng);
  out.realized_density = summarize(out.net).density;
  out.realized_mean_rho_ij = out.truth.rho + out.truth.phi * mean_latent_distance(out.truth);
  return out;
}

}  // namespace rlsm
