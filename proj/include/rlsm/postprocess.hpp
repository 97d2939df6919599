#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rlsm/model.hpp"
#include "rlsm/sampler.hpp"

namespace rlsm {

struct ProcrustesResult {
  Eigen::MatrixXd aligned;      // source * rotation + translation (row-wise)
  Eigen::MatrixXd rotation;     // d x d orthogonal, reflections allowed
  Eigen::RowVectorXd translation;
  bool rank_deficient = false;
};

/// Orthogonal Procrustes: the O minimising |reference - (source - t) O|_F via
/// the SVD of the cross-product matrix. With `allow_translation` both
/// configurations are centered first and the reference centroid restored.
ProcrustesResult procrustes_align(const Eigen::MatrixXd& source, const Eigen::MatrixXd& reference,
                                  bool allow_translation = true);

/// Every draw's latent positions matched to `reference` (rotation,
/// reflection and translation).
PosteriorChain align_chain(PosteriorChain chain, const Eigen::MatrixXd& reference);

struct ParameterSummary {
  double mean = 0.0;
  double sd = 0.0;
  double lower = 0.0;  // 2.5% quantile
  double upper = 0.0;  // 97.5% quantile
};

struct PosteriorSummary {
  // Keys: rho, phi, mu_sr, sigma_s2, sigma_r2, gamma_sr, sigma_z2, s_<i>, r_<i>, z_<i>_<k>.
  std::map<std::string, ParameterSummary> parameters;
  std::vector<std::string> order;  // insertion order of `parameters`
  double prob_phi_negative = 0.0;
  double prob_phi_unit_interval = 0.0;  // 0 < phi < 1
  double prob_phi_above_one = 0.0;
  int num_draws = 0;

  const ParameterSummary& at(const std::string& key) const { return parameters.at(key); }
};

/// Linear-interpolation quantile (type 7) of an unsorted sample.
double quantile(std::vector<double> values, double prob);

PosteriorSummary summarize_posterior(const PosteriorChain& chain, int min_draws = 100);

/// Posterior mean of every parameter (theta and nu).
Draw posterior_mean(const PosteriorChain& chain);

struct RecoveryMetrics {
  double mse_s = 0.0;
  double mse_r = 0.0;
  double abs_dev_rho = 0.0;
  double abs_dev_phi = 0.0;
  double mse_z_aligned = 0.0;
};

/// Latent error is (nd)^-1 min_O |Z - Zhat O|^2 after centering both.
double aligned_latent_mse(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate);

RecoveryMetrics recovery_metrics(const ModelParamsd& truth, const ModelParamsd& estimate);

/// Autocorrelation-based effective sample size (Geyer initial positive
/// sequence).
double effective_sample_size(const std::vector<double>& series);

}  // namespace rlsm
