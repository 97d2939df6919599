#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rlsm/model.hpp"
#include "rlsm/network.hpp"
#include "rlsm/random.hpp"
#include "rlsm/sampler.hpp"

namespace rlsm {

struct InformationCriteria {
  Variant variant = Variant::kDistanceDependent;
  double aic = 0.0;
  double bic = 0.0;
  double dic = 0.0;
  double log_lik_at_estimate = 0.0;  // at the posterior mean
  double mean_deviance = 0.0;
  double p_effective = 0.0;  // DIC's p_D
  long num_parameters = 0;
  long num_dyads = 0;
};

inline double akaike(double log_lik, long num_parameters) {
  return -2.0 * log_lik + 2.0 * static_cast<double>(num_parameters);
}

inline double schwarz(double log_lik, long num_parameters, long sample_size) {
  return -2.0 * log_lik + static_cast<double>(num_parameters) * std::log(static_cast<double>(sample_size));
}

/// AIC and BIC at the posterior mean (BIC sample size = number of dyads);
/// DIC = mean deviance + p_D with p_D = mean deviance - deviance(mean).
InformationCriteria information_criteria(const PosteriorChain& chain, const DirectedNetwork& net,
                                         Variant variant);

/// One categorical draw over the four dyad states per unordered pair.
DirectedNetwork simulate_from_params(const ModelParamsd& theta, std::uint64_t seed);
DirectedNetwork simulate_from_params(const ModelParamsd& theta, Rng& rng);

struct PpcResult {
  std::vector<double> replicate_stats;  // mutual-tie fractions
  double observed_stat = 0.0;
  double tail_probability = 0.0;  // fraction of replicates >= observed
  double lower = 0.0;             // 2.5% replicate quantile
  double upper = 0.0;             // 97.5% replicate quantile
};

/// Simulates one network from each of `n_draws` evenly strided chain draws.
PpcResult posterior_predictive_check(const PosteriorChain& chain, const DirectedNetwork& net,
                                     int n_draws, std::uint64_t seed);

struct DyadCounts {
  long mutual = 0;
  long out = 0;
  long in = 0;
  long null = 0;
};

struct LocalOddsWindow {
  double lower = 0.0;
  double upper = 0.0;
  double midpoint = 0.0;
  double rho_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  DyadCounts counts;
};

struct LocalOddsCurve {
  std::vector<LocalOddsWindow> windows;
  // Approximate covariance of the windows' rho_hat; neighbouring windows
  // share dyads.
  Eigen::MatrixXd covariance;
  double window_width = 2.0;
  double shift = 0.5;
};

/// log(n_null n_mutual / (n_in n_out)) with its Wald standard error.
double local_log_odds(const DyadCounts& counts);
double local_log_odds_se(const DyadCounts& counts);

/// Empirical log odds ratio over dyads whose latent distance falls in
/// [l, l + width] for l = 0, shift, 2 shift, ...; windows missing any dyad
/// type are dropped.
LocalOddsCurve local_log_odds_curve(const DirectedNetwork& net, const Eigen::MatrixXd& positions,
                                    double window_width = 2.0, double shift = 0.5);

struct SlopeFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Inverse-variance weighted least-squares line through (midpoint, rho_hat).
/// The slope's standard error is the sandwich form using the window
/// covariance.
SlopeFit fit_curve_slope(const LocalOddsCurve& curve);

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rlsm
