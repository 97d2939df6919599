#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "rlsm/model.hpp"
#include "rlsm/network.hpp"
#include "rlsm/random.hpp"

namespace rlsm {

/// How the baseline reciprocity is calibrated from the target odds ratio.
enum class OddsRatioCalibration {
  kMeanLogOdds,  // mean over pairs of rho_ij equals log(target)
  kMeanOdds,     // mean over pairs of exp(rho_ij) equals target
};

struct SimDesign {
  int n = 100;
  int d = 2;
  double sigma_s2 = 1.0;
  double sigma_r2 = 1.0;
  double gamma_sr = 0.5;
  double target_density = 0.2;
  std::vector<Eigen::VectorXd> mixture_means = {Eigen::Vector2d(-1.0, 0.0),
                                                Eigen::Vector2d(1.0, 0.0),
                                                Eigen::Vector2d(0.0, 1.0)};
  double mixture_var = 0.1;
  double phi_low = -1.0;
  double phi_high = 1.0;
  double target_mean_odds_ratio = 2.0;
  OddsRatioCalibration odds_calibration = OddsRatioCalibration::kMeanLogOdds;
  // Overrides the odds-ratio calibration with a fixed baseline reciprocity.
  std::optional<double> rho_fixed;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SimInstance {
  ModelParamsd truth;
  double mu_sr = 0.0;  // shift added to every s_i and r_i
  DirectedNetwork net = DirectedNetwork::empty(2);
  double expected_density = 0.0;
  double realized_density = 0.0;
  double realized_mean_rho_ij = 0.0;
};

/// (s_i, r_i) bivariate normal with mean zero, z_i from the equal-weight
/// Gaussian mixture, phi uniform on [phi_low, phi_high], rho = 0.
ModelParamsd draw_truth(const SimDesign& design, Rng& rng);

/// Model-implied density: mean over ordered pairs of P(Y_ij = 1).
double expected_density(const ModelParamsd& theta);

/// Mean over unordered pairs of the latent distance.
double mean_latent_distance(const ModelParamsd& theta);

/// Shift m in [-20, 20], found by bisection, such that adding m to every
/// s_i and r_i gives the target expected density.
double calibrate_mu_sr(const ModelParamsd& truth, const SimDesign& design);

/// Baseline rho giving the target average odds ratio for the drawn phi and z.
double calibrate_rho(const ModelParamsd& truth, const SimDesign& design);

SimInstance generate(const SimDesign& design);

}  // namespace rlsm
