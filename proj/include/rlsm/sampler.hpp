#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rlsm/hmc.hpp"
#include "rlsm/init.hpp"
#include "rlsm/model.hpp"
#include "rlsm/network.hpp"

namespace rlsm {

struct Draw {
  ModelParamsd theta;
  HyperParamsd nu;
};

struct PosteriorChain {
  Variant variant = Variant::kDistanceDependent;
  int n = 0;
  int d = 0;
  std::vector<Draw> draws;
  std::vector<double> log_posterior;  // per draw, without Jacobian
  std::vector<double> accept_stats;   // per sampling iteration
  std::vector<double> step_sizes;     // warm-up then sampling
  double step_size = 0.0;
  double mean_accept = 0.0;
  int divergences = 0;
  bool divergence_warning = false;
  bool aligned = false;
};

/// Adaptive HMC over the unconstrained parameterization, started at the
/// initializer's point. Bit-reproducible for a fixed seed.
PosteriorChain sample_posterior(const DirectedNetwork& net, int d, const HmcConfig& config,
                                const PriorConstantsd& c, const InitReport& init,
                                Variant variant = Variant::kDistanceDependent);

struct OptimizerOptions {
  int max_iterations = 5000;
  double gradient_tolerance = 1e-6;  // max-norm
  int history = 10;
};

struct OptimizerResult {
  Eigen::VectorXd x;  // best point visited
  double value = 0.0;
  double gradient_max_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// L-BFGS ascent of `f` (value + gradient) with backtracking line search.
OptimizerResult lbfgs_maximize(const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& f,
                               Eigen::VectorXd x0, const OptimizerOptions& options = {});

struct MapEstimate {
  ModelParamsd theta;
  HyperParamsd nu;
  double log_posterior = 0.0;
  double gradient_max_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Mode of the posterior over theta = (z, s, r, rho, phi) with the
/// hyperparameters held at the initializer's values. No Jacobian enters, so
/// this is a mode in the original parameters.
MapEstimate map_estimate(const DirectedNetwork& net, int d, const PriorConstantsd& c,
                         const InitReport& init, Variant variant = Variant::kDistanceDependent,
                         const OptimizerOptions& options = {});

}  // namespace rlsm
