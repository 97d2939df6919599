#pragma once

#include <string>
#include <vector>

#include "rlsm/hmc.hpp"
#include "rlsm/init.hpp"
#include "rlsm/postprocess.hpp"
#include "rlsm/sampler.hpp"

namespace rlsm {

struct FitOptions {
  int d = 2;
  Variant variant = Variant::kDistanceDependent;
  HmcConfig hmc;
  PriorConstantsd priors;
  OptimizerOptions map;
};

struct FitResult {
  InitReport init;
  MapEstimate map;
  PosteriorChain chain;  // aligned to the MAP layout
  PosteriorSummary summary;
  Draw mean;             // posterior mean of the aligned chain
  std::vector<std::string> warnings;
};

/// initialize -> sample_posterior -> map_estimate -> align_chain ->
/// summarize_posterior.
FitResult fit_model(const DirectedNetwork& net, const FitOptions& options);

}  // namespace rlsm
