#include "rlsm/pipeline.hpp"

namespace rlsm {

FitResult fit_model(const DirectedNetwork& net, const FitOptions& options) {
  FitResult out;
  out.init = initialize(net, options.d, options.priors, options.variant);
  PosteriorChain raw =
      sample_posterior(net, options.d, options.hmc, options.priors, out.init, options.variant);
  if (raw.divergence_warning)
    out.warnings.push_back("sampler: " + std::to_string(raw.divergences) +
                           " divergent transitions after warm-up (more than 10%)");
  out.map = map_estimate(net, options.d, options.priors, out.init, options.variant, options.map);
  out.warnings.insert(out.warnings.end(), out.map.warnings.begin(), out.map.warnings.end());
  out.chain = align_chain(std::move(raw), out.map.theta.z);
  out.summary = summarize_posterior(out.chain, std::min(100, static_cast<int>(out.chain.draws.size())));
  out.mean = posterior_mean(out.chain);
  return out;
}

}  // namespace rlsm
