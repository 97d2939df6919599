#include "rlsm/sampler.hpp"

#include "rlsm/parameterization.hpp"

namespace rlsm {

PosteriorChain sample_posterior(const DirectedNetwork& net, int d, const HmcConfig& config,
                                const PriorConstantsd& c, const InitReport& init,
                                Variant variant) {
  const PosteriorDensity density(net, d, variant, c);
  const ParameterLayout& layout = density.layout();
  const LogDensityFn target = [&density](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    return density.evaluate(x, &grad, true);
  };

  ModelParamsd theta0 = init.theta0;
  if (!estimates_rho(variant)) theta0.rho = 0.0;
  if (!estimates_phi(variant)) theta0.phi = 0.0;
  const HmcRun run = run_hmc(target, layout.pack(theta0, init.nu0), config);

  PosteriorChain chain;
  chain.variant = variant;
  chain.n = net.size();
  chain.d = d;
  chain.draws.resize(run.draws.size());
  chain.log_posterior.reserve(run.draws.size());
  for (std::size_t k = 0; k < run.draws.size(); ++k) {
    layout.unpack(run.draws[k], chain.draws[k].theta, chain.draws[k].nu);
    chain.log_posterior.push_back(density.log_posterior(run.draws[k]));
  }
  const std::size_t warmup = static_cast<std::size_t>(config.warmup_iters);
  for (std::size_t k = 0; k < run.stats.size(); ++k) {
    chain.step_sizes.push_back(run.stats[k].step_size);
    if (k >= warmup) chain.accept_stats.push_back(run.stats[k].accept_stat);
  }
  chain.step_size = run.step_size;
  chain.mean_accept = run.mean_accept;
  chain.divergences = run.divergences;
  chain.divergence_warning = run.divergence_warning;
  return chain;
}

}  // namespace rlsm
