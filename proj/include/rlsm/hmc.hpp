#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace rlsm {

/// Log density and gradient at q. Returns -inf outside the support.
using LogDensityFn = std::function<double(const Eigen::VectorXd& q, Eigen::VectorXd& grad)>;

struct HmcConfig {
  int warmup_iters = 2500;
  int sampling_iters = 5000;
  double target_accept = 0.8;
  int max_tree_depth = 10;
  // Metropolis HMC with a fixed trajectory of `n_leapfrog` steps instead of
  // the doubling trajectory.
  bool fixed_trajectory = false;
  int n_leapfrog = 32;
  std::uint64_t seed = 1;
  double init_step_size = 0.1;

  void validate() const;
};

struct PhasePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::VectorXd grad;
  double log_density = 0.0;
};

PhasePoint make_phase_point(Eigen::VectorXd q, Eigen::VectorXd p, const LogDensityFn& f);

/// `n_steps` velocity-Verlet steps with diagonal inverse metric.
void leapfrog(PhasePoint& z, double step_size, int n_steps, const LogDensityFn& f,
              const Eigen::VectorXd& inv_metric);

inline double hamiltonian(const PhasePoint& z, const Eigen::VectorXd& inv_metric) {
  return -z.log_density + 0.5 * z.p.cwiseProduct(inv_metric).dot(z.p);
}

/// Step-size adaptation by dual averaging (Nesterov 2009; Hoffman & Gelman
/// 2014) with the usual constants gamma = 0.05, t0 = 10, kappa = 0.75.
class DualAveraging {
 public:
  DualAveraging(double initial_step, double target_accept);

  void restart(double step);
  /// Feeds one acceptance statistic; returns the step size to use next.
  double update(double accept_stat);
  double final_step() const;

 private:
  double target_;
  double mu_ = 0.0;
  double h_bar_ = 0.0;
  double log_step_ = 0.0;
  double log_step_bar_ = 0.0;
  int count_ = 0;
};

struct TransitionStats {
  double accept_stat = 0.0;
  int tree_depth = 0;
  int n_leapfrog = 0;
  bool divergent = false;
  double step_size = 0.0;
};

/// Draws from a generic log density on R^K.
struct HmcRun {
  std::vector<Eigen::VectorXd> draws;  // post-warm-up only
  std::vector<double> log_density;
  std::vector<TransitionStats> stats;  // warm-up followed by sampling
  Eigen::VectorXd inv_metric;
  double step_size = 0.0;
  int divergences = 0;  // post-warm-up
  double mean_accept = 0.0;  // post-warm-up
  bool divergence_warning = false;
};

HmcRun run_hmc(const LogDensityFn& f, const Eigen::VectorXd& init, const HmcConfig& config);

}  // namespace rlsm
