#include "rlsm/hmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rlsm/errors.hpp"
#include "rlsm/random.hpp"

namespace rlsm {

void HmcConfig::validate() const {
  if (warmup_iters < 0 || sampling_iters < 1) throw ValidationError("iteration counts must be positive");
  if (!(target_accept > 0.0 && target_accept < 1.0))
    throw ValidationError("target_accept must lie in (0, 1)");
  if (max_tree_depth < 1 || n_leapfrog < 1) throw ValidationError("trajectory limits must be positive");
  if (!(init_step_size > 0.0)) throw ValidationError("init_step_size must be positive");
}

PhasePoint make_phase_point(Eigen::VectorXd q, Eigen::VectorXd p, const LogDensityFn& f) {
  PhasePoint z;
  z.grad.resize(q.size());
  z.q = std::move(q);
  z.p = std::move(p);
  z.log_density = f(z.q, z.grad);
  return z;
}

void leapfrog(PhasePoint& z, double step_size, int n_steps, const LogDensityFn& f,
              const Eigen::VectorXd& inv_metric) {
  for (int step = 0; step < n_steps; ++step) {
    z.p += 0.5 * step_size * z.grad;
    z.q += step_size * inv_metric.cwiseProduct(z.p);
    z.log_density = f(z.q, z.grad);
    if (!std::isfinite(z.log_density)) return;
    z.p += 0.5 * step_size * z.grad;
  }
}

DualAveraging::DualAveraging(double initial_step, double target_accept) : target_(target_accept) {
  restart(initial_step);
}

void DualAveraging::restart(double step) {
  mu_ = std::log(10.0 * step);
  h_bar_ = 0.0;
  log_step_ = std::log(step);
  log_step_bar_ = 0.0;
  count_ = 0;
}

double DualAveraging::update(double accept_stat) {
  constexpr double kGamma = 0.05, kT0 = 10.0, kKappa = 0.75;
  ++count_;
  const double t = count_;
  const double eta = 1.0 / (t + kT0);
  h_bar_ = (1.0 - eta) * h_bar_ + eta * (target_ - accept_stat);
  log_step_ = mu_ - std::sqrt(t) / kGamma * h_bar_;
  const double weight = std::pow(t, -kKappa);
  log_step_bar_ = weight * log_step_ + (1.0 - weight) * log_step_bar_;
  return std::exp(log_step_);
}

double DualAveraging::final_step() const { return std::exp(count_ ? log_step_bar_ : log_step_); }

namespace {

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double top = std::max(a, b);
  return top + std::log(std::exp(a - top) + std::exp(b - top));
}

struct Subtree {
  PhasePoint proposal;
  Eigen::VectorXd rho;
  Eigen::VectorXd p_begin;
  Eigen::VectorXd p_end;
  double log_sum_weight = -std::numeric_limits<double>::infinity();
  double sum_accept = 0.0;
  int n_leapfrog = 0;
  bool divergent = false;
  bool valid = true;
};

class Nuts {
 public:
  Nuts(const LogDensityFn& f, const Eigen::VectorXd& inv_metric, Rng& rng, int max_depth)
      : f_(f), inv_metric_(inv_metric), rng_(rng), max_depth_(max_depth) {}

  TransitionStats transition(PhasePoint& current, double step) {
    const Eigen::Index dim = current.q.size();
    for (Eigen::Index k = 0; k < dim; ++k) current.p(k) = rng_.normal() / std::sqrt(inv_metric_(k));
    h0_ = hamiltonian(current, inv_metric_);

    PhasePoint left = current;
    PhasePoint right = current;
    PhasePoint proposal = current;
    Eigen::VectorXd rho = current.p;
    double log_sum_weight = 0.0;

    TransitionStats stats;
    stats.step_size = step;
    double sum_accept = 0.0;
    while (stats.tree_depth < max_depth_) {
      const bool forward = rng_.uniform() < 0.5;
      Subtree sub = build(forward ? right : left, stats.tree_depth, forward ? step : -step);
      stats.n_leapfrog += sub.n_leapfrog;
      sum_accept += sub.sum_accept;
      stats.divergent = stats.divergent || sub.divergent;
      if (!sub.valid) break;
      ++stats.tree_depth;
      if (sub.log_sum_weight > log_sum_weight ||
          rng_.uniform() < std::exp(sub.log_sum_weight - log_sum_weight))
        proposal = std::move(sub.proposal);
      log_sum_weight = log_sum_exp(log_sum_weight, sub.log_sum_weight);
      rho += sub.rho;
      if (turning(rho, left.p, right.p)) break;
    }
    stats.accept_stat = stats.n_leapfrog > 0 ? sum_accept / stats.n_leapfrog : 0.0;
    current = std::move(proposal);
    return stats;
  }

 private:
  bool turning(const Eigen::VectorXd& rho, const Eigen::VectorXd& p_a,
               const Eigen::VectorXd& p_b) const {
    return rho.dot(inv_metric_.cwiseProduct(p_a)) <= 0.0 ||
           rho.dot(inv_metric_.cwiseProduct(p_b)) <= 0.0;
  }

  Subtree build(PhasePoint& edge, int depth, double step) {
    if (depth == 0) {
      leapfrog(edge, step, 1, f_, inv_metric_);
      Subtree leaf;
      leaf.n_leapfrog = 1;
      double h = std::isfinite(edge.log_density) ? hamiltonian(edge, inv_metric_)
                                                 : std::numeric_limits<double>::infinity();
      if (std::isnan(h)) h = std::numeric_limits<double>::infinity();
      if (h - h0_ > 1000.0) {
        leaf.divergent = true;
        leaf.valid = false;
        return leaf;
      }
      leaf.log_sum_weight = h0_ - h;
      leaf.sum_accept = h0_ - h > 0.0 ? 1.0 : std::exp(h0_ - h);
      leaf.rho = edge.p;
      leaf.p_begin = edge.p;
      leaf.p_end = edge.p;
      leaf.proposal = edge;
      return leaf;
    }
    Subtree first = build(edge, depth - 1, step);
    if (!first.valid) return first;
    Subtree second = build(edge, depth - 1, step);
    first.n_leapfrog += second.n_leapfrog;
    first.sum_accept += second.sum_accept;
    first.divergent = first.divergent || second.divergent;
    if (!second.valid) {
      first.valid = false;
      return first;
    }
    const double total = log_sum_exp(first.log_sum_weight, second.log_sum_weight);
    if (rng_.uniform() < std::exp(second.log_sum_weight - total))
      first.proposal = std::move(second.proposal);
    first.log_sum_weight = total;
    first.rho += second.rho;
    first.p_end = std::move(second.p_end);
    if (turning(first.rho, first.p_begin, first.p_end)) first.valid = false;
    return first;
  }

  const LogDensityFn& f_;
  const Eigen::VectorXd& inv_metric_;
  Rng& rng_;
  int max_depth_;
  double h0_ = 0.0;
};

TransitionStats static_transition(PhasePoint& current, double step, int n_steps,
                                  const LogDensityFn& f, const Eigen::VectorXd& inv_metric,
                                  Rng& rng) {
  for (Eigen::Index k = 0; k < current.q.size(); ++k)
    current.p(k) = rng.normal() / std::sqrt(inv_metric(k));
  const double h0 = hamiltonian(current, inv_metric);
  PhasePoint next = current;
  leapfrog(next, step, n_steps, f, inv_metric);
  double h = std::isfinite(next.log_density) ? hamiltonian(next, inv_metric)
                                             : std::numeric_limits<double>::infinity();
  if (std::isnan(h)) h = std::numeric_limits<double>::infinity();
  TransitionStats stats;
  stats.step_size = step;
  stats.n_leapfrog = n_steps;
  stats.divergent = h - h0 > 1000.0;
  stats.accept_stat = h0 - h > 0.0 ? 1.0 : std::exp(h0 - h);
  if (rng.uniform() < stats.accept_stat) current = std::move(next);
  return stats;
}

// Heuristic initial step size: double or halve until the one-step
// acceptance probability crosses 1/2.
double find_reasonable_step(const PhasePoint& start, double step, const LogDensityFn& f,
                            const Eigen::VectorXd& inv_metric, Rng& rng) {
  PhasePoint z = start;
  for (Eigen::Index k = 0; k < z.q.size(); ++k) z.p(k) = rng.normal() / std::sqrt(inv_metric(k));
  const double h0 = hamiltonian(z, inv_metric);
  auto delta_h = [&](double eps) {
    PhasePoint trial = z;
    leapfrog(trial, eps, 1, f, inv_metric);
    if (!std::isfinite(trial.log_density)) return -std::numeric_limits<double>::infinity();
    const double dh = h0 - hamiltonian(trial, inv_metric);
    return std::isnan(dh) ? -std::numeric_limits<double>::infinity() : dh;
  };
  const double log_half = std::log(0.5);
  const int direction = delta_h(step) > log_half ? 1 : -1;
  for (int iter = 0; iter < 50; ++iter) {
    const double next = direction > 0 ? 2.0 * step : 0.5 * step;
    const double dh = delta_h(next);
    if (direction > 0 && !(dh > log_half)) break;
    step = next;
    if (direction < 0 && dh > log_half) break;
  }
  return step;
}

class WelfordDiagonal {
 public:
  explicit WelfordDiagonal(Eigen::Index dim) : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::VectorXd::Zero(dim)) {}
  void add(const Eigen::VectorXd& x) {
    ++count_;
    const Eigen::VectorXd delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta.cwiseProduct(x - mean_);
  }
  long count() const { return count_; }
  // Shrunk towards 1e-3 as in Stan's diagonal adaptation.
  Eigen::VectorXd regularized_variance() const {
    const double n = static_cast<double>(count_);
    const Eigen::VectorXd var = m2_ / std::max(n - 1.0, 1.0);
    return (n / (n + 5.0)) * var.array() + 1e-3 * (5.0 / (n + 5.0));
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
  long count_ = 0;
};

}  // namespace

HmcRun run_hmc(const LogDensityFn& f, const Eigen::VectorXd& init, const HmcConfig& config) {
  config.validate();
  const Eigen::Index dim = init.size();
  Rng rng(config.seed, 0);
  HmcRun run;
  run.inv_metric = Eigen::VectorXd::Ones(dim);

  PhasePoint current = make_phase_point(init, Eigen::VectorXd::Zero(dim), f);
  if (!std::isfinite(current.log_density))
    throw std::runtime_error("run_hmc: initial point has non-finite log density");

  double step = find_reasonable_step(current, config.init_step_size, f, run.inv_metric, rng);
  DualAveraging adapt(step, config.target_accept);

  // Warm-up: step size throughout; diagonal metric estimated from draws in
  // [W/2, 0.9W), then the step size is re-adapted for the remaining tail.
  const int warmup = config.warmup_iters;
  const int window_begin = warmup / 2;
  const int window_end = warmup >= 20 ? (9 * warmup) / 10 : -1;
  WelfordDiagonal estimator(dim);

  Nuts nuts(f, run.inv_metric, rng, config.max_tree_depth);
  auto transition = [&](double eps) {
    return config.fixed_trajectory
               ? static_transition(current, eps, config.n_leapfrog, f, run.inv_metric, rng)
               : nuts.transition(current, eps);
  };

  run.stats.reserve(static_cast<std::size_t>(warmup + config.sampling_iters));
  for (int iter = 0; iter < warmup; ++iter) {
    TransitionStats stats = transition(step);
    run.stats.push_back(stats);
    step = adapt.update(stats.accept_stat);
    if (iter >= window_begin && iter < window_end) estimator.add(current.q);
    if (iter + 1 == window_end && estimator.count() >= 10) {
      run.inv_metric = estimator.regularized_variance();
      step = find_reasonable_step(current, step, f, run.inv_metric, rng);
      adapt.restart(step);
    }
  }
  if (warmup > 0) step = adapt.final_step();
  run.step_size = step;

  run.draws.reserve(static_cast<std::size_t>(config.sampling_iters));
  double accept_total = 0.0;
  for (int iter = 0; iter < config.sampling_iters; ++iter) {
    TransitionStats stats = transition(step);
    run.stats.push_back(stats);
    accept_total += stats.accept_stat;
    if (stats.divergent) ++run.divergences;
    run.draws.push_back(current.q);
    run.log_density.push_back(current.log_density);
  }
  run.mean_accept = accept_total / config.sampling_iters;
  run.divergence_warning = run.divergences > 0.1 * config.sampling_iters;
  return run;
}

}  // namespace rlsm
