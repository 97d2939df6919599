#include "rlsm/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace rlsm {

ProcrustesResult procrustes_align(const Eigen::MatrixXd& source, const Eigen::MatrixXd& reference,
                                  bool allow_translation) {
  if (source.rows() != reference.rows() || source.cols() != reference.cols())
    throw DimensionError("procrustes_align: shapes differ");
  const Eigen::Index d = source.cols();
  Eigen::RowVectorXd src_mean = Eigen::RowVectorXd::Zero(d);
  Eigen::RowVectorXd ref_mean = Eigen::RowVectorXd::Zero(d);
  if (allow_translation) {
    src_mean = source.colwise().mean();
    ref_mean = reference.colwise().mean();
  }
  const Eigen::MatrixXd src = source.rowwise() - src_mean;
  const Eigen::MatrixXd ref = reference.rowwise() - ref_mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(src.transpose() * ref, Eigen::ComputeFullU | Eigen::ComputeFullV);

  ProcrustesResult out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  const Eigen::VectorXd& sv = svd.singularValues();
  out.rank_deficient = d > 0 && sv(d - 1) <= 1e-12 * std::max(1.0, sv(0));
  out.translation = ref_mean - src_mean * out.rotation;
  out.aligned = (src * out.rotation).rowwise() + ref_mean;
  return out;
}

PosteriorChain align_chain(PosteriorChain chain, const Eigen::MatrixXd& reference) {
  if (reference.rows() != chain.n || reference.cols() != chain.d)
    throw DimensionError("align_chain: reference shape must be n x d");
  for (Draw& draw : chain.draws) draw.theta.z = procrustes_align(draw.theta.z, reference).aligned;
  chain.aligned = true;
  return chain;
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw ValidationError("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

ParameterSummary summarize_values(const std::vector<double>& values) {
  ParameterSummary out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    out.mean = out.lower = out.upper = *lo;
    return out;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  out.lower = quantile(values, 0.025);
  out.upper = quantile(values, 0.975);
  return out;
}

template <typename Getter>
std::vector<double> collect(const PosteriorChain& chain, Getter get) {
  std::vector<double> out;
  out.reserve(chain.draws.size());
  for (const Draw& draw : chain.draws) out.push_back(get(draw));
  return out;
}

}  // namespace

PosteriorSummary summarize_posterior(const PosteriorChain& chain, int min_draws) {
  if (static_cast<int>(chain.draws.size()) < min_draws)
    throw ValidationError("summarize_posterior: need at least " + std::to_string(min_draws) +
                          " draws, got " + std::to_string(chain.draws.size()));
  PosteriorSummary out;
  out.num_draws = static_cast<int>(chain.draws.size());
  auto add = [&out](const std::string& key, const std::vector<double>& values) {
    out.parameters[key] = summarize_values(values);
    out.order.push_back(key);
  };
  add("rho", collect(chain, [](const Draw& w) { return w.theta.rho; }));
  const std::vector<double> phi = collect(chain, [](const Draw& w) { return w.theta.phi; });
  add("phi", phi);
  add("mu_sr", collect(chain, [](const Draw& w) { return w.nu.mu_sr; }));
  add("sigma_s2", collect(chain, [](const Draw& w) { return w.nu.sigma_s2; }));
  add("sigma_r2", collect(chain, [](const Draw& w) { return w.nu.sigma_r2; }));
  add("gamma_sr", collect(chain, [](const Draw& w) { return w.nu.gamma_sr; }));
  add("sigma_z2", collect(chain, [](const Draw& w) { return w.nu.sigma_z2; }));
  for (int i = 0; i < chain.n; ++i)
    add("s_" + std::to_string(i), collect(chain, [i](const Draw& w) { return w.theta.s(i); }));
  for (int i = 0; i < chain.n; ++i)
    add("r_" + std::to_string(i), collect(chain, [i](const Draw& w) { return w.theta.r(i); }));
  for (int i = 0; i < chain.n; ++i)
    for (int k = 0; k < chain.d; ++k)
      add("z_" + std::to_string(i) + "_" + std::to_string(k),
          collect(chain, [i, k](const Draw& w) { return w.theta.z(i, k); }));

  const double total = static_cast<double>(phi.size());
  out.prob_phi_negative = std::count_if(phi.begin(), phi.end(), [](double v) { return v < 0.0; }) / total;
  out.prob_phi_unit_interval =
      std::count_if(phi.begin(), phi.end(), [](double v) { return v > 0.0 && v < 1.0; }) / total;
  out.prob_phi_above_one = std::count_if(phi.begin(), phi.end(), [](double v) { return v > 1.0; }) / total;
  return out;
}

Draw posterior_mean(const PosteriorChain& chain) {
  if (chain.draws.empty()) throw ValidationError("posterior_mean: empty chain");
  Draw mean{ModelParamsd::Zero(chain.n, chain.d), HyperParamsd{0, 0, 0, 0, 0}};
  for (const Draw& w : chain.draws) {
    mean.theta.z += w.theta.z;
    mean.theta.s += w.theta.s;
    mean.theta.r += w.theta.r;
    mean.theta.rho += w.theta.rho;
    mean.theta.phi += w.theta.phi;
    mean.nu.mu_sr += w.nu.mu_sr;
    mean.nu.sigma_s2 += w.nu.sigma_s2;
    mean.nu.sigma_r2 += w.nu.sigma_r2;
    mean.nu.gamma_sr += w.nu.gamma_sr;
    mean.nu.sigma_z2 += w.nu.sigma_z2;
  }
  const double k = 1.0 / static_cast<double>(chain.draws.size());
  mean.theta.z *= k;
  mean.theta.s *= k;
  mean.theta.r *= k;
  mean.theta.rho *= k;
  mean.theta.phi *= k;
  mean.nu.mu_sr *= k;
  mean.nu.sigma_s2 *= k;
  mean.nu.sigma_r2 *= k;
  mean.nu.gamma_sr *= k;
  mean.nu.sigma_z2 *= k;
  return mean;
}

double aligned_latent_mse(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
  const ProcrustesResult fit = procrustes_align(estimate, truth, true);
  const Eigen::MatrixXd centered_truth = truth.rowwise() - truth.colwise().mean();
  const Eigen::MatrixXd residual = centered_truth - (fit.aligned.rowwise() - truth.colwise().mean());
  return residual.squaredNorm() / static_cast<double>(truth.size());
}

RecoveryMetrics recovery_metrics(const ModelParamsd& truth, const ModelParamsd& estimate) {
  if (truth.num_nodes() != estimate.num_nodes() || truth.dim() != estimate.dim())
    throw DimensionError("recovery_metrics: shapes differ");
  RecoveryMetrics out;
  out.mse_s = (truth.s - estimate.s).squaredNorm() / truth.num_nodes();
  out.mse_r = (truth.r - estimate.r).squaredNorm() / truth.num_nodes();
  out.abs_dev_rho = std::abs(truth.rho - estimate.rho);
  out.abs_dev_phi = std::abs(truth.phi - estimate.phi);
  out.mse_z_aligned = aligned_latent_mse(truth.z, estimate.z);
  return out;
}

double effective_sample_size(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) acc += (series[t] - mean) * (series[t + lag] - mean);
    return acc / static_cast<double>(n);
  };
  const double var = autocov(0);
  if (var <= 0.0) return static_cast<double>(n);
  double tau = -1.0;
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    const double pair = (autocov(lag) + autocov(lag + 1)) / var;
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  return static_cast<double>(n) / std::max(tau, 1e-12);
}

}  // namespace rlsm
