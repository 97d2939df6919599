#include "rlsm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/LU>

#include "rlsm/postprocess.hpp"

namespace rlsm {

InformationCriteria information_criteria(const PosteriorChain& chain, const DirectedNetwork& net,
                                         Variant variant) {
  if (chain.variant != variant)
    throw ValidationError("information_criteria: chain was fitted as " + to_string(chain.variant) +
                          ", not " + to_string(variant));
  if (chain.n != net.size()) throw DimensionError("information_criteria: chain and network sizes differ");
  if (chain.draws.empty()) throw ValidationError("information_criteria: empty chain");
  for (const Draw& w : chain.draws) {
    if ((!estimates_rho(variant) && w.theta.rho != 0.0) || (!estimates_phi(variant) && w.theta.phi != 0.0))
      throw ValidationError("information_criteria: pinned coordinate is non-zero in chain");
  }
  InformationCriteria out;
  out.variant = variant;
  const long n = net.size();
  out.num_parameters = parameter_count(n, chain.d, variant);
  out.num_dyads = n * (n - 1) / 2;

  const Draw mean = posterior_mean(chain);
  out.log_lik_at_estimate = log_likelihood(mean.theta, net);
  double deviance_sum = 0.0;
  for (const Draw& w : chain.draws) deviance_sum += -2.0 * log_likelihood(w.theta, net);
  out.mean_deviance = deviance_sum / static_cast<double>(chain.draws.size());

  const double deviance_at_mean = -2.0 * out.log_lik_at_estimate;
  out.aic = akaike(out.log_lik_at_estimate, out.num_parameters);
  out.bic = schwarz(out.log_lik_at_estimate, out.num_parameters, out.num_dyads);
  out.p_effective = out.mean_deviance - deviance_at_mean;
  out.dic = out.mean_deviance + out.p_effective;
  return out;
}

DirectedNetwork simulate_from_params(const ModelParamsd& theta, Rng& rng) {
  const int n = theta.num_nodes();
  AdjacencyMatrix adj = AdjacencyMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto p = dyad_probabilities(natural_params(theta, i, j));
      const double u = rng.uniform();
      if (u < p.p_mutual) {
        adj(i, j) = adj(j, i) = 1;
      } else if (u < p.p_mutual + p.p_out) {
        adj(i, j) = 1;
      } else if (u < p.p_mutual + p.p_out + p.p_in) {
        adj(j, i) = 1;
      }
    }
  }
  return DirectedNetwork(std::move(adj));
}

DirectedNetwork simulate_from_params(const ModelParamsd& theta, std::uint64_t seed) {
  Rng rng(seed, 0);
  return simulate_from_params(theta, rng);
}

PpcResult posterior_predictive_check(const PosteriorChain& chain, const DirectedNetwork& net,
                                     int n_draws, std::uint64_t seed) {
  const auto length = static_cast<long>(chain.draws.size());
  if (n_draws < 1 || n_draws > length)
    throw ValidationError("posterior_predictive_check: n_draws must lie in [1, chain length]");
  PpcResult out;
  out.observed_stat = mutual_tie_fraction(net);
  out.replicate_stats.reserve(static_cast<std::size_t>(n_draws));
  long at_least = 0;
  for (long k = 0; k < n_draws; ++k) {
    const long index = k * length / n_draws;
    Rng rng(seed, static_cast<std::uint64_t>(k) + 1);
    const double stat = mutual_tie_fraction(simulate_from_params(chain.draws[index].theta, rng));
    out.replicate_stats.push_back(stat);
    if (stat >= out.observed_stat) ++at_least;
  }
  out.tail_probability = static_cast<double>(at_least) / n_draws;
  out.lower = quantile(out.replicate_stats, 0.025);
  out.upper = quantile(out.replicate_stats, 0.975);
  return out;
}

double local_log_odds(const DyadCounts& c) {
  return std::log(static_cast<double>(c.null) * static_cast<double>(c.mutual) /
                  (static_cast<double>(c.in) * static_cast<double>(c.out)));
}

double local_log_odds_se(const DyadCounts& c) {
  return std::sqrt(1.0 / c.mutual + 1.0 / c.out + 1.0 / c.in + 1.0 / c.null);
}

LocalOddsCurve local_log_odds_curve(const DirectedNetwork& net, const Eigen::MatrixXd& positions,
                                    double window_width, double shift) {
  const int n = net.size();
  if (positions.rows() != n) throw DimensionError("local_log_odds_curve: one position per node");
  if (!(window_width > 0.0) || !(shift > 0.0))
    throw ValidationError("local_log_odds_curve: width and shift must be positive");
  struct Pair {
    double dist;
    DyadValue value;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  double max_dist = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dist = (positions.row(i) - positions.row(j)).norm();
      pairs.push_back({dist, net.dyad(i, j)});
      max_dist = std::max(max_dist, dist);
    }
  }
  LocalOddsCurve curve;
  curve.window_width = window_width;
  curve.shift = shift;
  for (long step = 0;; ++step) {
    const double lower = static_cast<double>(step) * shift;
    if (lower > max_dist) break;
    const double upper = lower + window_width;
    DyadCounts counts;
    for (const Pair& p : pairs) {
      if (p.dist < lower || p.dist > upper) continue;
      switch (p.value) {
        case DyadValue::kMutual: ++counts.mutual; break;
        case DyadValue::kAsymOut: ++counts.out; break;
        case DyadValue::kAsymIn: ++counts.in; break;
        case DyadValue::kNull: ++counts.null; break;
      }
    }
    if (!counts.mutual || !counts.out || !counts.in || !counts.null) continue;
    LocalOddsWindow w;
    w.lower = lower;
    w.upper = upper;
    w.midpoint = 0.5 * (lower + upper);
    w.counts = counts;
    w.rho_hat = local_log_odds(counts);
    const double half = 1.96 * local_log_odds_se(counts);
    w.ci_low = w.rho_hat - half;
    w.ci_high = w.rho_hat + half;
    curve.windows.push_back(w);
  }

  // Poisson approximation: Cov(log n_A, log n_B) = n_AB / (n_A n_B) per cell.
  const auto m = static_cast<Eigen::Index>(curve.windows.size());
  curve.covariance = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a; b < m; ++b) {
      const auto& wa = curve.windows[a];
      const auto& wb = curve.windows[b];
      const double lower = std::max(wa.lower, wb.lower);
      const double upper = std::min(wa.upper, wb.upper);
      if (lower > upper) continue;
      std::array<long, 4> shared{};
      for (const Pair& p : pairs)
        if (p.dist >= lower && p.dist <= upper) ++shared[static_cast<int>(p.value)];
      const std::array<long, 4> na{wa.counts.mutual, wa.counts.out, wa.counts.in, wa.counts.null};
      const std::array<long, 4> nb{wb.counts.mutual, wb.counts.out, wb.counts.in, wb.counts.null};
      double cov = 0.0;
      for (int c = 0; c < 4; ++c)
        cov += static_cast<double>(shared[c]) / (static_cast<double>(na[c]) * static_cast<double>(nb[c]));
      curve.covariance(a, b) = curve.covariance(b, a) = cov;
    }
  }
  return curve;
}

SlopeFit fit_curve_slope(const LocalOddsCurve& curve) {
  const auto m = static_cast<Eigen::Index>(curve.windows.size());
  if (m < 3) throw ValidationError("fit_curve_slope: need at least three windows");
  if (curve.covariance.rows() != m || curve.covariance.cols() != m)
    throw DimensionError("fit_curve_slope: covariance does not match the windows");
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m), w(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& win = curve.windows[k];
    X(k, 0) = 1.0;
    X(k, 1) = win.midpoint;
    y(k) = win.rho_hat;
    w(k) = 1.0 / std::pow(local_log_odds_se(win.counts), 2);
  }
  const Eigen::MatrixXd xtw = X.transpose() * w.asDiagonal();
  const Eigen::Matrix2d xtwx = xtw * X;
  const Eigen::Matrix2d bread = xtwx.inverse();
  const Eigen::Vector2d beta = bread * (xtw * y);
  const Eigen::Matrix2d cov = bread * (xtw * curve.covariance * xtw.transpose()) * bread;
  SlopeFit fit;
  fit.intercept = beta(0);
  fit.slope = beta(1);
  fit.slope_se = std::sqrt(cov(1, 1));
  fit.ci_low = fit.slope - 1.96 * fit.slope_se;
  fit.ci_high = fit.slope + 1.96 * fit.slope_se;
  return fit;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("spearman_correlation: bad input");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace rlsm
