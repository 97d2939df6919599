#include "rlsm/init.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace rlsm {

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

double sample_variance(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 0.0;
  return (v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1);
}

}  // namespace

Eigen::MatrixXd geodesic_distances(const DirectedNetwork& net, bool* disconnected) {
  const DirectedNetwork sym = symmetrize(net);
  const int n = sym.size();
  std::vector<std::vector<int>> neighbours(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (sym(i, j)) neighbours[i].push_back(j);

  constexpr double kUnreached = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, kUnreached);
  std::deque<int> queue;
  for (int src = 0; src < n; ++src) {
    dist(src, src) = 0.0;
    queue.assign(1, src);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : neighbours[u]) {
        if (dist(src, v) == kUnreached) {
          dist(src, v) = dist(src, u) + 1.0;
          queue.push_back(v);
        }
      }
    }
  }
  double max_finite = 0.0;
  bool any_unreached = false;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (std::isinf(dist(i, j)))
        any_unreached = true;
      else
        max_finite = std::max(max_finite, dist(i, j));
    }
  }
  if (any_unreached) dist = dist.unaryExpr([&](double v) { return std::isinf(v) ? max_finite + 1.0 : v; });
  if (disconnected) *disconnected = any_unreached;
  return dist;
}

MdsResult classical_mds(const Eigen::MatrixXd& distances, int d) {
  const Eigen::Index n = distances.rows();
  if (d < 1 || n < 2 || distances.cols() != n) throw ValidationError("classical_mds: bad shape");
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd gram = -0.5 * centering * distances.array().square().matrix() * centering;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);

  MdsResult out;
  out.positions = Eigen::MatrixXd::Zero(n, d);
  out.eigenvalues = Eigen::VectorXd::Zero(d);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  int zero_filled = 0;
  for (int k = 0; k < d && k < n; ++k) {
    const Eigen::Index idx = n - 1 - k;
    const double lambda = eig.eigenvalues()(idx);
    out.eigenvalues(k) = lambda;
    if (lambda <= 1e-10 * scale) {
      ++zero_filled;
      continue;
    }
    Eigen::VectorXd v = eig.eigenvectors().col(idx);
    const double largest = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(v(i)) >= largest * (1.0 - 1e-9)) pivot = i;
    if (v(pivot) < 0) v = -v;
    out.positions.col(k) = std::sqrt(lambda) * v;
  }
  zero_filled += std::max<int>(0, d - static_cast<int>(n));
  if (zero_filled > 0)
    out.notes.push_back("mds: " + std::to_string(zero_filled) +
                        " coordinate(s) zero-filled (non-positive eigenvalue)");
  out.positions.rowwise() -= out.positions.colwise().mean();
  return out;
}

MdsResult init_latent_mds(const DirectedNetwork& net, int d) {
  bool disconnected = false;
  const Eigen::MatrixXd geo = geodesic_distances(net, &disconnected);
  MdsResult out = classical_mds(geo, d);
  if (disconnected)
    out.notes.insert(out.notes.begin(),
                     "mds: graph disconnected; between-component distance set to max geodesic + 1");
  return out;
}

SenderReceiverInit init_sender_receiver(const DirectedNetwork& net) {
  const int n = net.size();
  const Eigen::VectorXd out_deg = net.out_degrees().cast<double>();
  const Eigen::VectorXd in_deg = net.in_degrees().cast<double>();
  SenderReceiverInit init;
  init.s0 = ((out_deg.array() + 1.0) / (n + 2.0)).unaryExpr([](double p) { return logit(p); });
  init.r0 = ((in_deg.array() + 1.0) / (n + 2.0)).unaryExpr([](double p) { return logit(p); });
  init.s_raw = init.s0;
  init.r_raw = init.r0;
  init.mu_sr0 = (init.s0.sum() + init.r0.sum()) / (2.0 * n);
  init.s0.array() -= init.s0.mean();
  init.r0.array() -= init.r0.mean();
  return init;
}

ReciprocityInit init_reciprocity(const DirectedNetwork& net, const Eigen::MatrixXd& z0,
                                 int max_iterations, double tolerance) {
  const int n = net.size();
  if (z0.rows() != n) throw DimensionError("init_reciprocity: z0 must have n rows");
  const long m = static_cast<long>(n) * (n - 1) / 2;
  Eigen::MatrixXd X(m, 3);
  Eigen::VectorXd y(m);
  long row = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++row) {
      const double yji = net(j, i);
      X(row, 0) = 1.0;
      X(row, 1) = yji;
      X(row, 2) = (z0.row(i) - z0.row(j)).norm() * yji;
      y(row) = net(i, j);
    }
  }

  ReciprocityInit out;
  auto fallback = [&out](const std::string& why) {
    out.beta0 = out.rho0 = out.phi0 = 0.0;
    out.converged = false;
    out.notes.push_back("reciprocity regression: " + why + "; using rho0 = phi0 = 0");
    return out;
  };
  auto loglik = [&](const Eigen::Vector3d& beta) {
    const Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    for (long k = 0; k < m; ++k) ll += y(k) * eta(k) - std::max(eta(k), 0.0) - std::log1p(std::exp(-std::abs(eta(k))));
    return ll;
  };

  Eigen::Vector3d beta = Eigen::Vector3d::Zero();
  double current = loglik(beta);
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Eigen::VectorXd eta = X * beta;
    const Eigen::VectorXd p = eta.unaryExpr([](double e) { return 1.0 / (1.0 + std::exp(-e)); });
    const Eigen::Vector3d grad = X.transpose() * (y - p);
    out.iterations = iter;
    if (grad.cwiseAbs().maxCoeff() < tolerance) {
      out.converged = true;
      break;
    }
    const Eigen::VectorXd w = p.array() * (1.0 - p.array());
    const Eigen::Matrix3d info = X.transpose() * w.asDiagonal() * X;
    Eigen::LDLT<Eigen::Matrix3d> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-12)
      return fallback("singular information matrix");
    Eigen::Vector3d step = ldlt.solve(grad);
    double next = loglik(beta + step);
    for (int halving = 0; halving < 30 && !(next >= current); ++halving) {
      step *= 0.5;
      next = loglik(beta + step);
    }
    beta += step;
    current = next;
    if (step.cwiseAbs().maxCoeff() < tolerance * (1.0 + beta.cwiseAbs().maxCoeff())) {
      out.iterations = iter + 1;
      out.converged = true;
      break;
    }
    if (beta.cwiseAbs().maxCoeff() > 20.0) return fallback("separation detected");
  }
  if (!out.converged) return fallback("no convergence");
  out.beta0 = beta(0);
  out.rho0 = beta(1);
  out.phi0 = beta(2);
  return out;
}

InitReport initialize(const DirectedNetwork& net, int d, const PriorConstantsd& c,
                      Variant variant) {
  InitReport report;
  const int n = net.size();

  MdsResult mds = init_latent_mds(net, d);
  report.mds_eigenvalues = mds.eigenvalues;
  report.notes = std::move(mds.notes);

  SenderReceiverInit sr = init_sender_receiver(net);
  ReciprocityInit recip = init_reciprocity(net, mds.positions);
  report.notes.insert(report.notes.end(), recip.notes.begin(), recip.notes.end());
  report.beta0 = recip.beta0;
  report.rho0 = recip.rho0;
  report.phi0 = recip.phi0;

  // The sender/receiver effects enter the likelihood directly, so the
  // centered degree estimates are offset by mu_sr0 to keep the implied
  // density.
  report.theta0 = ModelParamsd::Zero(n, d);
  report.theta0.z = mds.positions;
  report.theta0.s = sr.s0.array() + sr.mu_sr0;
  report.theta0.r = sr.r0.array() + sr.mu_sr0;
  report.theta0.rho = estimates_rho(variant) ? recip.rho0 : 0.0;
  report.theta0.phi = estimates_phi(variant) ? recip.phi0 : 0.0;

  constexpr double kVarianceFloor = 0.1;
  auto floored = [&](double v, const char* name) {
    if (v < kVarianceFloor) {
      report.notes.push_back(std::string(name) + " initial variance floored at 0.1");
      return kVarianceFloor;
    }
    return v;
  };
  HyperParamsd& nu = report.nu0;
  nu.mu_sr = sr.mu_sr0;
  const double var_s = sample_variance(sr.s0);
  const double var_r = sample_variance(sr.r0);
  nu.sigma_s2 = floored(var_s, "sigma_s2");
  nu.sigma_r2 = floored(var_r, "sigma_r2");
  double var_z = 0.0;
  for (int k = 0; k < d; ++k) var_z += sample_variance(mds.positions.col(k));
  nu.sigma_z2 = floored(var_z / d, "sigma_z2");
  if (var_s > 0.0 && var_r > 0.0) {
    const double cov = (sr.s0.array() * sr.r0.array()).sum() / (n - 1);  // both centered
    nu.gamma_sr = std::clamp(cov / std::sqrt(var_s * var_r), -0.9, 0.9);
  } else {
    nu.gamma_sr = 0.0;
    report.notes.push_back("gamma_sr initialised to 0 (degenerate degree variance)");
  }
  if (!std::isfinite(log_posterior(report.theta0, report.nu0, net, c)))
    throw std::runtime_error("initialize: starting point has non-finite log posterior");
  return report;
}

}  // namespace rlsm
