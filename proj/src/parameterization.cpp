#include "rlsm/parameterization.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rlsm {

namespace {

// log(1 - tanh(t)^2) without cancellation.
double log_sech2(double t) {
  const double a = std::abs(t);
  return 2.0 * (std::numbers::ln2 - a - std::log1p(std::exp(-2.0 * a)));
}

}  // namespace

ParameterLayout::ParameterLayout(int n, int d, Variant variant)
    : n_(n), d_(d), variant_(variant) {
  if (n < 2 || d < 1) throw ValidationError("layout needs n >= 2 and d >= 1");
  int next = n * d + 2 * n;
  if (estimates_rho(variant)) rho_ = next++;
  if (estimates_phi(variant)) phi_ = next++;
  hyper_ = next;
  size_ = next + 5;
}

Eigen::VectorXd ParameterLayout::pack(const ModelParamsd& theta, const HyperParamsd& nu) const {
  if (theta.num_nodes() != n_ || theta.dim() != d_)
    throw DimensionError("pack: parameter shape does not match layout");
  Eigen::VectorXd x(size_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < d_; ++k) x(i * d_ + k) = theta.z(i, k);
  x.segment(s_offset(), n_) = theta.s;
  x.segment(r_offset(), n_) = theta.r;
  if (rho_ >= 0) x(rho_) = theta.rho;
  if (phi_ >= 0) x(phi_) = theta.phi;
  x(mu_offset()) = nu.mu_sr;
  x(log_sigma_s2_offset()) = std::log(nu.sigma_s2);
  x(log_sigma_r2_offset()) = std::log(nu.sigma_r2);
  x(atanh_gamma_offset()) = std::atanh(nu.gamma_sr);
  x(log_sigma_z2_offset()) = std::log(nu.sigma_z2);
  return x;
}

void ParameterLayout::unpack(const Eigen::Ref<const Eigen::VectorXd>& x, ModelParamsd& theta,
                             HyperParamsd& nu) const {
  if (x.size() != size_) throw DimensionError("unpack: vector length does not match layout");
  theta.z.resize(n_, d_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < d_; ++k) theta.z(i, k) = x(i * d_ + k);
  theta.s = x.segment(s_offset(), n_);
  theta.r = x.segment(r_offset(), n_);
  theta.rho = rho_ >= 0 ? x(rho_) : 0.0;
  theta.phi = phi_ >= 0 ? x(phi_) : 0.0;
  nu.mu_sr = x(mu_offset());
  nu.sigma_s2 = std::exp(x(log_sigma_s2_offset()));
  nu.sigma_r2 = std::exp(x(log_sigma_r2_offset()));
  nu.gamma_sr = std::tanh(x(atanh_gamma_offset()));
  nu.sigma_z2 = std::exp(x(log_sigma_z2_offset()));
}

double ParameterLayout::log_jacobian(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return x(log_sigma_s2_offset()) + x(log_sigma_r2_offset()) + x(log_sigma_z2_offset()) +
         log_sech2(x(atanh_gamma_offset()));
}

PosteriorDensity::PosteriorDensity(const DirectedNetwork& net, int d, Variant variant,
                                   PriorConstantsd constants)
    : net_(net), layout_(net.size(), d, variant), constants_(constants) {
  if (!constants_.is_valid()) throw ValidationError("prior constants must be positive");
}

double PosteriorDensity::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x,
                                  Eigen::VectorXd* grad, bool with_jacobian) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const ParameterLayout& L = layout_;
  const PriorConstantsd& c = constants_;
  const int n = L.num_nodes();
  const int d = L.dim();
  if (x.size() != L.size()) throw DimensionError("evaluate: vector length does not match layout");
  if (!x.allFinite()) return kNegInf;

  const double* z = x.data();
  const double* s = x.data() + L.s_offset();
  const double* r = x.data() + L.r_offset();
  const double rho = L.rho_offset() >= 0 ? x(L.rho_offset()) : 0.0;
  const double phi = L.phi_offset() >= 0 ? x(L.phi_offset()) : 0.0;
  const double mu = x(L.mu_offset());
  const double log_s2 = x(L.log_sigma_s2_offset());
  const double log_r2 = x(L.log_sigma_r2_offset());
  const double t = x(L.atanh_gamma_offset());
  const double log_z2 = x(L.log_sigma_z2_offset());

  if (grad) grad->setZero(L.size());
  double* g = grad ? grad->data() : nullptr;
  double g_rho = 0.0;
  double g_phi = 0.0;

  // likelihood
  const AdjacencyMatrix& y = net_.adjacency();
  double loglik = 0.0;
  double diff[16];
  std::vector<double> diff_buf;
  double* dv = diff;
  if (d > 16) {
    diff_buf.resize(d);
    dv = diff_buf.data();
  }
  for (int i = 0; i < n; ++i) {
    const double* zi = z + i * d;
    for (int j = i + 1; j < n; ++j) {
      const double* zj = z + j * d;
      double dist2 = 0.0;
      for (int k = 0; k < d; ++k) {
        dv[k] = zi[k] - zj[k];
        dist2 += dv[k] * dv[k];
      }
      const double dist = std::sqrt(dist2);
      const double a = s[i] + r[j] - dist;
      const double b = s[j] + r[i] - dist;
      const double c_ij = rho + phi * dist;
      const double m = a + b + c_ij;
      double em, ea, eb, total, log_z;
      if (std::max({m, a, b}) < 40.0) {
        ea = std::exp(a);
        eb = std::exp(b);
        em = ea * eb * std::exp(c_ij);
        total = 1.0 + ea + eb + em;
        log_z = std::log(total);
      } else {
        const double top = std::max({m, a, b, 0.0});
        em = std::exp(m - top);
        ea = std::exp(a - top);
        eb = std::exp(b - top);
        total = em + ea + eb + std::exp(-top);
        log_z = top + std::log(total);
      }
      const int yij = y(i, j);
      const int yji = y(j, i);
      loglik += (yij ? a : 0.0) + (yji ? b : 0.0) + (yij && yji ? c_ij : 0.0) - log_z;
      if (!g) continue;
      const double p_mut = em / total;
      const double ga = yij - (p_mut + ea / total);
      const double gb = yji - (p_mut + eb / total);
      const double gc = (yij && yji ? 1.0 : 0.0) - p_mut;
      g[L.s_offset() + i] += ga;
      g[L.r_offset() + j] += ga;
      g[L.s_offset() + j] += gb;
      g[L.r_offset() + i] += gb;
      g_rho += gc;
      g_phi += gc * dist;
      if (dist > 0.0) {
        const double g_dist = (phi * gc - ga - gb) / dist;
        for (int k = 0; k < d; ++k) {
          g[i * d + k] += g_dist * dv[k];
          g[j * d + k] -= g_dist * dv[k];
        }
      }
    }
  }

  // (s_i, r_i) ~ N2(mu 1, Sigma)
  const double sigma_s2 = std::exp(log_s2);
  const double sigma_r2 = std::exp(log_r2);
  const double sigma_z2 = std::exp(log_z2);
  const double gamma = std::tanh(t);
  const double lsech2 = log_sech2(t);
  const double one_m_g2 = std::exp(lsech2);
  const double sd_s = std::sqrt(sigma_s2);
  const double sd_r = std::sqrt(sigma_r2);
  const double log_2pi = std::log(2.0 * std::numbers::pi);

  double quad = 0.0;
  double g_mu = 0.0, g_ls = 0.0, g_lr = 0.0, g_t = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ai = (s[i] - mu) / sd_s;
    const double bi = (r[i] - mu) / sd_r;
    const double qa = ai * ai - 2.0 * gamma * ai * bi + bi * bi;
    quad += qa;
    if (!g) continue;
    const double gs = -(ai - gamma * bi) / (one_m_g2 * sd_s);
    const double gr = -(bi - gamma * ai) / (one_m_g2 * sd_r);
    g[L.s_offset() + i] += gs;
    g[L.r_offset() + i] += gr;
    g_mu -= gs + gr;
    g_ls += 0.5 * (ai * ai - gamma * ai * bi) / one_m_g2;
    g_lr += 0.5 * (bi * bi - gamma * ai * bi) / one_m_g2;
    g_t += ai * bi - gamma * qa / one_m_g2;
  }
  double logprior = -n * (log_2pi + 0.5 * (log_s2 + log_r2 + lsech2)) - 0.5 * quad / one_m_g2;
  g_ls -= 0.5 * n;
  g_lr -= 0.5 * n;
  g_t += n * gamma;

  // z_i ~ N(0, sigma_z2 I)
  double zz = 0.0;
  for (int k = 0; k < n * d; ++k) zz += z[k] * z[k];
  logprior += -0.5 * n * d * (log_2pi + log_z2) - 0.5 * zz / sigma_z2;
  double g_lz = -0.5 * n * d + 0.5 * zz / sigma_z2;
  if (g)
    for (int k = 0; k < n * d; ++k) g[k] -= z[k] / sigma_z2;

  const double var_rho = c.sigma_rho * c.sigma_rho;
  const double var_phi = c.sigma_phi * c.sigma_phi;
  const double var_mu = c.sigma_mu * c.sigma_mu;
  logprior += -0.5 * (std::log(2.0 * std::numbers::pi * var_rho) + rho * rho / var_rho);
  logprior += -0.5 * (std::log(2.0 * std::numbers::pi * var_phi) + phi * phi / var_phi);
  logprior += -0.5 * (std::log(2.0 * std::numbers::pi * var_mu) + mu * mu / var_mu);
  g_rho -= rho / var_rho;
  g_phi -= phi / var_phi;
  g_mu -= mu / var_mu;

  auto inv_gamma = [](double log_x, double shape, double scale, double& g_log_x) {
    g_log_x += -(shape + 1.0) + scale * std::exp(-log_x);
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * log_x -
           scale * std::exp(-log_x);
  };
  logprior += inv_gamma(log_s2, c.a_s, c.b_s, g_ls);
  logprior += inv_gamma(log_r2, c.a_r, c.b_r, g_lr);
  logprior += inv_gamma(log_z2, c.a_z, c.b_z, g_lz);
  logprior -= std::numbers::ln2;

  double value = loglik + logprior;
  if (with_jacobian) {
    value += log_s2 + log_r2 + log_z2 + lsech2;
    g_ls += 1.0;
    g_lr += 1.0;
    g_lz += 1.0;
    g_t -= 2.0 * gamma;
  }
  if (!std::isfinite(value)) return kNegInf;

  if (g) {
    if (L.rho_offset() >= 0) g[L.rho_offset()] = g_rho;
    if (L.phi_offset() >= 0) g[L.phi_offset()] = g_phi;
    g[L.mu_offset()] = g_mu;
    g[L.log_sigma_s2_offset()] = g_ls;
    g[L.log_sigma_r2_offset()] = g_lr;
    g[L.atanh_gamma_offset()] = g_t;
    g[L.log_sigma_z2_offset()] = g_lz;
  }
  return value;
}

Eigen::VectorXd grad_log_posterior(const ModelParamsd& theta, const HyperParamsd& nu,
                                   const DirectedNetwork& net, const PriorConstantsd& c,
                                   Variant variant) {
  PosteriorDensity density(net, theta.dim(), variant, c);
  Eigen::VectorXd grad;
  density.evaluate(density.layout().pack(theta, nu), &grad, false);
  return grad;
}

}  // namespace rlsm
