#pragma once

// Dyad-independent latent space model with distance-dependent reciprocity.
//
// For an unordered pair i < j with latent distance d_ij = |z_i - z_j|:
//   mu_ij  = s_i + r_j - d_ij
//   mu_ji  = s_j + r_i - d_ij
//   rho_ij = rho + phi * d_ij
// and the dyad (y_ij, y_ji) has log-masses
//   (1,1): mu_ij + mu_ji + rho_ij,  (1,0): mu_ij,  (0,1): mu_ji,  (0,0): 0
// normalised per dyad. Dyads are independent given the parameters.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "rlsm/errors.hpp"
#include "rlsm/network.hpp"

namespace rlsm {

/// Which of the nested models is being fitted.
enum class Variant { kEdgeIndependent, kHomogeneous, kDistanceDependent };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::kEdgeIndependent: return "edge-independent";
    case Variant::kHomogeneous: return "homogeneous";
    case Variant::kDistanceDependent: return "distance-dependent";
  }
  return "?";
}

inline Variant parse_variant(const std::string& name) {
  if (name == "edge-independent") return Variant::kEdgeIndependent;
  if (name == "homogeneous") return Variant::kHomogeneous;
  if (name == "distance-dependent") return Variant::kDistanceDependent;
  throw ValidationError("unknown model variant '" + name + "'");
}

inline bool estimates_rho(Variant v) { return v != Variant::kEdgeIndependent; }
inline bool estimates_phi(Variant v) { return v == Variant::kDistanceDependent; }

template <typename Scalar>
struct ModelParams {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix z;  // n x d, one latent position per row
  Vector s;  // sender effects
  Vector r;  // receiver effects
  Scalar rho = 0;
  Scalar phi = 0;

  static ModelParams Zero(int n, int d) {
    return {Matrix::Zero(n, d), Vector::Zero(n), Vector::Zero(n), Scalar(0), Scalar(0)};
  }

  int num_nodes() const { return static_cast<int>(s.size()); }
  int dim() const { return static_cast<int>(z.cols()); }

  bool is_valid() const {
    return z.rows() == s.size() && r.size() == s.size() && z.cols() >= 1 &&
           z.allFinite() && s.allFinite() && r.allFinite() && std::isfinite(rho) &&
           std::isfinite(phi);
  }

  template <typename Other>
  ModelParams<Other> cast() const {
    return {z.template cast<Other>(), s.template cast<Other>(), r.template cast<Other>(),
            static_cast<Other>(rho), static_cast<Other>(phi)};
  }
};

template <typename Scalar>
struct HyperParams {
  Scalar mu_sr = 0;
  Scalar sigma_s2 = 1;
  Scalar sigma_r2 = 1;
  Scalar gamma_sr = 0;
  Scalar sigma_z2 = 1;

  bool in_support() const {
    return std::isfinite(mu_sr) && sigma_s2 > 0 && sigma_r2 > 0 && sigma_z2 > 0 &&
           std::isfinite(sigma_s2) && std::isfinite(sigma_r2) && std::isfinite(sigma_z2) &&
           gamma_sr > -1 && gamma_sr < 1;
  }
};

/// Fixed constants of the hierarchical prior. Inverse-gamma(a, b) uses shape a
/// and scale b.
template <typename Scalar>
struct PriorConstants {
  Scalar a_s = 1.5, b_s = 1.5;
  Scalar a_r = 1.5, b_r = 1.5;
  Scalar a_z = 1.5, b_z = 1.5;
  Scalar sigma_mu = 10;
  Scalar sigma_rho = 10;
  Scalar sigma_phi = 10;

  bool is_valid() const {
    return a_s > 0 && b_s > 0 && a_r > 0 && b_r > 0 && a_z > 0 && b_z > 0 && sigma_mu > 0 &&
           sigma_rho > 0 && sigma_phi > 0;
  }
};

using ModelParamsd = ModelParams<double>;
using HyperParamsd = HyperParams<double>;
using PriorConstantsd = PriorConstants<double>;

template <typename Scalar>
struct DyadNaturalParams {
  Scalar mu_ij;
  Scalar mu_ji;
  Scalar rho_ij;
};

template <typename Scalar>
struct DyadProbabilities {
  Scalar p_mutual;
  Scalar p_out;  // y_ij = 1, y_ji = 0
  Scalar p_in;   // y_ij = 0, y_ji = 1
  Scalar p_null;

  Scalar operator[](DyadValue v) const {
    switch (v) {
      case DyadValue::kMutual: return p_mutual;
      case DyadValue::kAsymOut: return p_out;
      case DyadValue::kAsymIn: return p_in;
      case DyadValue::kNull: return p_null;
    }
    return Scalar(0);
  }
};

template <typename Scalar>
Scalar latent_distance(const ModelParams<Scalar>& theta, int i, int j) {
  return (theta.z.row(i) - theta.z.row(j)).norm();
}

template <typename Scalar>
DyadNaturalParams<Scalar> natural_params(const ModelParams<Scalar>& theta, int i, int j) {
  const int n = theta.num_nodes();
  if (i == j) throw std::domain_error("natural_params: i == j");
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("natural_params: node index");
  const Scalar dist = latent_distance(theta, i, j);
  return {theta.s(i) + theta.r(j) - dist, theta.s(j) + theta.r(i) - dist,
          theta.rho + theta.phi * dist};
}

/// Log-probabilities of (mutual, out, in, null), normalised by log-sum-exp.
template <typename Scalar>
std::array<Scalar, 4> dyad_log_probabilities(const DyadNaturalParams<Scalar>& np) {
  using std::exp;
  using std::log;
  const std::array<Scalar, 4> mass{np.mu_ij + np.mu_ji + np.rho_ij, np.mu_ij, np.mu_ji,
                                   Scalar(0)};
  const Scalar top = *std::max_element(mass.begin(), mass.end());
  Scalar acc = 0;
  for (Scalar m : mass) acc += exp(m - top);
  const Scalar log_z = top + log(acc);
  return {mass[0] - log_z, mass[1] - log_z, mass[2] - log_z, mass[3] - log_z};
}

template <typename Scalar>
DyadProbabilities<Scalar> dyad_probabilities(const DyadNaturalParams<Scalar>& np) {
  using std::exp;
  const auto lp = dyad_log_probabilities(np);
  return {exp(lp[0]), exp(lp[1]), exp(lp[2]), exp(lp[3])};
}

template <typename Scalar>
void check_dimensions(const ModelParams<Scalar>& theta, const DirectedNetwork& net) {
  if (theta.num_nodes() != net.size() || theta.r.size() != theta.s.size() ||
      theta.z.rows() != theta.s.size())
    throw DimensionError("parameter dimensions do not match network with n=" +
                         std::to_string(net.size()));
}

/// Sum over unordered pairs of the log-probability of the observed dyad.
template <typename Scalar>
Scalar log_likelihood(const ModelParams<Scalar>& theta, const DirectedNetwork& net) {
  check_dimensions(theta, net);
  const int n = net.size();
  Scalar total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto lp = dyad_log_probabilities(natural_params(theta, i, j));
      total += lp[static_cast<int>(net.dyad(i, j))];
    }
  }
  return total;
}

namespace detail {

template <typename Scalar>
Scalar normal_logpdf(Scalar x, Scalar mean, Scalar var) {
  using std::log;
  const Scalar diff = x - mean;
  return Scalar(-0.5) * (log(Scalar(2) * std::numbers::pi_v<Scalar> * var) + diff * diff / var);
}

template <typename Scalar>
Scalar inv_gamma_logpdf(Scalar x, Scalar shape, Scalar scale) {
  using std::lgamma;
  using std::log;
  return shape * log(scale) - lgamma(shape) - (shape + 1) * log(x) - scale / x;
}

}  // namespace detail

/// Hierarchical log-prior log p(theta | nu) + log p(nu). Returns -inf outside
/// the hyperparameter support (including |gamma_sr| = 1).
template <typename Scalar>
Scalar log_prior(const ModelParams<Scalar>& theta, const HyperParams<Scalar>& nu,
                 const PriorConstants<Scalar>& c) {
  using std::log;
  using std::sqrt;
  if (!nu.in_support()) return -std::numeric_limits<Scalar>::infinity();
  const int n = theta.num_nodes();
  const int d = theta.dim();
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;

  // (s_i, r_i) ~ N2(mu_sr * 1, Sigma)
  const Scalar one_m_g2 = (Scalar(1) - nu.gamma_sr) * (Scalar(1) + nu.gamma_sr);
  const Scalar sd_s = sqrt(nu.sigma_s2);
  const Scalar sd_r = sqrt(nu.sigma_r2);
  const Scalar log_det = log(nu.sigma_s2) + log(nu.sigma_r2) + log(one_m_g2);
  Scalar quad = 0;
  for (int i = 0; i < n; ++i) {
    const Scalar a = (theta.s(i) - nu.mu_sr) / sd_s;
    const Scalar b = (theta.r(i) - nu.mu_sr) / sd_r;
    quad += (a * a - Scalar(2) * nu.gamma_sr * a * b + b * b) / one_m_g2;
  }
  Scalar total = -Scalar(n) * (log(two_pi) + Scalar(0.5) * log_det) - Scalar(0.5) * quad;

  // z_i ~ N(0, sigma_z2 I_d)
  total += -Scalar(0.5) * Scalar(n * d) * log(two_pi * nu.sigma_z2) -
           Scalar(0.5) * theta.z.squaredNorm() / nu.sigma_z2;

  total += detail::normal_logpdf(theta.rho, Scalar(0), c.sigma_rho * c.sigma_rho);
  total += detail::normal_logpdf(theta.phi, Scalar(0), c.sigma_phi * c.sigma_phi);

  // hyperpriors
  total += detail::normal_logpdf(nu.mu_sr, Scalar(0), c.sigma_mu * c.sigma_mu);
  total += detail::inv_gamma_logpdf(nu.sigma_s2, c.a_s, c.b_s);
  total += detail::inv_gamma_logpdf(nu.sigma_r2, c.a_r, c.b_r);
  total += detail::inv_gamma_logpdf(nu.sigma_z2, c.a_z, c.b_z);
  total += -log(Scalar(2));  // gamma_sr ~ Uniform[-1, 1]
  return total;
}

template <typename Scalar>
Scalar log_posterior(const ModelParams<Scalar>& theta, const HyperParams<Scalar>& nu,
                     const DirectedNetwork& net, const PriorConstants<Scalar>& c) {
  const Scalar prior = log_prior(theta, nu, c);
  if (!std::isfinite(prior)) return -std::numeric_limits<Scalar>::infinity();
  return log_likelihood(theta, net) + prior;
}

/// Free parameters of the full model: n latent positions, n sender and n
/// receiver effects, rho and phi.
constexpr long parameter_count(long n, long d) { return n * (d + 2) + 2; }

constexpr long parameter_count(long n, long d, Variant v) {
  return parameter_count(n, d) - (v == Variant::kEdgeIndependent ? 2
                                  : v == Variant::kHomogeneous   ? 1
                                                                 : 0);
}

}  // namespace rlsm
