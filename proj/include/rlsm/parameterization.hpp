#pragma once

#include <Eigen/Core>

#include "rlsm/model.hpp"
#include "rlsm/network.hpp"

namespace rlsm {

/// Packing of (theta, nu) into a flat vector on R^K.
///
/// Layout: z (row-major, n*d), s (n), r (n), [rho], [phi], mu_sr,
/// log sigma_s2, log sigma_r2, atanh gamma_sr, log sigma_z2. rho and phi are
/// omitted when the variant pins them to zero.
class ParameterLayout {
 public:
  ParameterLayout(int n, int d, Variant variant = Variant::kDistanceDependent);

  int num_nodes() const { return n_; }
  int dim() const { return d_; }
  Variant variant() const { return variant_; }
  int size() const { return size_; }

  int z_offset() const { return 0; }
  int s_offset() const { return n_ * d_; }
  int r_offset() const { return n_ * d_ + n_; }
  int rho_offset() const { return rho_; }  // -1 when pinned
  int phi_offset() const { return phi_; }  // -1 when pinned
  int mu_offset() const { return hyper_; }
  int log_sigma_s2_offset() const { return hyper_ + 1; }
  int log_sigma_r2_offset() const { return hyper_ + 2; }
  int atanh_gamma_offset() const { return hyper_ + 3; }
  int log_sigma_z2_offset() const { return hyper_ + 4; }

  Eigen::VectorXd pack(const ModelParamsd& theta, const HyperParamsd& nu) const;
  void unpack(const Eigen::Ref<const Eigen::VectorXd>& x, ModelParamsd& theta,
              HyperParamsd& nu) const;

  /// log |d(constrained)/d(unconstrained)|: the three log-variances plus
  /// log(1 - gamma^2) for the atanh coordinate.
  double log_jacobian(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  int n_;
  int d_;
  Variant variant_;
  int rho_ = -1;
  int phi_ = -1;
  int hyper_ = 0;
  int size_ = 0;
};

/// Log-posterior and its exact gradient over the unconstrained coordinates.
///
/// The gradient is that of log_posterior composed with the unpacking map; the
/// change-of-variables Jacobian is added only when `with_jacobian` is set
/// (the sampler's target). Coincident latent positions contribute a zero
/// subgradient for the distance term.
class PosteriorDensity {
 public:
  PosteriorDensity(const DirectedNetwork& net, int d, Variant variant,
                   PriorConstantsd constants = {});

  const ParameterLayout& layout() const { return layout_; }
  const DirectedNetwork& network() const { return net_; }
  const PriorConstantsd& constants() const { return constants_; }

  /// Returns the log density at `x`; writes the gradient when `grad` is set.
  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::VectorXd* grad,
                  bool with_jacobian) const;

  double log_posterior(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return evaluate(x, nullptr, false);
  }

 private:
  DirectedNetwork net_;
  ParameterLayout layout_;
  PriorConstantsd constants_;
};

Eigen::VectorXd grad_log_posterior(const ModelParamsd& theta, const HyperParamsd& nu,
                                   const DirectedNetwork& net, const PriorConstantsd& c,
                                   Variant variant = Variant::kDistanceDependent);

}  // namespace rlsm
