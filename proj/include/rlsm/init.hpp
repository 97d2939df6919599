#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "rlsm/model.hpp"
#include "rlsm/network.hpp"

namespace rlsm {

struct InitReport {
  ModelParamsd theta0;
  HyperParamsd nu0;
  Eigen::VectorXd mds_eigenvalues;  // d leading eigenvalues, descending
  double beta0 = 0.0;
  double rho0 = 0.0;
  double phi0 = 0.0;
  std::vector<std::string> notes;
};

/// All-pairs hop distances of the symmetrized network. Pairs in different
/// components get (largest finite distance + 1); `disconnected` reports it.
Eigen::MatrixXd geodesic_distances(const DirectedNetwork& net, bool* disconnected = nullptr);

struct MdsResult {
  Eigen::MatrixXd positions;    // n x d, column means zero
  Eigen::VectorXd eigenvalues;  // d leading eigenvalues, descending
  std::vector<std::string> notes;
};

/// Classical (Torgerson) scaling of a distance matrix. Columns whose
/// eigenvalue is not positive are zero-filled. Each column is signed so its
/// largest-magnitude entry is positive; near-ties go to the highest index.
MdsResult classical_mds(const Eigen::MatrixXd& distances, int d);

MdsResult init_latent_mds(const DirectedNetwork& net, int d);

struct SenderReceiverInit {
  Eigen::VectorXd s0;  // centered
  Eigen::VectorXd r0;  // centered
  Eigen::VectorXd s_raw;  // before centering
  Eigen::VectorXd r_raw;
  double mu_sr0 = 0.0;
};

SenderReceiverInit init_sender_receiver(const DirectedNetwork& net);

struct ReciprocityInit {
  double beta0 = 0.0;
  double rho0 = 0.0;
  double phi0 = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> notes;
};

/// Logistic regression of y_ij on (1, y_ji, |z_i - z_j| y_ji) over pairs i < j,
/// fitted by Newton's method. Falls back to (0, 0) on separation or
/// non-convergence.
ReciprocityInit init_reciprocity(const DirectedNetwork& net, const Eigen::MatrixXd& z0,
                                 int max_iterations = 100, double tolerance = 1e-8);

/// Full starting point: MDS positions, degree-based effects, the reciprocity
/// regression, and moment-matched hyperparameters. Pinned coordinates of
/// restricted variants are set to zero.
InitReport initialize(const DirectedNetwork& net, int d, const PriorConstantsd& c = {},
                      Variant variant = Variant::kDistanceDependent);

}  // namespace rlsm
