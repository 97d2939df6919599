#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "rlsm/errors.hpp"
#include "rlsm/postprocess.hpp"
#include "test_helpers.hpp"

using namespace rlsm;
using Eigen::MatrixXd;

namespace {

MatrixXd random_layout(int n, int d, rlsm::Rng& rng) {
  MatrixXd z(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) z(i, k) = rng.normal();
  return z;
}

MatrixXd pairwise(const MatrixXd& z) {
  MatrixXd out(z.rows(), z.rows());
  for (int i = 0; i < z.rows(); ++i)
    for (int j = 0; j < z.rows(); ++j) out(i, j) = (z.row(i) - z.row(j)).norm();
  return out;
}

PosteriorChain chain_of(const std::vector<MatrixXd>& layouts) {
  PosteriorChain chain;
  chain.n = static_cast<int>(layouts.front().rows());
  chain.d = static_cast<int>(layouts.front().cols());
  for (const auto& z : layouts) {
    Draw w{ModelParamsd::Zero(chain.n, chain.d), HyperParamsd{}};
    w.theta.z = z;
    chain.draws.push_back(w);
    chain.log_posterior.push_back(0.0);
  }
  return chain;
}

}  // namespace

TEST_CASE("Procrustes alignment") {
  rlsm::Rng rng(1);
  const MatrixXd ref = random_layout(10, 2, rng);
  SUBCASE("fixed point") {
    const auto res = procrustes_align(ref, ref);
    CHECK((res.rotation - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(res.translation.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("quarter turn") {
    Eigen::Matrix2d rot;
    rot << 0, -1, 1, 0;
    const auto res = procrustes_align(ref * rot, ref);
    CHECK((res.rotation - rot.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((res.aligned - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("reflection") {
    Eigen::Matrix2d flip;
    flip << -1, 0, 0, 1;
    const auto res = procrustes_align(ref * flip, ref);
    CHECK(res.rotation.determinant() == doctest::Approx(-1.0));
    CHECK((res.aligned - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("any rigid motion is undone") {
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 1 + trial % 4;
      const MatrixXd base = random_layout(12, d, rng);
      const MatrixXd o = testing::random_orthogonal(d, rng);
      Eigen::RowVectorXd t(d);
      for (int k = 0; k < d; ++k) t(k) = 5 * rng.normal();
      const MatrixXd moved = (base * o).rowwise() + t;
      const auto res = procrustes_align(moved, base);
      CHECK((res.aligned - base).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((pairwise(res.aligned) - pairwise(moved)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(aligned_latent_mse(base, moved) < 1e-12);
    }
  }
  SUBCASE("rank-deficient cross product") {
    const MatrixXd collapsed = MatrixXd::Zero(10, 2);
    const auto res = procrustes_align(collapsed, ref);
    CHECK(res.rank_deficient);
    CHECK((res.rotation.transpose() * res.rotation - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("without translation the centroid stays put") {
    Eigen::Matrix2d rot;
    rot << 0, -1, 1, 0;
    const MatrixXd shifted = (ref * rot).array() + 3.0;
    const auto res = procrustes_align(shifted, ref, false);
    CHECK(res.translation.cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(procrustes_align(MatrixXd::Zero(3, 2), MatrixXd::Zero(4, 2)), DimensionError);
}

TEST_CASE("chain alignment") {
  rlsm::Rng rng(2);
  const MatrixXd ref = random_layout(8, 2, rng);
  std::vector<MatrixXd> layouts;
  for (int k = 0; k < 20; ++k) {
    const MatrixXd noisy = ref + 0.1 * random_layout(8, 2, rng);
    layouts.push_back((noisy * testing::random_orthogonal(2, rng)).array() + rng.normal());
  }
  const auto chain = chain_of(layouts);
  const auto aligned = align_chain(chain, ref);
  CHECK(aligned.aligned);
  for (std::size_t k = 0; k < layouts.size(); ++k) {
    CHECK((pairwise(aligned.draws[k].theta.z) - pairwise(layouts[k])).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((aligned.draws[k].theta.z - ref).cwiseAbs().maxCoeff() < 0.5);
  }
  const auto identity = align_chain(chain_of({ref, ref}), ref);
  CHECK((identity.draws[1].theta.z - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("posterior summaries") {
  SUBCASE("constant chain") {
    std::vector<MatrixXd> layouts(150, MatrixXd::Ones(3, 2));
    auto chain = chain_of(layouts);
    for (auto& w : chain.draws) w.theta.phi = -0.4;
    const auto summary = summarize_posterior(chain);
    CHECK(summary.num_draws == 150);
    CHECK(summary.at("phi").sd == 0.0);
    CHECK(summary.at("phi").lower == summary.at("phi").upper);
    CHECK(summary.at("phi").mean == doctest::Approx(-0.4));
    CHECK(summary.prob_phi_negative == 1.0);
    CHECK(summary.prob_phi_unit_interval == 0.0);
    CHECK(summary.at("z_2_1").mean == doctest::Approx(1.0));
  }
  SUBCASE("too few draws") {
    CHECK_THROWS_AS(summarize_posterior(chain_of(std::vector<MatrixXd>(10, MatrixXd::Ones(3, 2)))),
                    ValidationError);
  }
  SUBCASE("Gaussian draws") {
    rlsm::Rng rng(3);
    auto chain = chain_of(std::vector<MatrixXd>(20000, MatrixXd::Zero(2, 1)));
    for (auto& w : chain.draws) w.theta.rho = 1.0 + 2.0 * rng.normal();
    const auto s = summarize_posterior(chain).at("rho");
    // 2.5% and 97.5% points of N(1, 4); quantile MC sd is about 0.04 here
    CHECK(std::abs(s.lower - (1.0 - 2.0 * 1.959964)) < 0.15);
    CHECK(std::abs(s.upper - (1.0 + 2.0 * 1.959964)) < 0.15);
    CHECK(std::abs(s.mean - 1.0) < 0.05);
    CHECK(std::abs(s.sd - 2.0) < 0.05);
  }
  SUBCASE("draw order does not matter") {
    rlsm::Rng rng(4);
    auto chain = chain_of(std::vector<MatrixXd>(200, MatrixXd::Zero(3, 2)));
    for (auto& w : chain.draws) {
      w.theta.phi = rng.normal();
      w.theta.z(1, 0) = rng.normal();
      w.nu.sigma_s2 = std::exp(rng.normal());
    }
    auto reversed = chain;
    std::reverse(reversed.draws.begin(), reversed.draws.end());
    const auto a = summarize_posterior(chain);
    const auto b = summarize_posterior(reversed);
    for (const auto& key : a.order) {
      CHECK(a.at(key).mean == doctest::Approx(b.at(key).mean).epsilon(1e-12));
      CHECK(a.at(key).lower == b.at(key).lower);
      CHECK(a.at(key).upper == b.at(key).upper);
    }
    CHECK(a.prob_phi_negative + a.prob_phi_unit_interval + a.prob_phi_above_one ==
          doctest::Approx(1.0));
  }
}

TEST_CASE("quantile") {
  CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({5, 1, 3}, 0.0) == 1.0);
  CHECK(quantile({5, 1, 3}, 1.0) == 5.0);
  CHECK(quantile({1, 2, 3, 4, 5}, 0.25) == doctest::Approx(2.0));
}

TEST_CASE("recovery metrics") {
  rlsm::Rng rng(5);
  const auto truth = testing::random_params(9, 2, rng);
  SUBCASE("exact estimate") {
    const auto m = recovery_metrics(truth, truth);
    CHECK(m.mse_s == 0.0);
    CHECK(m.mse_r == 0.0);
    CHECK(m.abs_dev_rho == 0.0);
    CHECK(m.abs_dev_phi == 0.0);
    CHECK(m.mse_z_aligned < 1e-24);
  }
  SUBCASE("rotated and shifted latent positions") {
    auto est = truth;
    est.z = (truth.z * testing::random_orthogonal(2, rng)).array() + 2.0;
    const auto m = recovery_metrics(truth, est);
    CHECK(m.mse_z_aligned < 1e-12);
    CHECK(m.mse_s == 0.0);
  }
  SUBCASE("two-node hand example") {
    ModelParamsd a = ModelParamsd::Zero(2, 1), b = ModelParamsd::Zero(2, 1);
    b.s << 1, 1;
    b.rho = -0.5;
    b.phi = 2;
    const auto m = recovery_metrics(a, b);
    CHECK(m.mse_s == doctest::Approx(1.0));
    CHECK(m.mse_r == 0.0);
    CHECK(m.abs_dev_rho == doctest::Approx(0.5));
    CHECK(m.abs_dev_phi == doctest::Approx(2.0));
  }
  SUBCASE("latent error by hand") {
    // collinear truth (-1, 0, 1) against (-2, 0, 2): best rotation is the
    // identity, error (1 + 0 + 1) / 3
    MatrixXd z(3, 1), zh(3, 1);
    z << -1, 0, 1;
    zh << -2, 0, 2;
    CHECK(aligned_latent_mse(z, zh) == doctest::Approx(2.0 / 3.0));
    CHECK(aligned_latent_mse(z, -zh) == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(recovery_metrics(truth, testing::random_params(8, 2, rng)), DimensionError);
  }
}

TEST_CASE("effective sample size") {
  rlsm::Rng rng(6);
  std::vector<double> iid(4000), ar(4000);
  double x = 0;
  for (std::size_t k = 0; k < iid.size(); ++k) {
    iid[k] = rng.normal();
    x = 0.9 * x + rng.normal();
    ar[k] = x;
  }
  CHECK(effective_sample_size(iid) > 3000);
  // AR(1) with coefficient 0.9: ESS ratio (1 - 0.9) / (1 + 0.9)
  const double expected = 4000 * 0.1 / 1.9;
  CHECK(std::abs(effective_sample_size(ar) / expected - 1.0) < 0.35);
}
