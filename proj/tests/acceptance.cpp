// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.
//
//   acceptance                  all criteria, full replicate counts
//   acceptance --only 1,2,9     a subset
//   acceptance --seeds 2        fewer replicates (development smoke runs)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "rlsm/diagnostics.hpp"
#include "rlsm/hmc.hpp"
#include "rlsm/model.hpp"
#include "rlsm/parameterization.hpp"
#include "rlsm/pipeline.hpp"
#include "rlsm/postprocess.hpp"
#include "rlsm/simulate.hpp"
#include "test_helpers.hpp"

using namespace rlsm;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double mean_of(const std::vector<double>& v) {
  double acc = 0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

// ---------------------------------------------------------------------------
// 1: the likelihood is a distribution over the 64 three-node networks

Verdict likelihood_normalizes() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto theta = testing::random_params(3, 2, rng, 1.5);
    double total = 0;
    for (int code = 0; code < 64; ++code) {
      AdjacencyMatrix adj = AdjacencyMatrix::Zero(3, 3);
      int bit = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j) adj(i, j) = (code >> bit++) & 1;
      total += std::exp(log_likelihood(theta, DirectedNetwork(adj)));
    }
    worst = std::max(worst, std::abs(total - 1.0));
  }
  const double t = seconds_since(t0);
  return {worst < 1e-10 && t < 1.0, "max |sum - 1| = " + fixed(worst) + ", " + fixed(t, 3) + " s"};
}

// ---------------------------------------------------------------------------
// 2: rho = phi = 0 gives independent logistic edges

Verdict nesting_identity() {
  Rng rng(202);
  double worst = 0;
  for (int trial = 0; trial < 25; ++trial) {
    auto theta = testing::random_params(20, 2, rng);
    theta.rho = theta.phi = 0;
    const auto net = testing::random_network(20, 0.3, rng);
    double oracle = 0;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        if (i == j) continue;
        const double eta = theta.s(i) + theta.r(j) - (theta.z.row(i) - theta.z.row(j)).norm();
        oracle += net(i, j) * eta - std::log1p(std::exp(eta));
      }
    const double got = log_likelihood(theta, net);
    worst = std::max(worst, std::abs(got - oracle) / std::max(1.0, std::abs(oracle)));
  }
  return {worst < 1e-12, "max relative gap = " + fixed(worst)};
}

// ---------------------------------------------------------------------------
// 3: analytic gradient against central differences of the templated model

Verdict gradient_check() {
  const auto t0 = Clock::now();
  Rng rng(303);
  const PriorConstantsd c;
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = testing::random_network(10, 0.3, rng);
    const PosteriorDensity density(net, 2, Variant::kDistanceDependent, c);
    const auto& L = density.layout();
    const VectorXd x = L.pack(testing::random_params(10, 2, rng), testing::random_hyper(rng));
    VectorXd grad;
    density.evaluate(x, &grad, false);
    auto target = [&](const VectorXd& v) {
      ModelParamsd theta;
      HyperParamsd nu;
      L.unpack(v, theta, nu);
      return log_posterior(theta, nu, net, c);
    };
    for (int k = 0; k < x.size(); ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(x(k)));
      VectorXd hi = x, lo = x;
      hi(k) += h;
      lo(k) -= h;
      const double fd = (target(hi) - target(lo)) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad(k)) / std::max({1.0, std::abs(fd), std::abs(grad(k))}));
    }
  }
  const double t = seconds_since(t0);
  return {worst < 1e-5 && t < 30.0,
          "max relative error = " + fixed(worst) + ", " + fixed(t, 3) + " s"};
}

// ---------------------------------------------------------------------------
// 4: sampler against quadrature and against a standard Gaussian

Verdict sampler_validation() {
  std::ostringstream detail;
  bool pass = true;

  // (rho, phi) free, everything else fixed
  Rng rng(404);
  ModelParamsd theta = testing::random_params(20, 2, rng, 0.6);
  theta.rho = 1.0;
  theta.phi = -0.5;
  const auto net = simulate_from_params(theta, 405);
  const PriorConstantsd c;
  const HyperParamsd nu;
  const PosteriorDensity density(net, 2, Variant::kDistanceDependent, c);
  const auto& L = density.layout();
  const VectorXd base = L.pack(theta, nu);
  LogDensityFn f = [&](const VectorXd& q, VectorXd& g) {
    VectorXd x = base;
    x(L.rho_offset()) = q(0);
    x(L.phi_offset()) = q(1);
    VectorXd full;
    const double v = density.evaluate(x, &full, false);
    g = (VectorXd(2) << full(L.rho_offset()), full(L.phi_offset())).finished();
    return v;
  };
  const int m = 601;
  const double lo = -5, hi = 5, h = (hi - lo) / (m - 1);
  std::vector<double> logp(m * m);
  double top = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      ModelParamsd t = theta;
      t.rho = lo + a * h;
      t.phi = lo + b * h;
      logp[a * m + b] = log_posterior(t, nu, net, c);
      top = std::max(top, logp[a * m + b]);
    }
  double mass = 0, q_rho = 0, q_phi = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const double w = (a == 0 || a == m - 1 ? 0.5 : 1.0) * (b == 0 || b == m - 1 ? 0.5 : 1.0);
      const double p = w * std::exp(logp[a * m + b] - top);
      mass += p;
      q_rho += p * (lo + a * h);
      q_phi += p * (lo + b * h);
    }
  q_rho /= mass;
  q_phi /= mass;

  HmcConfig config;
  config.warmup_iters = 1000;
  config.sampling_iters = 5000;
  config.seed = 406;
  const auto run = run_hmc(f, VectorXd::Zero(2), config);
  for (int k = 0; k < 2; ++k) {
    std::vector<double> xs;
    for (const auto& q : run.draws) xs.push_back(q(k));
    const double mcse = std::sqrt(variance_of(xs) / effective_sample_size(xs));
    const double truth = k == 0 ? q_rho : q_phi;
    const double z = std::abs(mean_of(xs) - truth) / mcse;
    pass = pass && z < 3.0;
    detail << (k == 0 ? "rho" : "phi") << " |mean - quadrature| = " << fixed(z, 3) << " mcse; ";
  }

  // standard Gaussian, 5000 draws
  HmcConfig gauss;
  gauss.warmup_iters = 1000;
  gauss.sampling_iters = 5000;
  gauss.seed = 407;
  const auto g = run_hmc(
      [](const VectorXd& q, VectorXd& grad) {
        grad = -q;
        return -0.5 * q.squaredNorm();
      },
      VectorXd::Constant(4, 3.0), gauss);
  double worst_mean = 0, worst_var = 0;
  for (int k = 0; k < 4; ++k) {
    std::vector<double> xs;
    for (const auto& q : g.draws) xs.push_back(q(k));
    worst_mean = std::max(worst_mean, std::abs(mean_of(xs)));
    worst_var = std::max(worst_var, std::abs(variance_of(xs) - 1.0));
  }
  pass = pass && worst_mean < 0.05 && worst_var < 0.1 && g.draws.size() == 5000;
  detail << "Gaussian max |mean| = " << fixed(worst_mean, 3) << ", max |var - 1| = " << fixed(worst_var, 3);
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// 9: Procrustes recovers rigid copies

Verdict procrustes_invariance() {
  Rng rng(909);
  double worst_align = 0, worst_mse = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 4;
    MatrixXd ref(30, d);
    for (int i = 0; i < ref.rows(); ++i)
      for (int k = 0; k < d; ++k) ref(i, k) = 2 * rng.normal();
    MatrixXd q = testing::random_orthogonal(d, rng);
    if (trial % 2 == 0) q.col(0) *= -1;  // reflection
    Eigen::RowVectorXd shift(d);
    for (int k = 0; k < d; ++k) shift(k) = 5 * rng.normal();
    const MatrixXd moved = (ref * q).rowwise() + shift;
    worst_align = std::max(worst_align, (procrustes_align(moved, ref).aligned - ref).cwiseAbs().maxCoeff());
    worst_mse = std::max(worst_mse, aligned_latent_mse(ref, moved));
  }
  return {worst_align < 1e-8 && worst_mse < 1e-12,
          "max alignment error = " + fixed(worst_align) + ", max mse = " + fixed(worst_mse)};
}

// ---------------------------------------------------------------------------
// simulation studies

struct StudyOptions {
  int seeds = 10;
  int warmup = 1250;
  int sampling = 2500;
};

FitResult fit(const DirectedNetwork& net, Variant v, std::uint64_t seed, const StudyOptions& opt) {
  FitOptions o;
  o.variant = v;
  o.hmc.warmup_iters = opt.warmup;
  o.hmc.sampling_iters = opt.sampling;
  o.hmc.seed = seed;
  return fit_model(net, o);
}

void progress(const std::string& what, Clock::time_point t0, const FitResult& r) {
  std::cout << "  [" << what << "] " << fixed(seconds_since(t0), 4) << " s, step "
            << fixed(r.chain.step_size, 3) << ", accept " << fixed(r.chain.mean_accept, 3)
            << ", divergences " << r.chain.divergences << std::endl;
}

// 5: errors shrink from n = 50 to n = 100
Verdict recovery_trend(const StudyOptions& opt) {
  std::map<int, std::vector<std::vector<double>>> metrics;  // n -> metric -> replicate
  for (int n : {50, 100}) {
    metrics[n].assign(5, {});
    for (int k = 0; k < opt.seeds; ++k) {
      SimDesign design;
      design.n = n;
      design.seed = 5000 + 100 * n + k;
      const SimInstance inst = generate(design);
      const auto t0 = Clock::now();
      const FitResult r = fit(inst.net, Variant::kDistanceDependent, design.seed + 7, opt);
      progress("recovery n=" + std::to_string(n) + " seed " + std::to_string(k), t0, r);
      const RecoveryMetrics m = recovery_metrics(inst.truth, r.mean.theta);
      const double values[5] = {m.mse_s, m.mse_r, m.abs_dev_rho, m.abs_dev_phi, m.mse_z_aligned};
      for (int q = 0; q < 5; ++q) metrics[n][q].push_back(values[q]);
    }
  }
  const char* names[5] = {"mse_s", "mse_r", "|rho err|", "|phi err|", "mse_z"};
  bool pass = true;
  std::ostringstream detail;
  for (int q = 0; q < 5; ++q) {
    const double a = median(metrics[50][q]);
    const double b = median(metrics[100][q]);
    pass = pass && b < a;
    detail << names[q] << " " << fixed(a, 3) << " -> " << fixed(b, 3) << (q < 4 ? "; " : "");
  }
  return {pass, detail.str()};
}

// Everything criteria 6, 7, 8 and 10 need from one fitted replicate.
struct FitRecord {
  double prob_phi_negative = 0;
  double prob_phi_unit = 0;
  double phi_mean = 0;
  double dic = 0;
  PpcResult ppc;
  double spearman = std::numeric_limits<double>::quiet_NaN();
  SlopeFit slope;
  SlopeFit truth_slope;  // same curve with the generating positions
  int windows = 0;
};

enum class Design { kFriendship, kInformation, kHomogeneous };

const char* design_name(Design d) {
  switch (d) {
    case Design::kFriendship: return "phi=-1.2";
    case Design::kInformation: return "phi=+0.5";
    case Design::kHomogeneous: return "rho=2,phi=0";
  }
  return "";
}

SimDesign make_design(Design which, int seed) {
  SimDesign design;
  design.n = 100;
  switch (which) {
    case Design::kFriendship:
      design.phi_low = design.phi_high = -1.2;
      design.seed = 60000 + seed;
      break;
    case Design::kInformation:
      design.phi_low = design.phi_high = 0.5;
      design.seed = 61000 + seed;
      break;
    case Design::kHomogeneous:
      design.phi_low = design.phi_high = 0.0;
      design.rho_fixed = 2.0;
      design.seed = 62000 + seed;
      break;
  }
  return design;
}

struct Study {
  // design -> seed -> variant -> record
  std::map<Design, std::vector<std::map<Variant, FitRecord>>> records;
};

Study run_study(const StudyOptions& opt) {
  Study study;
  for (Design which : {Design::kFriendship, Design::kInformation, Design::kHomogeneous}) {
    auto& per_seed = study.records[which];
    per_seed.resize(opt.seeds);
    for (int k = 0; k < opt.seeds; ++k) {
      const SimDesign design = make_design(which, k);
      const SimInstance inst = generate(design);
      for (Variant v : {Variant::kEdgeIndependent, Variant::kHomogeneous, Variant::kDistanceDependent}) {
        const auto t0 = Clock::now();
        const FitResult r = fit(inst.net, v, design.seed + 11, opt);
        progress(std::string(design_name(which)) + " seed " + std::to_string(k) + " " + to_string(v), t0, r);
        FitRecord rec;
        rec.prob_phi_negative = r.summary.prob_phi_negative;
        rec.prob_phi_unit = r.summary.prob_phi_unit_interval;
        rec.phi_mean = r.summary.at("phi").mean;
        rec.dic = information_criteria(r.chain, inst.net, v).dic;
        rec.ppc = posterior_predictive_check(r.chain, inst.net, 500, design.seed + 13);
        if (v == Variant::kDistanceDependent) {
          const LocalOddsCurve curve = local_log_odds_curve(inst.net, r.mean.theta.z);
          rec.windows = static_cast<int>(curve.windows.size());
          if (rec.windows >= 3) {
            std::vector<double> mid, rho;
            for (const auto& w : curve.windows) {
              mid.push_back(w.midpoint);
              rho.push_back(w.rho_hat);
            }
            rec.spearman = spearman_correlation(mid, rho);
            rec.slope = fit_curve_slope(curve);
          }
          const LocalOddsCurve oracle = local_log_odds_curve(inst.net, inst.truth.z);
          if (oracle.windows.size() >= 3) rec.truth_slope = fit_curve_slope(oracle);
        }
        per_seed[k][v] = rec;
      }
    }
  }
  return study;
}

int required(int seeds, int of_ten) { return (seeds * of_ten + 9) / 10; }

// 6: posterior sign probabilities
Verdict regime_detection(const Study& s, const StudyOptions& opt) {
  int neg = 0, unit = 0;
  for (const auto& rec : s.records.at(Design::kFriendship))
    neg += rec.at(Variant::kDistanceDependent).prob_phi_negative > 0.95;
  for (const auto& rec : s.records.at(Design::kInformation))
    unit += rec.at(Variant::kDistanceDependent).prob_phi_unit > 0.95;
  const int need = required(opt.seeds, 8);
  std::string probs = "; P(0<phi<1) by seed:";
  for (const auto& rec : s.records.at(Design::kInformation))
    probs += " " + fixed(rec.at(Variant::kDistanceDependent).prob_phi_unit, 3);
  return {neg >= need && unit >= need,
          "P(phi<0) > 0.95 in " + std::to_string(neg) + "/" + std::to_string(opt.seeds) +
              ", P(0<phi<1) > 0.95 in " + std::to_string(unit) + "/" + std::to_string(opt.seeds) +
              " (need " + std::to_string(need) + ")" + probs};
}

// 7: the edge-independent fit underpredicts mutual ties, the homogeneous fit does not
Verdict ppc_reproduction(const Study& s, const StudyOptions& opt) {
  int ok = 0;
  std::ostringstream detail;
  for (const auto& rec : s.records.at(Design::kHomogeneous)) {
    const PpcResult& ei = rec.at(Variant::kEdgeIndependent).ppc;
    const PpcResult& hom = rec.at(Variant::kHomogeneous).ppc;
    const bool above = ei.observed_stat > ei.upper;
    const bool covered = hom.lower <= hom.observed_stat && hom.observed_stat <= hom.upper;
    ok += above && covered;
  }
  const auto& first = s.records.at(Design::kHomogeneous).front();
  detail << ok << "/" << opt.seeds << " seeds (need " << required(opt.seeds, 8) << "); seed 0: observed "
         << fixed(first.at(Variant::kEdgeIndependent).ppc.observed_stat, 3) << ", edge-independent 97.5% "
         << fixed(first.at(Variant::kEdgeIndependent).ppc.upper, 3) << ", homogeneous ["
         << fixed(first.at(Variant::kHomogeneous).ppc.lower, 3) << ", "
         << fixed(first.at(Variant::kHomogeneous).ppc.upper, 3) << "]";
  return {ok >= required(opt.seeds, 8), detail.str()};
}

// 8: DIC picks the generating variant
Verdict model_selection(const Study& s, const StudyOptions& opt) {
  bool pass = true;
  std::ostringstream detail;
  for (Design which : {Design::kFriendship, Design::kInformation, Design::kHomogeneous}) {
    const Variant truth = which == Design::kHomogeneous ? Variant::kHomogeneous : Variant::kDistanceDependent;
    int hits = 0;
    for (const auto& rec : s.records.at(which)) {
      Variant best = Variant::kEdgeIndependent;
      for (const auto& [v, r] : rec)
        if (r.dic < rec.at(best).dic) best = v;
      hits += best == truth;
    }
    pass = pass && hits >= required(opt.seeds, 7);
    detail << design_name(which) << ": " << hits << "/" << opt.seeds << "; ";
  }
  detail << "DIC(distance-dependent) - DIC(homogeneous) on rho=2,phi=0 by seed:";
  for (const auto& rec : s.records.at(Design::kHomogeneous))
    detail << " " << fixed(rec.at(Variant::kDistanceDependent).dic - rec.at(Variant::kHomogeneous).dic, 3);
  detail << "; ";
  detail << "need " << required(opt.seeds, 7) << " each";
  return {pass, detail.str()};
}

// 10: the local log-odds curve decreases for phi < 0 and is flat for phi = 0.
// The criterion names one data set per design; seed 0 is that data set, and
// the other seeds are reported alongside.
Verdict local_curve(const Study& s, const StudyOptions& opt) {
  const auto& neg = s.records.at(Design::kFriendship);
  const auto& flat = s.records.at(Design::kHomogeneous);
  const FitRecord& a = neg.front().at(Variant::kDistanceDependent);
  const FitRecord& b = flat.front().at(Variant::kDistanceDependent);
  const bool decreasing = a.windows >= 3 && a.spearman < 0;
  const bool covers = b.windows >= 3 && b.slope.ci_low <= 0 && 0 <= b.slope.ci_high;
  int neg_all = 0, cover_all = 0;
  for (const auto& rec : neg) {
    const auto& r = rec.at(Variant::kDistanceDependent);
    neg_all += r.windows >= 3 && r.spearman < 0;
  }
  for (const auto& rec : flat) {
    const auto& r = rec.at(Variant::kDistanceDependent);
    cover_all += r.windows >= 3 && r.slope.ci_low <= 0 && 0 <= r.slope.ci_high;
  }
  std::ostringstream detail;
  detail << "phi=-1.2 Spearman " << fixed(a.spearman, 3) << " over " << a.windows << " windows; phi=0 slope "
         << fixed(b.slope.slope, 3) << " [" << fixed(b.slope.ci_low, 3) << ", " << fixed(b.slope.ci_high, 3)
         << "] (generating positions: " << fixed(b.truth_slope.slope, 3) << " ["
         << fixed(b.truth_slope.ci_low, 3) << ", " << fixed(b.truth_slope.ci_high, 3)
         << "]); all seeds: negative " << neg_all << "/" << opt.seeds << ", covering " << cover_all << "/"
         << opt.seeds;
  return {decreasing && covers, detail.str()};
}

// ---------------------------------------------------------------------------
// 11: every CLI command is byte-reproducible

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict cli_determinism() {
  const fs::path work = fs::temp_directory_path() / "rlsm_acceptance_cli";
  fs::remove_all(work);
  fs::create_directories(work);
  std::ofstream(work / "config.json")
      << R"({"design":{"n":30},"hmc":{"warmup_iters":100,"sampling_iters":150},"ppc":{"draws":100}})";
  const std::string cli = RLSM_CLI_PATH;
  const std::string cfg = " --config " + (work / "config.json").string() + " --seed 11";
  auto dir = [&](const std::string& name, int copy) { return (work / (name + std::to_string(copy))).string(); };
  auto net = [&] { return " --network " + (work / "sim0" / "network.csv").string(); };

  struct Step {
    std::string name;
    std::function<std::string(int)> args;
  };
  const std::vector<Step> steps = {
      {"sim", [&](int c) { return "simulate" + cfg + " --out " + dir("sim", c); }},
      {"init", [&](int c) { return "init" + cfg + net() + " --out " + dir("init", c); }},
      {"fitdd", [&](int c) { return "fit" + cfg + net() + " --out " + dir("fitdd", c); }},
      {"fitei", [&](int c) { return "fit" + cfg + net() + " --variant edge-independent --out " + dir("fitei", c); }},
      {"compare",
       [&](int c) { return "compare" + cfg + net() + " --runs " + dir("fitdd", 0) + " " + dir("fitei", 0) + " --out " + dir("compare", c); }},
      {"diagnose", [&](int c) { return "diagnose" + cfg + net() + " --run " + dir("fitdd", 0) + " --out " + dir("diagnose", c); }},
      {"ppc", [&](int c) { return "ppc" + cfg + net() + " --run " + dir("fitdd", 0) + " --out " + dir("ppc", c); }},
      {"summarize", [&](int c) { return "summarize" + cfg + net() + " --run " + dir("fitdd", 0) + " --out " + dir("summarize", c); }},
  };
  int identical = 0, files = 0;
  std::string problem;
  for (const auto& step : steps) {
    for (int copy : {0, 1}) {
      const std::string cmd = cli + " " + step.args(copy) + " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0 && problem.empty()) problem = step.name + " failed";
    }
    for (const auto& entry : fs::directory_iterator(work / (step.name + "0"))) {
      ++files;
      const fs::path twin = work / (step.name + "1") / entry.path().filename();
      if (fs::exists(twin) && slurp(entry.path()) == slurp(twin))
        ++identical;
      else if (problem.empty())
        problem = step.name + "/" + entry.path().filename().string() + " differs";
    }
  }
  return {problem.empty() && files > 0,
          std::to_string(identical) + "/" + std::to_string(files) + " files identical across " +
              std::to_string(steps.size()) + " commands" + (problem.empty() ? "" : "; " + problem)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  StudyOptions opt;
  std::vector<int> only;
  app.add_option("--seeds", opt.seeds, "replicates per design")->check(CLI::Range(1, 100));
  app.add_option("--warmup", opt.warmup, "warm-up iterations per fit");
  app.add_option("--sampling", opt.sampling, "sampling iterations per fit");
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::set<int> wanted(only.begin(), only.end());
  auto want = [&](int k) { return wanted.empty() || wanted.count(k); };
  std::cout << "replicates per design: " << opt.seeds << ", iterations " << opt.warmup << " warm-up / "
            << opt.sampling << " sampling" << std::endl;

  int failures = 0;
  auto report = [&](int k, const char* title, const Verdict& v) {
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << title << "): " << v.detail
              << std::endl;
    failures += !v.pass;
  };

  const auto start = Clock::now();
  if (want(1)) report(1, "likelihood normalizes", likelihood_normalizes());
  if (want(2)) report(2, "nesting identity", nesting_identity());
  if (want(3)) report(3, "gradient check", gradient_check());
  if (want(4)) report(4, "sampler validation", sampler_validation());
  if (want(5)) report(5, "recovery trend", recovery_trend(opt));
  if (want(6) || want(7) || want(8) || want(10)) {
    const Study study = run_study(opt);
    if (want(6)) report(6, "reciprocity regime detection", regime_detection(study, opt));
    if (want(7)) report(7, "posterior predictive mutual ties", ppc_reproduction(study, opt));
    if (want(8)) report(8, "DIC model selection", model_selection(study, opt));
    if (want(10)) report(10, "local log-odds curve", local_curve(study, opt));
  }
  if (want(9)) report(9, "Procrustes invariance", procrustes_invariance());
  if (want(11)) report(11, "CLI determinism", cli_determinism());
  std::cout << "total " << fixed(seconds_since(start), 5) << " s, " << failures << " failing" << std::endl;
  return failures == 0 ? 0 : 1;
}
