// Command-line front end: simulate, init, fit, compare, diagnose/ppc, summarize.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlsm/chain_io.hpp"
#include "rlsm/diagnostics.hpp"
#include "rlsm/errors.hpp"
#include "rlsm/network.hpp"
#include "rlsm/pipeline.hpp"
#include "rlsm/postprocess.hpp"
#include "rlsm/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::uint64_t seed = 1;
  std::string variant = "distance-dependent";
  int d = 2;
  std::string network;
  std::string network_format = "edge-list";
  std::string out;
  rlsm::HmcConfig hmc;
  rlsm::PriorConstantsd priors;
  rlsm::OptimizerOptions map;
  rlsm::SimDesign design;
  std::string odds_calibration = "mean-log-odds";
  std::vector<std::string> runs;
  std::string run;
  int ppc_draws = 0;  // 0: min(500, chain length)
  double window_width = 2.0;
  double shift = 0.5;
};

// ---------------------------------------------------------------------------
// config file

void reject_unknown(const ordered_json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) throw rlsm::ValidationError("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw rlsm::ValidationError("config: unknown key '" + where + key + "'");
  }
}

template <typename T>
void read_key(const ordered_json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw rlsm::ValidationError(std::string("config: bad value for '") + key + "'");
  }
}

void apply_config(const ordered_json& j, RunConfig& cfg) {
  reject_unknown(j,
                 {"seed", "variant", "d", "network", "network_format", "out", "hmc", "priors", "map",
                  "design", "runs", "run", "ppc", "curve"},
                 "");
  read_key(j, "seed", cfg.seed);
  read_key(j, "variant", cfg.variant);
  read_key(j, "d", cfg.d);
  read_key(j, "network", cfg.network);
  read_key(j, "network_format", cfg.network_format);
  read_key(j, "out", cfg.out);
  read_key(j, "runs", cfg.runs);
  read_key(j, "run", cfg.run);
  if (j.contains("hmc")) {
    const auto& h = j["hmc"];
    reject_unknown(h,
                   {"warmup_iters", "sampling_iters", "target_accept", "max_tree_depth",
                    "fixed_trajectory", "n_leapfrog", "init_step_size"},
                   "hmc.");
    read_key(h, "warmup_iters", cfg.hmc.warmup_iters);
    read_key(h, "sampling_iters", cfg.hmc.sampling_iters);
    read_key(h, "target_accept", cfg.hmc.target_accept);
    read_key(h, "max_tree_depth", cfg.hmc.max_tree_depth);
    read_key(h, "fixed_trajectory", cfg.hmc.fixed_trajectory);
    read_key(h, "n_leapfrog", cfg.hmc.n_leapfrog);
    read_key(h, "init_step_size", cfg.hmc.init_step_size);
  }
  if (j.contains("priors")) {
    const auto& p = j["priors"];
    reject_unknown(p, {"a_s", "b_s", "a_r", "b_r", "a_z", "b_z", "sigma_mu", "sigma_rho", "sigma_phi"},
                   "priors.");
    read_key(p, "a_s", cfg.priors.a_s);
    read_key(p, "b_s", cfg.priors.b_s);
    read_key(p, "a_r", cfg.priors.a_r);
    read_key(p, "b_r", cfg.priors.b_r);
    read_key(p, "a_z", cfg.priors.a_z);
    read_key(p, "b_z", cfg.priors.b_z);
    read_key(p, "sigma_mu", cfg.priors.sigma_mu);
    read_key(p, "sigma_rho", cfg.priors.sigma_rho);
    read_key(p, "sigma_phi", cfg.priors.sigma_phi);
  }
  if (j.contains("map")) {
    const auto& m = j["map"];
    reject_unknown(m, {"max_iterations", "gradient_tolerance", "history"}, "map.");
    read_key(m, "max_iterations", cfg.map.max_iterations);
    read_key(m, "gradient_tolerance", cfg.map.gradient_tolerance);
    read_key(m, "history", cfg.map.history);
  }
  if (j.contains("design")) {
    const auto& s = j["design"];
    reject_unknown(s,
                   {"n", "sigma_s2", "sigma_r2", "gamma_sr", "target_density", "mixture_means",
                    "mixture_var", "phi_low", "phi_high", "target_mean_odds_ratio",
                    "odds_calibration", "rho_fixed"},
                   "design.");
    read_key(s, "n", cfg.design.n);
    read_key(s, "sigma_s2", cfg.design.sigma_s2);
    read_key(s, "sigma_r2", cfg.design.sigma_r2);
    read_key(s, "gamma_sr", cfg.design.gamma_sr);
    read_key(s, "target_density", cfg.design.target_density);
    read_key(s, "mixture_var", cfg.design.mixture_var);
    read_key(s, "phi_low", cfg.design.phi_low);
    read_key(s, "phi_high", cfg.design.phi_high);
    read_key(s, "target_mean_odds_ratio", cfg.design.target_mean_odds_ratio);
    read_key(s, "odds_calibration", cfg.odds_calibration);
    if (s.contains("rho_fixed") && !s["rho_fixed"].is_null()) {
      double rho = 0.0;
      read_key(s, "rho_fixed", rho);
      cfg.design.rho_fixed = rho;
    }
    if (s.contains("mixture_means")) {
      std::vector<std::vector<double>> means;
      read_key(s, "mixture_means", means);
      cfg.design.mixture_means.clear();
      for (const auto& m : means)
        cfg.design.mixture_means.push_back(Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()));
    }
  }
  if (j.contains("ppc")) {
    reject_unknown(j["ppc"], {"draws"}, "ppc.");
    read_key(j["ppc"], "draws", cfg.ppc_draws);
  }
  if (j.contains("curve")) {
    reject_unknown(j["curve"], {"window_width", "shift"}, "curve.");
    read_key(j["curve"], "window_width", cfg.window_width);
    read_key(j["curve"], "shift", cfg.shift);
  }
}

ordered_json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw rlsm::ValidationError("cannot open " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw rlsm::ValidationError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

rlsm::OddsRatioCalibration parse_calibration(const std::string& name) {
  if (name == "mean-log-odds") return rlsm::OddsRatioCalibration::kMeanLogOdds;
  if (name == "mean-odds") return rlsm::OddsRatioCalibration::kMeanOdds;
  throw rlsm::ValidationError("unknown odds_calibration '" + name + "'");
}

// Everything that determines a command's output; `out` is excluded so the
// same run written to two places is byte-identical.
ordered_json snapshot(const std::string& command, const RunConfig& cfg) {
  ordered_json j;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["variant"] = cfg.variant;
  j["d"] = cfg.d;
  j["network"] = cfg.network;
  j["network_format"] = cfg.network_format;
  j["hmc"] = {{"warmup_iters", cfg.hmc.warmup_iters},
              {"sampling_iters", cfg.hmc.sampling_iters},
              {"target_accept", cfg.hmc.target_accept},
              {"max_tree_depth", cfg.hmc.max_tree_depth},
              {"fixed_trajectory", cfg.hmc.fixed_trajectory},
              {"n_leapfrog", cfg.hmc.n_leapfrog},
              {"init_step_size", cfg.hmc.init_step_size}};
  const auto& p = cfg.priors;
  j["priors"] = {{"a_s", p.a_s}, {"b_s", p.b_s}, {"a_r", p.a_r}, {"b_r", p.b_r},
                 {"a_z", p.a_z}, {"b_z", p.b_z}, {"sigma_mu", p.sigma_mu},
                 {"sigma_rho", p.sigma_rho}, {"sigma_phi", p.sigma_phi}};
  j["map"] = {{"max_iterations", cfg.map.max_iterations},
              {"gradient_tolerance", cfg.map.gradient_tolerance},
              {"history", cfg.map.history}};
  const auto& s = cfg.design;
  std::vector<std::vector<double>> means;
  for (const auto& m : s.mixture_means) means.emplace_back(m.data(), m.data() + m.size());
  j["design"] = {{"n", s.n},
                 {"sigma_s2", s.sigma_s2},
                 {"sigma_r2", s.sigma_r2},
                 {"gamma_sr", s.gamma_sr},
                 {"target_density", s.target_density},
                 {"mixture_means", means},
                 {"mixture_var", s.mixture_var},
                 {"phi_low", s.phi_low},
                 {"phi_high", s.phi_high},
                 {"target_mean_odds_ratio", s.target_mean_odds_ratio},
                 {"odds_calibration", cfg.odds_calibration},
                 {"rho_fixed", s.rho_fixed ? ordered_json(*s.rho_fixed) : ordered_json(nullptr)}};
  j["runs"] = cfg.runs;
  j["run"] = cfg.run;
  j["ppc"] = {{"draws", cfg.ppc_draws}};
  j["curve"] = {{"window_width", cfg.window_width}, {"shift", cfg.shift}};
  return j;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// run directory

class RunDir {
 public:
  RunDir(const std::string& command, const RunConfig& cfg) : config_(snapshot(command, cfg)) {
    if (cfg.out.empty()) throw rlsm::ValidationError(command + ": --out is required");
    root_ = cfg.out;
    fs::create_directories(root_);
    config_hash_ = hex64(fnv1a(config_.dump()));
    rlsm::save_json(root_ / "config.json", config_);
    metadata_["command"] = command;
    metadata_["version"] = kVersion;
    metadata_["config_hash"] = config_hash_;
    metadata_["seed"] = cfg.seed;
  }

  const fs::path& root() const { return root_; }
  ordered_json& metadata() { return metadata_; }

  void log(const std::string& line) { log_ << line << '\n'; }

  void finish(const std::string& status) {
    metadata_["status"] = status;
    rlsm::save_json(root_ / "metadata.json", metadata_);
    std::ofstream out(root_ / "log.txt", std::ios::binary);
    out << log_.str();
  }

 private:
  fs::path root_;
  ordered_json config_;
  std::string config_hash_;
  ordered_json metadata_;
  std::ostringstream log_;
};

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

rlsm::DirectedNetwork load_input_network(const RunConfig& cfg, const std::string& command) {
  if (cfg.network.empty()) throw rlsm::ValidationError(command + ": --network is required");
  return rlsm::load_network(cfg.network, rlsm::parse_network_format(cfg.network_format));
}

std::string network_hash_hex(const rlsm::DirectedNetwork& net) { return hex64(rlsm::network_hash(net)); }

void check_common(const RunConfig& cfg) {
  if (cfg.d < 1) throw rlsm::ValidationError("d must be at least 1");
  rlsm::parse_variant(cfg.variant);
  cfg.hmc.validate();
  if (!cfg.priors.is_valid()) throw rlsm::ValidationError("prior constants must be positive");
}

// Runs `body` with the directory's metadata marked failed if it throws.
template <typename Body>
void guarded(RunDir& dir, Body body) {
  try {
    body();
  } catch (const std::exception& e) {
    dir.metadata()["error"] = e.what();
    dir.log(std::string("error: ") + e.what());
    dir.finish("failed");
    throw;
  }
  dir.finish("ok");
}

// ---------------------------------------------------------------------------
// commands

void cmd_simulate(RunConfig cfg) {
  cfg.design.d = cfg.d;
  cfg.design.seed = cfg.seed;
  cfg.design.odds_calibration = parse_calibration(cfg.odds_calibration);
  cfg.design.validate();
  RunDir dir("simulate", cfg);
  guarded(dir, [&] {
    const rlsm::SimInstance inst = rlsm::generate(cfg.design);
    rlsm::save_network(dir.root() / "network.csv", inst.net, rlsm::NetworkFormat::kEdgeList);
    ordered_json truth = rlsm::to_json(inst.truth);
    truth["mu_sr"] = inst.mu_sr;
    rlsm::save_json(dir.root() / "truth.json", truth);
    ordered_json stats;
    stats["expected_density"] = inst.expected_density;
    stats["realized_density"] = inst.realized_density;
    stats["realized_mean_rho_ij"] = inst.realized_mean_rho_ij;
    stats["network"] = rlsm::to_json(rlsm::summarize(inst.net));
    rlsm::save_json(dir.root() / "stats.json", stats);
    dir.metadata()["network_hash"] = network_hash_hex(inst.net);
    dir.log("simulate: n=" + std::to_string(cfg.design.n) + " seed=" + std::to_string(cfg.seed));
    dir.log("phi=" + fmt(inst.truth.phi) + " rho=" + fmt(inst.truth.rho) + " mu_sr=" + fmt(inst.mu_sr));
    dir.log("realized density=" + fmt(inst.realized_density));
  });
}

void cmd_init(const RunConfig& cfg) {
  check_common(cfg);
  const auto net = load_input_network(cfg, "init");
  RunDir dir("init", cfg);
  guarded(dir, [&] {
    const auto report = rlsm::initialize(net, cfg.d, cfg.priors, rlsm::parse_variant(cfg.variant));
    rlsm::save_json(dir.root() / "init.json", rlsm::to_json(report));
    dir.metadata()["network_hash"] = network_hash_hex(net);
    dir.log("init: n=" + std::to_string(net.size()) + " d=" + std::to_string(cfg.d));
    for (const auto& note : report.notes) dir.log("note: " + note);
  });
}

void cmd_fit(RunConfig cfg) {
  check_common(cfg);
  const auto net = load_input_network(cfg, "fit");
  cfg.hmc.seed = cfg.seed;
  RunDir dir("fit", cfg);
  guarded(dir, [&] {
    rlsm::FitOptions opt;
    opt.d = cfg.d;
    opt.variant = rlsm::parse_variant(cfg.variant);
    opt.hmc = cfg.hmc;
    opt.priors = cfg.priors;
    opt.map = cfg.map;
    dir.log("fit: variant=" + cfg.variant + " n=" + std::to_string(net.size()) +
            " d=" + std::to_string(cfg.d) + " seed=" + std::to_string(cfg.seed));
    const rlsm::FitResult fit = rlsm::fit_model(net, opt);
    rlsm::save_chain_csv(dir.root() / "chain.csv", fit.chain);
    rlsm::save_json(dir.root() / "summary.json", rlsm::to_json(fit.summary));
    rlsm::save_json(dir.root() / "init.json", rlsm::to_json(fit.init));
    ordered_json map;
    map["theta"] = rlsm::to_json(fit.map.theta);
    map["nu"] = rlsm::to_json(fit.map.nu);
    map["log_posterior"] = fit.map.log_posterior;
    map["gradient_max_norm"] = fit.map.gradient_max_norm;
    map["iterations"] = fit.map.iterations;
    map["converged"] = fit.map.converged;
    rlsm::save_json(dir.root() / "map.json", map);

    auto& meta = dir.metadata();
    meta["variant"] = cfg.variant;
    meta["n"] = net.size();
    meta["d"] = cfg.d;
    meta["network_hash"] = network_hash_hex(net);
    meta["aligned"] = fit.chain.aligned;
    meta["draws"] = fit.chain.draws.size();
    meta["step_size"] = fit.chain.step_size;
    meta["acceptance_rate"] = fit.chain.mean_accept;
    meta["divergences"] = fit.chain.divergences;
    meta["divergence_warning"] = fit.chain.divergence_warning;
    meta["warnings"] = fit.warnings;
    dir.log("step size=" + fmt(fit.chain.step_size) + " acceptance=" + fmt(fit.chain.mean_accept) +
            " divergences=" + std::to_string(fit.chain.divergences));
    for (const auto& w : fit.warnings) dir.log("warning: " + w);
    if (fit.chain.divergence_warning)
      std::cerr << "WARNING: more than 10% of post-warm-up transitions diverged\n";
  });
}

struct LoadedRun {
  fs::path path;
  ordered_json metadata;
  rlsm::Variant variant;
  rlsm::PosteriorChain chain;
};

LoadedRun load_run(const fs::path& path) {
  LoadedRun run;
  run.path = path;
  run.metadata = read_json_file(path / "metadata.json");
  if (run.metadata.value("command", "") != "fit" || run.metadata.value("status", "") != "ok")
    throw rlsm::ValidationError(path.string() + " is not a completed fit run");
  run.variant = rlsm::parse_variant(run.metadata.at("variant").get<std::string>());
  const fs::path chain = path / "chain.csv";
  if (!fs::exists(chain)) throw rlsm::ValidationError("chain missing in " + path.string());
  run.chain = rlsm::load_chain_csv(chain, run.variant);
  run.chain.aligned = run.metadata.value("aligned", false);
  return run;
}

void cmd_compare(const RunConfig& cfg) {
  if (cfg.runs.empty()) throw rlsm::ValidationError("compare: at least one --runs directory is required");
  const auto net = load_input_network(cfg, "compare");
  const std::string hash = network_hash_hex(net);
  std::vector<LoadedRun> runs;
  for (const auto& r : cfg.runs) {
    runs.push_back(load_run(r));
    if (runs.back().metadata.value("network_hash", "") != hash)
      throw rlsm::ValidationError("compare: " + r + " was fitted to a different network");
  }
  RunDir dir("compare", cfg);
  guarded(dir, [&] {
    std::vector<rlsm::InformationCriteria> ics;
    for (const auto& r : runs) ics.push_back(rlsm::information_criteria(r.chain, net, r.variant));
    auto best = [&](auto get) {
      std::size_t arg = 0;
      for (std::size_t k = 1; k < ics.size(); ++k)
        if (get(ics[k]) < get(ics[arg])) arg = k;
      return arg;
    };
    const std::size_t best_aic = best([](const auto& ic) { return ic.aic; });
    const std::size_t best_bic = best([](const auto& ic) { return ic.bic; });
    const std::size_t best_dic = best([](const auto& ic) { return ic.dic; });
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < ics.size(); ++k) {
      ordered_json row = rlsm::to_json(ics[k]);
      row["run"] = runs[k].path.filename().string();
      row["best_aic"] = k == best_aic;
      row["best_bic"] = k == best_bic;
      row["best_dic"] = k == best_dic;
      rows.push_back(row);
      dir.log(rlsm::to_string(ics[k].variant) + ": AIC=" + fmt(ics[k].aic) + " BIC=" + fmt(ics[k].bic) +
              " DIC=" + fmt(ics[k].dic));
    }
    rlsm::save_json(dir.root() / "comparison.json", {{"network_hash", hash}, {"models", rows}});
    dir.metadata()["network_hash"] = hash;
  });
}

void cmd_diagnose(const RunConfig& cfg, const std::string& name) {
  if (cfg.run.empty()) throw rlsm::ValidationError(name + ": --run is required");
  const auto net = load_input_network(cfg, name);
  const LoadedRun run = load_run(cfg.run);
  if (run.metadata.value("network_hash", "") != network_hash_hex(net))
    throw rlsm::ValidationError(name + ": run was fitted to a different network");
  const int available = static_cast<int>(run.chain.draws.size());
  const int draws = cfg.ppc_draws == 0 ? std::min(500, available) : cfg.ppc_draws;
  if (draws < 1 || draws > available)
    throw rlsm::ValidationError(name + ": ppc draws must be between 1 and the chain length");
  RunDir dir(name, cfg);
  guarded(dir, [&] {
    const auto ppc = rlsm::posterior_predictive_check(run.chain, net, draws, cfg.seed);
    rlsm::save_json(dir.root() / "ppc.json", rlsm::to_json(ppc));
    const auto mean = rlsm::posterior_mean(run.chain);
    const auto curve = rlsm::local_log_odds_curve(net, mean.theta.z, cfg.window_width, cfg.shift);
    std::ofstream csv(dir.root() / "curve.csv", std::ios::binary);
    rlsm::write_curve_csv(csv, curve);
    ordered_json trend;
    std::vector<double> mid, rho;
    for (const auto& w : curve.windows) {
      mid.push_back(w.midpoint);
      rho.push_back(w.rho_hat);
    }
    trend["windows"] = curve.windows.size();
    if (curve.windows.size() >= 3) {
      const auto slope = rlsm::fit_curve_slope(curve);
      trend["spearman"] = rlsm::spearman_correlation(mid, rho);
      trend["slope"] = {{"estimate", slope.slope}, {"se", slope.slope_se},
                        {"ci_low", slope.ci_low}, {"ci_high", slope.ci_high}};
    }
    rlsm::save_json(dir.root() / "curve_trend.json", trend);
    dir.metadata()["network_hash"] = network_hash_hex(net);
    dir.metadata()["aligned"] = run.chain.aligned;
    dir.log(name + ": observed mutual-tie fraction=" + fmt(ppc.observed_stat) +
            " tail probability=" + fmt(ppc.tail_probability));
    dir.log("curve windows=" + std::to_string(curve.windows.size()));
  });
}

void cmd_summarize(const RunConfig& cfg) {
  if (cfg.run.empty() && cfg.network.empty())
    throw rlsm::ValidationError("summarize: give --run, --network, or both");
  std::optional<LoadedRun> run;
  if (!cfg.run.empty()) run = load_run(cfg.run);
  std::optional<rlsm::DirectedNetwork> net;
  if (!cfg.network.empty()) net = load_input_network(cfg, "summarize");
  RunDir dir("summarize", cfg);
  guarded(dir, [&] {
    if (net) {
      rlsm::save_json(dir.root() / "network_summary.json", rlsm::to_json(rlsm::summarize(*net)));
      dir.metadata()["network_hash"] = network_hash_hex(*net);
      dir.log("network: n=" + std::to_string(net->size()));
    }
    if (run) {
      rlsm::save_json(dir.root() / "summary.json", rlsm::to_json(rlsm::summarize_posterior(
                                     run->chain, std::min<int>(100, run->chain.draws.size()))));
      dir.metadata()["aligned"] = run->chain.aligned;
      dir.log("chain: draws=" + std::to_string(run->chain.draws.size()));
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent space model with distance-dependent reciprocity"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant, network, out, run;
  std::optional<int> d;
  std::vector<std::string> runs;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--variant", variant, "edge-independent, homogeneous or distance-dependent");
    sub->add_option("--d", d, "latent dimension");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--network", network, "network file");
  };
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic network");
  auto* init = app.add_subcommand("init", "compute the starting point");
  auto* fit = app.add_subcommand("fit", "sample the posterior");
  auto* compare = app.add_subcommand("compare", "information criteria across fitted runs");
  auto* diagnose = app.add_subcommand("diagnose", "posterior predictive check and local log odds");
  auto* ppc = app.add_subcommand("ppc", "alias of diagnose");
  auto* summarize = app.add_subcommand("summarize", "summarize a network or a fitted run");
  for (auto* sub : {simulate, init, fit, compare, diagnose, ppc, summarize}) add_common(sub);
  compare->add_option("--runs", runs, "fit run directories");
  for (auto* sub : {diagnose, ppc, summarize}) sub->add_option("--run", run, "fit run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config(read_json_file(config_path), cfg);
    if (seed) cfg.seed = *seed;
    if (variant) cfg.variant = *variant;
    if (d) cfg.d = *d;
    if (out) cfg.out = *out;
    if (network) cfg.network = *network;
    if (run) cfg.run = *run;
    if (!runs.empty()) cfg.runs = runs;

    if (simulate->parsed()) cmd_simulate(cfg);
    else if (init->parsed()) cmd_init(cfg);
    else if (fit->parsed()) cmd_fit(cfg);
    else if (compare->parsed()) cmd_compare(cfg);
    else if (diagnose->parsed()) cmd_diagnose(cfg, "diagnose");
    else if (ppc->parsed()) cmd_diagnose(cfg, "ppc");
    else if (summarize->parsed()) cmd_summarize(cfg);
  } catch (const rlsm::ValidationError& e) {
    // parse, range and dimension errors derive from this one
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
