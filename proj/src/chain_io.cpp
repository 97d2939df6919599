#include "rlsm/chain_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rlsm {

using nlohmann::ordered_json;

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

double parse_double(const std::string& field, int line_no) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw ParseError("bad number '" + field + "'", line_no);
  return v;
}

}  // namespace

void write_chain_csv(std::ostream& out, const PosteriorChain& chain) {
  out << "iteration,rho,phi,mu_sr,sigma_s2,sigma_r2,gamma_sr,sigma_z2";
  for (int i = 0; i < chain.n; ++i) out << ",s_" << i;
  for (int i = 0; i < chain.n; ++i) out << ",r_" << i;
  for (int i = 0; i < chain.n; ++i)
    for (int k = 0; k < chain.d; ++k) out << ",z_" << i << '_' << k;
  out << '\n';
  std::string row;
  for (std::size_t it = 0; it < chain.draws.size(); ++it) {
    const Draw& w = chain.draws[it];
    row = std::to_string(it);
    for (double v : {w.theta.rho, w.theta.phi, w.nu.mu_sr, w.nu.sigma_s2, w.nu.sigma_r2,
                     w.nu.gamma_sr, w.nu.sigma_z2})
      row += ',' + format_double(v);
    for (int i = 0; i < chain.n; ++i) row += ',' + format_double(w.theta.s(i));
    for (int i = 0; i < chain.n; ++i) row += ',' + format_double(w.theta.r(i));
    for (int i = 0; i < chain.n; ++i)
      for (int k = 0; k < chain.d; ++k) row += ',' + format_double(w.theta.z(i, k));
    out << row << '\n';
  }
}

void save_chain_csv(const std::filesystem::path& path, const PosteriorChain& chain) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_chain_csv(out, chain);
}

PosteriorChain read_chain_csv(std::istream& in, Variant variant) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty chain file", 1);
  const auto header = split_csv(line);
  int n = 0;
  while (8 + n < static_cast<int>(header.size()) && header[8 + n].starts_with("s_")) ++n;
  const int remaining = static_cast<int>(header.size()) - 8 - 2 * n;
  if (n < 2 || remaining <= 0 || remaining % n != 0 || header[0] != "iteration")
    throw ParseError("unrecognised chain header", 1);
  PosteriorChain chain;
  chain.variant = variant;
  chain.n = n;
  chain.d = remaining / n;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) throw ParseError("wrong number of columns", line_no);
    std::vector<double> v(fields.size());
    for (std::size_t k = 1; k < fields.size(); ++k) v[k] = parse_double(fields[k], line_no);
    Draw w{ModelParamsd::Zero(n, chain.d), {}};
    w.theta.rho = v[1];
    w.theta.phi = v[2];
    w.nu = {v[3], v[4], v[5], v[6], v[7]};
    for (int i = 0; i < n; ++i) w.theta.s(i) = v[8 + i];
    for (int i = 0; i < n; ++i) w.theta.r(i) = v[8 + n + i];
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < chain.d; ++k) w.theta.z(i, k) = v[8 + 2 * n + i * chain.d + k];
    chain.draws.push_back(std::move(w));
  }
  return chain;
}

PosteriorChain load_chain_csv(const std::filesystem::path& path, Variant variant) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open chain file " + path.string());
  return read_chain_csv(in, variant);
}

ordered_json to_json(const ModelParamsd& theta) {
  ordered_json j;
  j["n"] = theta.num_nodes();
  j["d"] = theta.dim();
  j["rho"] = theta.rho;
  j["phi"] = theta.phi;
  j["s"] = std::vector<double>(theta.s.data(), theta.s.data() + theta.s.size());
  j["r"] = std::vector<double>(theta.r.data(), theta.r.data() + theta.r.size());
  ordered_json z = ordered_json::array();
  for (int i = 0; i < theta.num_nodes(); ++i) {
    std::vector<double> row(theta.dim());
    for (int k = 0; k < theta.dim(); ++k) row[k] = theta.z(i, k);
    z.push_back(row);
  }
  j["z"] = z;
  return j;
}

ModelParamsd model_params_from_json(const ordered_json& j) {
  const int n = j.at("n").get<int>();
  const int d = j.at("d").get<int>();
  ModelParamsd theta = ModelParamsd::Zero(n, d);
  theta.rho = j.at("rho").get<double>();
  theta.phi = j.at("phi").get<double>();
  const auto s = j.at("s").get<std::vector<double>>();
  const auto r = j.at("r").get<std::vector<double>>();
  const auto z = j.at("z").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(s.size()) != n || static_cast<int>(r.size()) != n || static_cast<int>(z.size()) != n)
    throw DimensionError("model parameters: array lengths do not match n");
  for (int i = 0; i < n; ++i) {
    theta.s(i) = s[i];
    theta.r(i) = r[i];
    if (static_cast<int>(z[i].size()) != d) throw DimensionError("model parameters: z row length != d");
    for (int k = 0; k < d; ++k) theta.z(i, k) = z[i][k];
  }
  return theta;
}

ordered_json to_json(const HyperParamsd& nu) {
  return {{"mu_sr", nu.mu_sr},
          {"sigma_s2", nu.sigma_s2},
          {"sigma_r2", nu.sigma_r2},
          {"gamma_sr", nu.gamma_sr},
          {"sigma_z2", nu.sigma_z2}};
}

ordered_json to_json(const InitReport& report) {
  ordered_json j;
  j["theta0"] = to_json(report.theta0);
  j["nu0"] = to_json(report.nu0);
  j["mds_eigenvalues"] = std::vector<double>(report.mds_eigenvalues.data(),
                                             report.mds_eigenvalues.data() + report.mds_eigenvalues.size());
  j["lr_coefficients"] = {{"beta0", report.beta0}, {"rho0", report.rho0}, {"phi0", report.phi0}};
  j["notes"] = report.notes;
  return j;
}

ordered_json to_json(const PosteriorSummary& summary) {
  ordered_json j;
  j["num_draws"] = summary.num_draws;
  j["phi_events"] = {{"P(phi<0)", summary.prob_phi_negative},
                     {"P(0<phi<1)", summary.prob_phi_unit_interval},
                     {"P(phi>1)", summary.prob_phi_above_one}};
  ordered_json params;
  for (const auto& key : summary.order) {
    const auto& p = summary.parameters.at(key);
    params[key] = {{"mean", p.mean}, {"sd", p.sd}, {"lower_95", p.lower}, {"upper_95", p.upper}};
  }
  j["parameters"] = params;
  return j;
}

ordered_json to_json(const NetworkSummary& summary) {
  return {{"n", summary.n},
          {"density", summary.density},
          {"mutual_tie_fraction", summary.mutual_tie_fraction},
          {"dyad_counts",
           {{"mutual", summary.count(DyadValue::kMutual)},
            {"asym_out", summary.count(DyadValue::kAsymOut)},
            {"asym_in", summary.count(DyadValue::kAsymIn)},
            {"null", summary.count(DyadValue::kNull)}}}};
}

ordered_json to_json(const InformationCriteria& ic) {
  return {{"variant", to_string(ic.variant)},
          {"aic", ic.aic},
          {"bic", ic.bic},
          {"dic", ic.dic},
          {"log_lik_at_estimate", ic.log_lik_at_estimate},
          {"mean_deviance", ic.mean_deviance},
          {"p_effective", ic.p_effective},
          {"num_parameters", ic.num_parameters},
          {"num_dyads", ic.num_dyads}};
}

ordered_json to_json(const PpcResult& ppc) {
  return {{"observed_stat", ppc.observed_stat},
          {"tail_probability", ppc.tail_probability},
          {"replicate_lower_2.5", ppc.lower},
          {"replicate_upper_97.5", ppc.upper},
          {"replicate_stats", ppc.replicate_stats}};
}

ordered_json to_json(const RecoveryMetrics& m) {
  return {{"mse_s", m.mse_s},
          {"mse_r", m.mse_r},
          {"abs_dev_rho", m.abs_dev_rho},
          {"abs_dev_phi", m.abs_dev_phi},
          {"mse_z_aligned", m.mse_z_aligned}};
}

void write_curve_csv(std::ostream& out, const LocalOddsCurve& curve) {
  out << "lower,upper,midpoint,rho_hat,ci_low,ci_high,n_mutual,n_out,n_in,n_null\n";
  for (const auto& w : curve.windows) {
    out << format_double(w.lower) << ',' << format_double(w.upper) << ',' << format_double(w.midpoint)
        << ',' << format_double(w.rho_hat) << ',' << format_double(w.ci_low) << ','
        << format_double(w.ci_high) << ',' << w.counts.mutual << ',' << w.counts.out << ','
        << w.counts.in << ',' << w.counts.null << '\n';
  }
}

void save_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace rlsm
