#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rlsm/diagnostics.hpp"
#include "rlsm/init.hpp"
#include "rlsm/postprocess.hpp"
#include "rlsm/sampler.hpp"
#include "rlsm/simulate.hpp"

namespace rlsm {

/// Draws as CSV: iteration, rho, phi, mu_sr, sigma_s2, sigma_r2, gamma_sr,
/// sigma_z2, s_0.., r_0.., z_0_0..z_{n-1}_{d-1}. Values are written in the
/// shortest form that reads back to the same double.
void write_chain_csv(std::ostream& out, const PosteriorChain& chain);
void save_chain_csv(const std::filesystem::path& path, const PosteriorChain& chain);

/// Reads draws back; n and d are recovered from the header. Sampler
/// statistics are not stored in the CSV and stay empty.
PosteriorChain read_chain_csv(std::istream& in, Variant variant);
PosteriorChain load_chain_csv(const std::filesystem::path& path, Variant variant);

nlohmann::ordered_json to_json(const ModelParamsd& theta);
nlohmann::ordered_json to_json(const HyperParamsd& nu);
nlohmann::ordered_json to_json(const InitReport& report);
nlohmann::ordered_json to_json(const PosteriorSummary& summary);
nlohmann::ordered_json to_json(const NetworkSummary& summary);
nlohmann::ordered_json to_json(const InformationCriteria& ic);
nlohmann::ordered_json to_json(const PpcResult& ppc);
nlohmann::ordered_json to_json(const RecoveryMetrics& metrics);

ModelParamsd model_params_from_json(const nlohmann::ordered_json& j);

void write_curve_csv(std::ostream& out, const LocalOddsCurve& curve);

/// Writes `j` with two-space indentation and a trailing newline.
void save_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

}  // namespace rlsm
