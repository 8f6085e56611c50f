#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "nlpot/dirichlet.hpp"
#include "nlpot/geometry.hpp"
#include "nlpot/kernel.hpp"
#include "nlpot/params.hpp"
#include "nlpot/regularity.hpp"

namespace nlpot {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

/// Strict parse helpers: unknown keys are rejected with the offending key
/// and its JSON path; missing required keys name the field.
void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& path);

Params parse_params(const json& j, const std::string& path);
KernelSpec parse_kernel(const json& j, const std::string& path);
SolverConfig parse_solver(const json& j, const std::string& path);
Region parse_region(const json& j, int dim, const std::string& path);
Point parse_point(const json& j, int dim, const std::string& path);
BoundaryDataSpec parse_boundary_data(const json& j, int dim, const std::string& path);
DomainFamily parse_family(const json& j, const std::string& path);
std::shared_ptr<const Grid> parse_grid(const json& j, int dim, const std::string& path);

/// FNV-1a 64 over the canonical dump of the config, reported in manifests so
/// identical configs are recognizable across runs.
std::string config_hash(const json& config);

/// Run one CLI subcommand against a validated config, writing the artifact
/// files and manifest.json into out_dir. Returns the process exit status:
/// 0 success, 2 solver non-convergence (partial artifacts retained).
int run_subcommand(const std::string& subcommand, const json& config, const std::string& out_dir,
                   std::uint64_t seed);

} // namespace nlpot
