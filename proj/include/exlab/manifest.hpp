#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "exlab/params.hpp"

namespace exlab {

/// Provenance record written next to every output file. `derived` holds
/// command-specific results (t_star, betas, event counters, ...).
nlohmann::json make_manifest(const std::string& command,
                             const std::vector<std::string>& argv,
                             const ModelParams& params);

/// Variant for commands whose inputs are not a ModelParams (the caller
/// fills doc["params"] itself).
nlohmann::json make_manifest(const std::string& command,
                             const std::vector<std::string>& argv);

/// ISO 8601 UTC, second resolution.
std::string utc_timestamp();

void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace exlab
