#pragma once

// JSON form of ProblemConfig. Keys are the field names verbatim; extra_potential
// is an array of {"type": "gaussian" | "barrier" | "exponential", ...} objects.

#include "json.hpp"
#include <string>

#include "sqm/model.hpp"

namespace sqm {

/// Throws MalformedConfig naming the offending field.
ProblemConfig parse_config(const nlohmann::json& j);
ProblemConfig load_config(const std::string& path);

nlohmann::ordered_json config_to_json(const ProblemConfig& config);

}  // namespace sqm
