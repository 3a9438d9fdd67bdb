#pragma once

#include <string>

#include <json.hpp>

#include "relulab/types.hpp"

namespace relulab {

// JSON document {widths, weights (nested arrays, row-major), biases}.
// Doubles survive a dump/parse round trip bit-exactly.
nlohmann::ordered_json params_to_json(const Params& params);
Params params_from_json(const nlohmann::json& j);

std::string params_to_json_string(const Params& params);
Params params_from_json_string(const std::string& text);

void save_params(const Params& params, const std::string& path);
Params load_params(const std::string& path);

}  // namespace relulab
