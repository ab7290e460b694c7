#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "reso/simulator.hpp"

namespace reso {

using Json = nlohmann::json;

// JSON with // and /* */ comments.
Json parse_config_text(const std::string& text);
Json load_config_file(const std::string& path);

Json scenario_to_json(const Scenario& s);
// Throws InvalidParameter on unknown or ill-typed entries.
Scenario scenario_from_json(const Json& j);

// A file may name a "preset"; its other entries patch that preset.
Scenario scenario_from_config(const Json& j);

// key is dotted ("controller.omega_o", "disturbance.0.c0") and must exist.
// value is read as JSON when it parses, otherwise as a string.
void apply_override(Json& j, std::string_view key, std::string_view value);
void apply_override(Json& j, std::string_view key, const Json& value);

// "key=value"
void apply_assignment(Json& j, std::string_view assignment);

}  // namespace reso
