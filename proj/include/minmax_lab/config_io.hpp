#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "minmax_lab/harness.hpp"

namespace minmax_lab {

// JSON mirrors ExperimentConfig field for field. Missing keys keep the value
// from `defaults`; unknown keys throw std::invalid_argument. Lambda accepts
// the string "inf".
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const ExperimentConfig& defaults = base_config());

// Applies "dotted.path=value" overrides to a config document. The value is
// parsed as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Sweep file: {"base": {...}, "eta_D_grid": [...], "eta_G_grid": [...],
// "seeds": [...]}. A grid may instead be {"log_space": [lo, hi, n]}.
nlohmann::json to_json(const SweepSpec& spec);
SweepSpec sweep_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace minmax_lab
