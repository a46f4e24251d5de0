#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "hit/config.hpp"
#include "hit/hierarchy.hpp"
#include "hit/synth.hpp"

namespace hit::tools {

/// Overwrites the fields present in `j`; unknown keys raise Error.
void apply_config_json(const nlohmann::json& j, TrackerConfig& cfg);
nlohmann::json config_to_json(const TrackerConfig& cfg);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// Scenario fields present in `j` override the defaults; unknown keys raise Error.
ScenarioSpec scenario_from_json(const nlohmann::json& j);

/// Per-class camera decision, N_l progression and level snapshots.
nlohmann::json hierarchy_dump(const std::string& sequence, const std::vector<RunReport>& reports);

}  // namespace hit::tools
