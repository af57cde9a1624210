#pragma once

#include "eboat/episode.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>

namespace eboat {

/// Everything a run needs: simulator configuration plus the mission.
struct SimConfig {
    EpisodeConfig episode = default_episode_config();
    Mission mission = default_mission();
};

/// The file could not be read at all (missing, permissions, not JSON).
class ConfigFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Overlays `doc` onto the defaults. Angles in the document are degrees.
/// Type errors and invariant violations are all collected into one ConfigError.
SimConfig parse_config(const nlohmann::json& doc);

Mission parse_mission(const nlohmann::json& doc);

SimConfig load_config(const std::filesystem::path& path);
Mission load_mission(const std::filesystem::path& path);

/// Full document for `config`. Parsing it back reproduces `config` up to
/// degree/radian rounding.
nlohmann::json config_to_json(const SimConfig& config);
nlohmann::json mission_to_json(const Mission& mission);

/// Every violation across vessel, world, sensors, episode and mission.
std::vector<Violation> check_sim_config(const SimConfig& config);

}  // namespace eboat
