#pragma once

#include "eboat/episode.hpp"

#include <string>
#include <vector>

namespace eboat {

/// Top-down SVG of trajectories (east to the right, north up) with the
/// mission's labeled waypoints. Output bytes depend only on the inputs.
/// Throws std::invalid_argument on an empty trajectory set.
std::string render_trajectories_svg(const std::vector<EpisodeLog>& logs, const Mission& mission);

}  // namespace eboat
