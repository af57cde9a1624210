#pragma once

#include "eboat/episode.hpp"

#include <cstdint>
#include <vector>

namespace eboat {

enum class ControllerKind {
    Baseline,
    Zero,
};

/// One episode per seed, in seed order. Reference implementation.
std::vector<EpisodeOutcome> run_batch_serial(const EpisodeConfig& config, const Mission& mission,
                                             const std::vector<std::uint64_t>& seeds, ControllerKind controller);

/// Same results as run_batch_serial, episodes spread over OpenMP threads.
/// Each episode owns its environment and RNG streams, so the output is
/// identical to the serial version for any thread count.
std::vector<EpisodeOutcome> run_batch_parallel(const EpisodeConfig& config, const Mission& mission,
                                               const std::vector<std::uint64_t>& seeds, ControllerKind controller);

}  // namespace eboat
