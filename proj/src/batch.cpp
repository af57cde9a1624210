#include "eboat/batch.hpp"

#include <exception>

namespace eboat {

namespace {

EpisodeOutcome run_one(const EpisodeConfig& config, const Mission& mission, std::uint64_t seed,
                       ControllerKind kind) {
    Environment env(config);
    if (kind == ControllerKind::Baseline) {
        return run_scripted_baseline(env, seed, mission);
    }
    return run_episode(env, seed, [](const Observation&) { return Action{}; }, mission);
}

}  // namespace

std::vector<EpisodeOutcome> run_batch_serial(const EpisodeConfig& config, const Mission& mission,
                                             const std::vector<std::uint64_t>& seeds, ControllerKind controller) {
    std::vector<EpisodeOutcome> out;
    out.reserve(seeds.size());
    for (auto seed : seeds) {
        out.push_back(run_one(config, mission, seed, controller));
    }
    return out;
}

std::vector<EpisodeOutcome> run_batch_parallel(const EpisodeConfig& config, const Mission& mission,
                                               const std::vector<std::uint64_t>& seeds, ControllerKind controller) {
    // Validate once up front so configuration errors surface on the caller's thread.
    Environment probe(config);
    (void)probe;

    const auto n = static_cast<std::ptrdiff_t>(seeds.size());
    std::vector<EpisodeOutcome> out(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            out[idx] = run_one(config, mission, seeds[idx], controller);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }

    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

}  // namespace eboat
