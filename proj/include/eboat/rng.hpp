#pragma once

#include <cstdint>
#include <random>

namespace eboat {

/// Named substreams derived from an episode's master seed.
enum class Stream : std::uint64_t {
    Wind = 1,
    WavePhases = 2,
    Sensors = 3,
    InitialState = 4,
};

/// splitmix64 finalizer; mixes (master, stream) into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream) {
    return derive_seed(master, static_cast<std::uint64_t>(stream));
}

/// Deterministic random stream. All randomness in an episode flows through these.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace eboat
