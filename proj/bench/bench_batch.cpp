// Serial vs OpenMP batch of baseline episodes.
//   bench_batch [episodes=20] [repeats=3]

#include "eboat/batch.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numeric>

namespace {

bool same_logs(const std::vector<eboat::EpisodeOutcome>& a, const std::vector<eboat::EpisodeOutcome>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& ra = a[i].log.records;
        const auto& rb = b[i].log.records;
        if (ra.size() != rb.size()) return false;
        for (std::size_t k = 0; k < ra.size(); ++k) {
            if (ra[k].position != rb[k].position || ra[k].attitude != rb[k].attitude ||
                ra[k].velocity != rb[k].velocity || ra[k].reward != rb[k].reward) {
                return false;
            }
        }
    }
    return true;
}

template <typename F>
double best_seconds(int repeats, F&& f) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int episodes = argc > 1 ? std::atoi(argv[1]) : 20;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(episodes, 1)));
    std::iota(seeds.begin(), seeds.end(), 0);

    const auto config = eboat::default_episode_config();
    const auto mission = eboat::default_mission();

    std::vector<eboat::EpisodeOutcome> serial, parallel;
    const double ts = best_seconds(repeats, [&] {
        serial = eboat::run_batch_serial(config, mission, seeds, eboat::ControllerKind::Baseline);
    });
    const double tp = best_seconds(repeats, [&] {
        parallel = eboat::run_batch_parallel(config, mission, seeds, eboat::ControllerKind::Baseline);
    });

    std::printf("episodes %zu, threads %d, best of %d\n", seeds.size(), omp_get_max_threads(), repeats);
    std::printf("serial    %8.3f s\n", ts);
    std::printf("parallel  %8.3f s  (x%.2f)\n", tp, ts / tp);
    const bool same = same_logs(serial, parallel);
    std::printf("results %s\n", same ? "identical" : "DIFFER");
    return same ? 0 : 1;
}
