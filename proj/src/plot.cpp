#include "eboat/plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace eboat {

namespace {

constexpr double kSize = 800.0;
constexpr double kMargin = 40.0;

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Frame {
    double min_east, max_east, min_north, max_north, scale;

    // Screen x grows east, screen y grows south.
    double sx(double east) const { return kMargin + (east - min_east) * scale; }
    double sy(double north) const { return kMargin + (max_north - north) * scale; }
};

}  // namespace

std::string render_trajectories_svg(const std::vector<EpisodeLog>& logs, const Mission& mission) {
    if (logs.empty()) {
        throw std::invalid_argument("no trajectories to plot");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    Frame f{inf, -inf, inf, -inf, 1.0};
    auto extend = [&f](double north, double east, double pad) {
        f.min_east = std::min(f.min_east, east - pad);
        f.max_east = std::max(f.max_east, east + pad);
        f.min_north = std::min(f.min_north, north - pad);
        f.max_north = std::max(f.max_north, north + pad);
    };
    for (const auto& log : logs) {
        for (const auto& r : log.records) {
            extend(r.position.x(), r.position.y(), 0.0);
        }
    }
    for (const auto& [label, p] : mission.waypoints) {
        extend(p.x(), p.y(), mission.acceptance_radius);
    }
    const double span = std::max({f.max_east - f.min_east, f.max_north - f.min_north, 1.0});
    f.scale = (kSize - 2.0 * kMargin) / span;

    static constexpr std::array<const char*, 10> kColors = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kSize) + "\" height=\"" + fixed(kSize) +
           "\" viewBox=\"0 0 " + fixed(kSize) + " " + fixed(kSize) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<g id=\"trajectories\" fill=\"none\" stroke-width=\"1.2\">\n";
    for (std::size_t i = 0; i < logs.size(); ++i) {
        svg += "<polyline stroke=\"" + std::string(kColors[i % kColors.size()]) + "\" points=\"";
        bool first = true;
        for (const auto& r : logs[i].records) {
            if (!first) svg += ' ';
            svg += fixed(f.sx(r.position.y())) + "," + fixed(f.sy(r.position.x()));
            first = false;
        }
        svg += "\"/>\n";
    }
    svg += "</g>\n<g id=\"waypoints\" font-family=\"sans-serif\" font-size=\"18\">\n";
    for (const auto& [label, p] : mission.waypoints) {
        const double cx = f.sx(p.y()), cy = f.sy(p.x());
        svg += "<circle cx=\"" + fixed(cx) + "\" cy=\"" + fixed(cy) + "\" r=\"" +
               fixed(mission.acceptance_radius * f.scale) + "\" fill=\"none\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fixed(cx + 8.0) + "\" y=\"" + fixed(cy - 8.0) + "\">" + std::string(1, label) +
               "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace eboat
