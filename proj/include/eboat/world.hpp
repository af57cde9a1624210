#pragma once

#include "eboat/rng.hpp"
#include "eboat/types.hpp"

#include <vector>

namespace eboat {

struct WaveComponent {
    double amplitude = 0.0;   // m
    double wavelength = 1.0;  // m
    Vec2 direction{1.0, 0.0}; // unit, world (north, east), direction of travel
    double phase = 0.0;       // rad
};

/// Sum of deep-water sinusoids. An empty component list is flat water.
struct WaveField {
    std::vector<WaveComponent> components;
    double gravity = 9.81;
};

/// Surface elevation (positive up) at world (x, y) and time t.
double wave_elevation(const WaveField& field, double x, double y, double t);

/// d(elevation)/dt at a fixed point.
double wave_elevation_rate(const WaveField& field, double x, double y, double t);

std::vector<Violation> check_wave_field(const WaveField& field);

/// Mean wind plus a first-order mean-reverting gust per horizontal axis.
struct WindProcess {
    Vec3 mean = Vec3::Zero();  // air velocity, world frame
    double gust_sigma = 0.0;
    double gust_time_constant = 3.0;
    Vec2 gust = Vec2::Zero();
};

std::vector<Violation> check_wind(const WindProcess& process);

struct WindSample {
    WindProcess process;
    Vec3 wind = Vec3::Zero();
};

/// Advances the gust state by dt. Draws exactly two normals from `rng`.
WindSample sample_wind(const WindProcess& process, double dt, Rng& rng);

/// Default three-component sea: 0.10/0.06/0.03 m at 8/5/3 m, spread around `mean_heading`.
WaveField default_wave_field(double mean_heading = deg2rad(225.0));

}  // namespace eboat
