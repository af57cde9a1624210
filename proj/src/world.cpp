#include "eboat/world.hpp"

#include <cmath>

namespace eboat {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

struct WavePhase {
    double argument;
    double omega;
};

WavePhase phase_of(const WaveComponent& c, double gravity, double x, double y, double t) {
    const double k = 2.0 * kPi / c.wavelength;
    const double omega = std::sqrt(gravity * k);
    return {k * (x * c.direction.x() + y * c.direction.y()) - omega * t + c.phase, omega};
}

}  // namespace

double wave_elevation(const WaveField& field, double x, double y, double t) {
    double eta = 0.0;
    for (const auto& c : field.components) {
        eta += c.amplitude * std::cos(phase_of(c, field.gravity, x, y, t).argument);
    }
    return eta;
}

double wave_elevation_rate(const WaveField& field, double x, double y, double t) {
    double rate = 0.0;
    for (const auto& c : field.components) {
        const auto ph = phase_of(c, field.gravity, x, y, t);
        rate += c.amplitude * ph.omega * std::sin(ph.argument);
    }
    return rate;
}

std::vector<Violation> check_wave_field(const WaveField& field) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < field.components.size(); ++i) {
        const auto& c = field.components[i];
        const std::string at = "waves.components[" + std::to_string(i) + "]";
        if (!(c.amplitude >= 0.0) || !std::isfinite(c.amplitude)) {
            out.push_back({at + ".amplitude", "amplitude >= 0"});
        }
        if (!(c.wavelength > 0.0) || !std::isfinite(c.wavelength)) {
            out.push_back({at + ".wavelength", "wavelength > 0"});
        }
        if (!c.direction.allFinite() || std::abs(c.direction.norm() - 1.0) > 1e-9) {
            out.push_back({at + ".direction", "unit vector"});
        }
        if (!std::isfinite(c.phase)) {
            out.push_back({at + ".phase", "finite"});
        }
    }
    if (!(field.gravity > 0.0)) {
        out.push_back({"waves.gravity", "g > 0"});
    }
    return out;
}

std::vector<Violation> check_wind(const WindProcess& process) {
    std::vector<Violation> out;
    if (!process.mean.allFinite()) {
        out.push_back({"wind.mean", "finite"});
    }
    if (!(process.gust_sigma >= 0.0)) {
        out.push_back({"wind.gust_sigma", "gust_sigma >= 0"});
    }
    if (!(process.gust_time_constant > 0.0)) {
        out.push_back({"wind.gust_time_constant", "gust_time_constant > 0"});
    }
    return out;
}

WindSample sample_wind(const WindProcess& process, double dt, Rng& rng) {
    const double decay = std::exp(-dt / process.gust_time_constant);
    const double spread = process.gust_sigma * std::sqrt(1.0 - decay * decay);
    WindSample out{process, Vec3::Zero()};
    const double nx = rng.normal();
    const double ny = rng.normal();
    out.process.gust = Vec2(process.gust.x() * decay + spread * nx,
                            process.gust.y() * decay + spread * ny);
    out.wind = process.mean + Vec3(out.process.gust.x(), out.process.gust.y(), 0.0);
    return out;
}

WaveField default_wave_field(double mean_heading) {
    WaveField field;
    const double amplitudes[] = {0.10, 0.06, 0.03};
    const double wavelengths[] = {8.0, 5.0, 3.0};
    const double spread[] = {0.0, deg2rad(30.0), deg2rad(-40.0)};
    for (int i = 0; i < 3; ++i) {
        const double heading = mean_heading + spread[i];
        field.components.push_back(
            {amplitudes[i], wavelengths[i], Vec2(std::cos(heading), std::sin(heading)), 0.0});
    }
    return field;
}

}  // namespace eboat
