#pragma once

#include "eboat/forces.hpp"
#include "eboat/rng.hpp"
#include "eboat/vessel.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace eboat {

/// What the agent sees. `to_array()` order is part of the wire protocol.
struct Observation {
    double distance_to_waypoint = 0.0;
    double relative_bearing = 0.0;
    double surge = 0.0;
    double sway = 0.0;
    double yaw_rate = 0.0;
    double roll = 0.0;
    double apparent_wind_speed = 0.0;
    double apparent_wind_angle = 0.0;
    double rudder_angle = 0.0;
    double boom_angle = 0.0;
    int propeller_level = 0;

    static constexpr std::size_t kSize = 11;
    static const std::array<std::string_view, kSize>& names();

    std::array<double, kSize> to_array() const;
    static Observation from_array(const std::array<double, kSize>& values);

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Agent-facing command. rudder in [-1, 1] of the rudder limit, boom in
/// [0, 1] of boom travel, propeller rounded to a level. Out-of-range values
/// are clamped, never rejected.
struct Action {
    double rudder = 0.0;
    double boom = 0.0;
    double propeller = 0.0;

    bool finite() const;
};

/// Actuator targets in physical units.
struct ActuatorTargets {
    double rudder = 0.0;     // rad
    double boom = 0.0;       // rad, >= 0
    int propeller = 0;       // level
};

struct ActuatorState {
    double rudder_angle = 0.0;
    double boom_angle = 0.0;
    /// Continuous slew position; the applied level is its nearest integer.
    double propeller_position = 0.0;
    ActuatorTargets targets;

    int propeller_level() const;
};

struct SensorNoise {
    double position = 0.0;  // m
    double speed = 0.0;     // m/s
    double angle = 0.0;     // rad (also applied to yaw rate, rad/s)
    double wind = 0.0;      // m/s
    double period = 0.1;    // s

    static SensorNoise defaults();
};

std::vector<Violation> check_sensor_noise(const SensorNoise& noise, double dt);

/// Maps a normalized action to clamped physical targets. Non-finite -> nullopt.
std::optional<ActuatorTargets> action_targets(const Action& action, const VesselParams& params);

/// Clamps targets to the vessel's limits.
ActuatorTargets clamp_targets(const ActuatorTargets& targets, const VesselParams& params);

struct ActuationResult {
    ActuatorState state;
    bool rejected = false;
};

/// Sets new targets (when finite) and slews every actuator toward them for dt.
ActuationResult apply_actuator_commands(const ActuatorState& actuators, const Action& command,
                                        const VesselParams& params, double dt);

/// Slews toward the already-set targets.
ActuatorState slew_actuators(const ActuatorState& actuators, const VesselParams& params, double dt);

/// Noise-free observation of the true state.
Observation true_observation(const VesselState& state, const ActuatorState& actuators,
                             const ApparentWind& apparent, const Vec2& target);

/// One sensor read: true values plus Gaussian channel noise. Draws a fixed
/// number of normals from `rng` regardless of the configured sigmas.
Observation read_sensors(const VesselState& state, const ActuatorState& actuators, const ApparentWind& apparent,
                         const Vec2& target, const SensorNoise& noise, Rng& rng);

/// Raw (possibly noisy) channel values before they are combined with the target.
struct SensorMeasurement {
    Vec2 position = Vec2::Zero();
    double heading = 0.0;
    double surge = 0.0;
    double sway = 0.0;
    double yaw_rate = 0.0;
    double roll = 0.0;
    double wind_speed = 0.0;
    double wind_angle = 0.0;
};

/// Zero-order hold in front of read_sensors: channels refresh only once per
/// sensor period. Actuator channels are always current.
class SensorSuite {
public:
    explicit SensorSuite(SensorNoise noise) : noise_(noise) {}

    Observation read(const VesselState& state, const ActuatorState& actuators, const ApparentWind& apparent,
                     const Vec2& target, Rng& rng);

private:
    SensorNoise noise_;
    std::optional<double> last_refresh_;
    SensorMeasurement held_measurement_;
};

}  // namespace eboat
