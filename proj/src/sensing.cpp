#include "eboat/sensing.hpp"

#include <algorithm>
#include <cmath>

namespace eboat {

const std::array<std::string_view, Observation::kSize>& Observation::names() {
    static const std::array<std::string_view, kSize> kNames = {
        "distance_to_waypoint", "relative_bearing", "surge", "sway", "yaw_rate", "roll",
        "apparent_wind_speed", "apparent_wind_angle", "rudder_angle", "boom_angle", "propeller_level",
    };
    return kNames;
}

std::array<double, Observation::kSize> Observation::to_array() const {
    return {distance_to_waypoint, relative_bearing, surge, sway, yaw_rate, roll, apparent_wind_speed,
            apparent_wind_angle, rudder_angle, boom_angle, static_cast<double>(propeller_level)};
}

Observation Observation::from_array(const std::array<double, kSize>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], static_cast<int>(std::lround(v[10]))};
}

bool Action::finite() const {
    return std::isfinite(rudder) && std::isfinite(boom) && std::isfinite(propeller);
}

int ActuatorState::propeller_level() const {
    return static_cast<int>(std::lround(propeller_position));
}

SensorNoise SensorNoise::defaults() {
    return {1.0, 0.1, deg2rad(0.5), 0.2, 0.1};
}

std::vector<Violation> check_sensor_noise(const SensorNoise& n, double dt) {
    std::vector<Violation> out;
    if (!(n.position >= 0.0)) out.push_back({"sensors.position_sigma", ">= 0"});
    if (!(n.speed >= 0.0)) out.push_back({"sensors.speed_sigma", ">= 0"});
    if (!(n.angle >= 0.0)) out.push_back({"sensors.angle_sigma", ">= 0"});
    if (!(n.wind >= 0.0)) out.push_back({"sensors.wind_sigma", ">= 0"});
    if (!(n.period >= dt - 1e-12)) out.push_back({"sensors.period", "period >= dt"});
    return out;
}

ActuatorTargets clamp_targets(const ActuatorTargets& t, const VesselParams& params) {
    ActuatorTargets out;
    out.rudder = std::clamp(t.rudder, params.rudder.min_deflection, params.rudder.max_deflection);
    out.boom = std::clamp(t.boom, 0.0, params.max_boom());
    out.propeller = std::clamp(t.propeller, -params.propeller.max_level, params.propeller.max_level);
    return out;
}

std::optional<ActuatorTargets> action_targets(const Action& action, const VesselParams& params) {
    if (!action.finite()) {
        return std::nullopt;
    }
    ActuatorTargets t;
    const double rudder = std::clamp(action.rudder, -1.0, 1.0);
    t.rudder = rudder >= 0.0 ? rudder * params.rudder.max_deflection : -rudder * params.rudder.min_deflection;
    t.boom = std::clamp(action.boom, 0.0, 1.0) * params.max_boom();
    const double level = std::clamp(std::round(action.propeller), static_cast<double>(-params.propeller.max_level),
                                    static_cast<double>(params.propeller.max_level));
    t.propeller = static_cast<int>(level);
    return clamp_targets(t, params);
}

namespace {

double slew(double current, double target, double max_step) {
    const double delta = std::clamp(target - current, -max_step, max_step);
    return current + delta;
}

}  // namespace

ActuatorState slew_actuators(const ActuatorState& a, const VesselParams& params, double dt) {
    ActuatorState out = a;
    out.rudder_angle = slew(a.rudder_angle, a.targets.rudder, params.rate_limits.rudder * dt);
    out.boom_angle = slew(a.boom_angle, a.targets.boom, params.rate_limits.boom * dt);
    out.propeller_position =
        slew(a.propeller_position, static_cast<double>(a.targets.propeller), params.rate_limits.propeller * dt);
    return out;
}

ActuationResult apply_actuator_commands(const ActuatorState& actuators, const Action& command,
                                        const VesselParams& params, double dt) {
    ActuationResult result{actuators, false};
    if (auto targets = action_targets(command, params)) {
        result.state.targets = *targets;
    } else {
        result.rejected = true;
        return result;
    }
    result.state = slew_actuators(result.state, params, dt);
    return result;
}

namespace {

SensorMeasurement measure(const VesselState& s, const ApparentWind& apparent, const SensorNoise& n, Rng& rng) {
    // Fixed draw order and count keeps the stream aligned for any sigma.
    SensorMeasurement m;
    m.position = Vec2(s.position.x() + n.position * rng.normal(), s.position.y() + n.position * rng.normal());
    m.heading = wrap_angle(s.yaw() + n.angle * rng.normal());
    m.surge = s.velocity[0] + n.speed * rng.normal();
    m.sway = s.velocity[1] + n.speed * rng.normal();
    m.yaw_rate = s.velocity[5] + n.angle * rng.normal();
    m.roll = wrap_angle(s.roll() + n.angle * rng.normal());
    m.wind_speed = std::max(0.0, apparent.speed + n.wind * rng.normal());
    m.wind_angle = wrap_angle(apparent.angle + n.angle * rng.normal());
    return m;
}

Observation compose(const SensorMeasurement& m, const ActuatorState& a, const Vec2& target) {
    Observation o;
    const Vec2 delta = target - m.position;
    o.distance_to_waypoint = delta.norm();
    o.relative_bearing = wrap_angle(std::atan2(delta.y(), delta.x()) - m.heading);
    o.surge = m.surge;
    o.sway = m.sway;
    o.yaw_rate = m.yaw_rate;
    o.roll = m.roll;
    o.apparent_wind_speed = m.wind_speed;
    o.apparent_wind_angle = m.wind_angle;
    o.rudder_angle = a.rudder_angle;
    o.boom_angle = a.boom_angle;
    o.propeller_level = a.propeller_level();
    return o;
}

}  // namespace

Observation true_observation(const VesselState& state, const ActuatorState& actuators,
                             const ApparentWind& apparent, const Vec2& target) {
    Rng unused(0);
    return compose(measure(state, apparent, SensorNoise{0.0, 0.0, 0.0, 0.0, 0.0}, unused), actuators, target);
}

Observation read_sensors(const VesselState& state, const ActuatorState& actuators, const ApparentWind& apparent,
                         const Vec2& target, const SensorNoise& noise, Rng& rng) {
    return compose(measure(state, apparent, noise, rng), actuators, target);
}

Observation SensorSuite::read(const VesselState& state, const ActuatorState& actuators,
                              const ApparentWind& apparent, const Vec2& target, Rng& rng) {
    constexpr double kSlack = 1e-9;
    const bool due = !last_refresh_ || state.sim_time - *last_refresh_ >= noise_.period - kSlack;
    if (due) {
        held_measurement_ = measure(state, apparent, noise_, rng);
        last_refresh_ = state.sim_time;
    }
    return compose(held_measurement_, actuators, target);
}

}  // namespace eboat
