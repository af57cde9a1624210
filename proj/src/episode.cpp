#include "eboat/episode.hpp"

#include <algorithm>
#include <cmath>

namespace eboat {

Vec2 Mission::target(std::size_t index) const {
    const std::size_t i = std::min(index, sequence.size() - 1);
    return waypoints.at(sequence.at(i));
}

Mission default_mission() {
    Mission m;
    m.waypoints = {
        {'A', Vec2(50.0, 50.0)},
        {'B', Vec2(-50.0, 50.0)},
        {'C', Vec2(-50.0, -50.0)},
        {'D', Vec2(50.0, -50.0)},
    };
    m.sequence = "BCDACA";
    m.acceptance_radius = 5.0;
    m.time_limit = 3000.0;
    return m;
}

std::vector<Violation> check_mission(const Mission& m) {
    std::vector<Violation> out;
    if (m.sequence.empty()) {
        out.push_back({"mission.sequence", "non-empty"});
    }
    for (char label : m.sequence) {
        if (!m.waypoints.contains(label)) {
            out.push_back({"mission.sequence", std::string("label '") + label + "' not in waypoints"});
        }
    }
    for (const auto& [label, p] : m.waypoints) {
        if (!p.allFinite()) {
            out.push_back({std::string("mission.waypoints.") + label, "finite"});
        }
    }
    if (!(m.acceptance_radius > 0.0)) {
        out.push_back({"mission.acceptance_radius", "radius > 0"});
    }
    if (!(m.time_limit > 0.0)) {
        out.push_back({"mission.time_limit", "time_limit > 0"});
    }
    return out;
}

int EpisodeConfig::substeps() const {
    return std::max(1, static_cast<int>(std::lround(control_period / dt)));
}

EpisodeConfig default_episode_config() {
    EpisodeConfig c;
    c.world.wind.mean = Vec3(-2.5, -3.0, 0.0);
    c.world.wind.gust_sigma = 0.6;
    c.world.wind.gust_time_constant = 3.0;
    c.world.waves = default_wave_field();
    return c;
}

std::vector<Violation> check_config(const EpisodeConfig& c) {
    auto out = check_params(c.vessel, c.world.water_density);
    auto append = [&out](std::vector<Violation> more) { out.insert(out.end(), more.begin(), more.end()); };
    append(check_wind(c.world.wind));
    append(check_wave_field(c.world.waves));
    append(check_sensor_noise(c.sensors, c.dt));
    if (!(c.world.air_density > 0.0)) out.push_back({"world.air_density", "> 0"});
    if (!(c.world.water_density > 0.0)) out.push_back({"world.water_density", "> 0"});
    if (!(c.dt > 0.0)) out.push_back({"episode.dt", "dt > 0"});
    if (!(c.control_period >= c.dt)) out.push_back({"episode.control_period", "control_period >= dt"});
    if (c.dt > 0.0 && std::abs(c.control_period / c.dt - std::round(c.control_period / c.dt)) > 1e-6) {
        out.push_back({"episode.control_period", "integer multiple of dt"});
    }
    if (!(c.jitter.position_sigma >= 0.0)) out.push_back({"episode.jitter.position_sigma", ">= 0"});
    if (!(c.jitter.heading_sigma >= 0.0)) out.push_back({"episode.jitter.heading_sigma", ">= 0"});
    if (!(c.capsize_roll > 0.0 && c.capsize_roll < kPi)) out.push_back({"episode.capsize_roll", "in (0, 180) deg"});
    if (!std::isfinite(c.start.x) || !std::isfinite(c.start.y) || !std::isfinite(c.start.heading) ||
        !std::isfinite(c.start.surge)) {
        out.push_back({"episode.start", "finite"});
    }
    return out;
}

const char* to_string(Termination cause) {
    switch (cause) {
        case Termination::None: return "none";
        case Termination::MissionComplete: return "mission_complete";
        case Termination::Capsize: return "capsize";
        case Termination::TimeLimit: return "time_limit";
    }
    return "unknown";
}

WaypointCheck check_waypoint(const Vec2& position, const Mission& mission, std::size_t index) {
    if (index >= mission.sequence.size()) {
        return {index, false};
    }
    const double distance = (mission.target(index) - position).norm();
    if (distance <= mission.acceptance_radius) {
        return {index + 1, true};
    }
    return {index, false};
}

double compute_reward(double prev_distance, double new_distance, bool waypoint_reached, Termination cause,
                      const RewardWeights& w) {
    double r = w.progress * (prev_distance - new_distance);
    if (waypoint_reached) {
        r += w.waypoint_bonus;
    }
    if (cause == Termination::Capsize) {
        r -= w.capsize_penalty;
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

EpisodeConfig validated(EpisodeConfig config) {
    auto violations = check_config(config);
    if (!violations.empty()) {
        throw ConfigError(std::move(violations));
    }
    return config;
}

}  // namespace

Environment::Environment(EpisodeConfig config)
    : config_(validated(std::move(config))),
      model_(config_.vessel),
      mission_(default_mission()),
      sensors_(config_.sensors) {}

double Environment::time() const {
    return static_cast<double>(steps_) * config_.control_period;
}

Vec2 Environment::current_target() const {
    return mission_.target(waypoint_index_);
}

Observation Environment::reset(std::uint64_t seed, std::optional<Mission> mission) {
    if (mission) {
        auto violations = check_mission(*mission);
        if (!violations.empty()) {
            throw ConfigError(std::move(violations));
        }
        mission_ = std::move(*mission);
    }

    Rng phase_rng(derive_seed(seed, Stream::WavePhases));
    Rng initial_rng(derive_seed(seed, Stream::InitialState));
    wind_rng_ = Rng(derive_seed(seed, Stream::Wind));
    sensor_rng_ = Rng(derive_seed(config_.sensor_seed.value_or(seed), Stream::Sensors));

    waves_ = config_.world.waves;
    for (auto& c : waves_.components) {
        const double phase = phase_rng.uniform(0.0, 2.0 * kPi);
        if (config_.world.randomize_wave_phases) {
            c.phase = phase;
        }
    }
    if (!config_.world.waves_enabled) {
        waves_.components.clear();
    }

    wind_ = config_.world.wind;
    wind_.gust = Vec2::Zero();
    last_wind_ = wind_.mean;

    const double jx = initial_rng.normal();
    const double jy = initial_rng.normal();
    const double jh = initial_rng.normal();
    state_ = VesselState{};
    state_.position = Vec3(config_.start.x, config_.start.y,
                           equilibrium_depth(config_.vessel, config_.world.water_density));
    state_.attitude.z() = config_.start.heading;
    state_.velocity(0) = config_.start.surge;
    if (config_.jitter.enabled) {
        state_.position.x() += config_.jitter.position_sigma * jx;
        state_.position.y() += config_.jitter.position_sigma * jy;
        state_.attitude.z() = wrap_angle(state_.attitude.z() + config_.jitter.heading_sigma * jh);
    }

    actuators_ = ActuatorState{};
    SensorNoise noise = config_.sensors;
    if (!config_.sensor_noise_enabled) {
        noise = SensorNoise{0.0, 0.0, 0.0, 0.0, config_.sensors.period};
    }
    sensors_ = SensorSuite(noise);

    waypoint_index_ = 0;
    steps_ = 0;
    reset_ = true;
    finished_ = false;
    log_.records.clear();
    record(0.0);

    const auto apparent = apparent_wind(last_wind_, state_);
    return sensors_.read(state_, actuators_, apparent, current_target(), sensor_rng_);
}

ForceBreakdown Environment::loads(const VesselState& state, const Vec3& wind_world) const {
    const auto& p = config_.vessel;
    const double rho_w = config_.world.water_density;
    ForceBreakdown f;
    f.sail = sail_force(p, apparent_wind(wind_world, state), actuators_.boom_angle, config_.world.air_density);
    f.keel = foil_force(p.keel, water_flow_at(state, p.keel.center_of_effort), 0.0, rho_w);
    f.rudder = foil_force(p.rudder, water_flow_at(state, p.rudder.center_of_effort), actuators_.rudder_angle, rho_w);
    f.buoyancy = buoyancy_forces(state, waves_, state.sim_time, p, rho_w);
    f.damping = hull_damping(state.velocity, p);
    f.propeller = propeller_thrust(actuators_.propeller_level(), p);
    f.gravity = gravity_force(state, p);
    return f;
}

StepResult Environment::step(const Action& action) {
    if (!reset_) {
        throw EpisodeNotReset();
    }
    if (finished_) {
        throw EpisodeFinished();
    }
    const auto& p = config_.vessel;
    StepResult result;

    const Vec2 target = current_target();
    const double prev_distance = (target - state_.position.head<2>()).norm();

    if (auto targets = action_targets(action, p)) {
        actuators_.targets = *targets;
    } else {
        result.info.command_rejected = true;
    }

    Termination cause = Termination::None;
    ForceBreakdown forces;
    const int substeps = config_.substeps();
    for (int k = 0; k < substeps; ++k) {
        actuators_ = slew_actuators(actuators_, p, config_.dt);
        auto sample = sample_wind(wind_, config_.dt, wind_rng_);
        wind_ = sample.process;
        last_wind_ = sample.wind;
        forces = loads(state_, last_wind_);
        try {
            state_ = step_dynamics(state_, forces.external(), model_, config_.dt);
        } catch (const SingularityError&) {
            cause = Termination::Capsize;
            break;
        }
        if (std::abs(state_.roll()) > config_.capsize_roll ||
            std::abs(state_.pitch()) >= kPi / 2.0 - kGimbalMargin) {
            cause = Termination::Capsize;
            break;
        }
    }
    ++steps_;

    const Vec2 position = state_.position.head<2>();
    const double new_distance = (target - position).norm();
    WaypointCheck wp{waypoint_index_, false};
    if (cause != Termination::Capsize) {
        wp = check_waypoint(position, mission_, waypoint_index_);
        waypoint_index_ = wp.index;
        if (waypoint_index_ >= mission_.sequence.size()) {
            cause = Termination::MissionComplete;
        }
    }
    if (cause == Termination::None && time() >= mission_.time_limit - 1e-9) {
        cause = Termination::TimeLimit;
    }

    result.reward = compute_reward(prev_distance, new_distance, wp.reached, cause, config_.reward);
    result.terminated = cause == Termination::MissionComplete || cause == Termination::Capsize;
    result.truncated = cause == Termination::TimeLimit;
    finished_ = result.terminated || result.truncated;

    const auto apparent = apparent_wind(last_wind_, state_);
    result.observation = sensors_.read(state_, actuators_, apparent, current_target(), sensor_rng_);
    result.info.state = state_;
    result.info.waypoint_index = waypoint_index_;
    result.info.wind = last_wind_;
    result.info.forces = forces;
    result.info.cause = cause;
    record(result.reward);
    return result;
}

void Environment::record(double reward) {
    LogRecord r;
    r.t = time();
    r.position = state_.position;
    r.attitude = state_.attitude;
    r.velocity = state_.velocity;
    r.rudder = actuators_.rudder_angle;
    r.boom = actuators_.boom_angle;
    r.propeller = actuators_.propeller_level();
    r.wind = last_wind_.head<2>();
    r.reward = reward;
    r.waypoint_index = waypoint_index_;
    log_.records.push_back(r);
}

// ---------------------------------------------------------------------------

BaselineController::BaselineController(const VesselParams& params)
    : max_rudder(params.rudder.max_deflection),
      max_boom(params.max_boom()),
      assist_level(params.propeller.max_level) {}

Action BaselineController::operator()(const Observation& obs) const {
    Action a;
    // A positive rudder angle yaws the bow to port, so steer against the error.
    const double rudder = -bearing_gain * obs.relative_bearing + yaw_rate_gain * obs.yaw_rate;
    a.rudder = std::clamp(rudder / max_rudder, -1.0, 1.0);

    const double awa = std::abs(obs.apparent_wind_angle);
    const bool in_irons = awa < no_go;
    const double boom = in_irons ? max_boom : std::clamp(awa - sail_attack, 0.0, max_boom);
    a.boom = boom / max_boom;

    a.propeller = (in_irons || obs.surge < assist_speed) ? assist_level : 0.0;
    return a;
}

EpisodeOutcome run_episode(Environment& env, std::uint64_t seed, const Controller& controller,
                           std::optional<Mission> mission) {
    EpisodeOutcome out;
    out.summary.seed = seed;
    Observation obs = env.reset(seed, std::move(mission));
    try {
        while (!env.finished()) {
            const auto result = env.step(controller(obs));
            obs = result.observation;
            out.summary.cause = result.info.cause;
        }
    } catch (const IntegrationError& e) {
        out.summary.error = e.what();
    }
    out.log = env.log();
    out.summary.completed = out.summary.cause == Termination::MissionComplete;
    out.summary.time = env.time();
    out.summary.waypoints_reached = env.waypoint_index();
    const auto& recs = out.log.records;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        out.summary.path_length += (recs[i].position.head<2>() - recs[i - 1].position.head<2>()).norm();
    }
    return out;
}

EpisodeOutcome run_scripted_baseline(Environment& env, std::uint64_t seed, std::optional<Mission> mission) {
    const BaselineController controller(env.config().vessel);
    return run_episode(env, seed, controller, std::move(mission));
}

}  // namespace eboat
