#pragma once

#include "eboat/dynamics.hpp"
#include "eboat/forces.hpp"
#include "eboat/sensing.hpp"
#include "eboat/world.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eboat {

/// Labeled waypoints visited in `sequence` order, e.g. "BCDACA".
struct Mission {
    std::map<char, Vec2> waypoints;
    std::string sequence;
    double acceptance_radius = 5.0;
    double time_limit = 3000.0;

    Vec2 target(std::size_t index) const;
};

/// A-D on the corners of a 100 m square around the origin, sequence BCDACA.
Mission default_mission();

std::vector<Violation> check_mission(const Mission& mission);

struct WorldConfig {
    double air_density = 1.225;
    double water_density = 1025.0;
    WindProcess wind;
    WaveField waves;
    bool waves_enabled = true;
    /// Draw per-component phases from the episode seed at reset.
    bool randomize_wave_phases = true;
};

struct StartPose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double surge = 0.0;  // initial forward speed, m/s
};

struct InitialJitter {
    bool enabled = true;
    double position_sigma = 1.0;
    double heading_sigma = deg2rad(5.0);
};

struct RewardWeights {
    double progress = 1.0;
    double waypoint_bonus = 10.0;
    double capsize_penalty = 50.0;
};

struct EpisodeConfig {
    VesselParams vessel = default_eboat_params();
    WorldConfig world;
    SensorNoise sensors = SensorNoise::defaults();
    bool sensor_noise_enabled = true;
    double dt = 0.01;
    double control_period = 0.5;
    StartPose start;
    InitialJitter jitter;
    RewardWeights reward;
    double capsize_roll = deg2rad(80.0);
    /// Overrides the master seed for the sensor-noise substream only.
    std::optional<std::uint64_t> sensor_seed;

    int substeps() const;
};

EpisodeConfig default_episode_config();

std::vector<Violation> check_config(const EpisodeConfig& config);

enum class Termination {
    None,
    MissionComplete,
    Capsize,
    TimeLimit,
};

const char* to_string(Termination cause);

struct WaypointCheck {
    std::size_t index = 0;
    bool reached = false;
};

/// Advances at most one waypoint, when `position` is within the acceptance radius.
WaypointCheck check_waypoint(const Vec2& position, const Mission& mission, std::size_t index);

/// (prev - new) progress, plus bonus on waypoint, minus penalty on capsize.
double compute_reward(double prev_distance, double new_distance, bool waypoint_reached, Termination cause,
                      const RewardWeights& weights = {});

struct ForceBreakdown {
    GeneralizedForce sail;
    GeneralizedForce keel;
    GeneralizedForce rudder;
    GeneralizedForce buoyancy;
    GeneralizedForce damping;
    GeneralizedForce propeller;
    GeneralizedForce gravity;

    /// Everything except damping, which step_dynamics applies itself.
    GeneralizedForce external() const { return sail + keel + rudder + buoyancy + propeller + gravity; }
};

struct StepInfo {
    VesselState state;
    std::size_t waypoint_index = 0;
    Vec3 wind = Vec3::Zero();
    ForceBreakdown forces;
    bool command_rejected = false;
    Termination cause = Termination::None;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;
    StepInfo info;
};

struct LogRecord {
    double t = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 attitude = Vec3::Zero();
    Vec6 velocity = Vec6::Zero();
    double rudder = 0.0;
    double boom = 0.0;
    int propeller = 0;
    Vec2 wind = Vec2::Zero();
    double reward = 0.0;
    std::size_t waypoint_index = 0;
};

/// One record at reset and one per control step.
struct EpisodeLog {
    std::vector<LogRecord> records;
};

class EpisodeNotReset : public std::logic_error {
public:
    EpisodeNotReset() : std::logic_error("episode has not been reset") {}
};

class EpisodeFinished : public std::logic_error {
public:
    EpisodeFinished() : std::logic_error("episode already finished; call reset") {}
};

/// The episodic environment. Single-threaded; independent instances share nothing.
class Environment {
public:
    explicit Environment(EpisodeConfig config = default_episode_config());

    Observation reset(std::uint64_t seed, std::optional<Mission> mission = std::nullopt);
    StepResult step(const Action& action);

    bool is_reset() const { return reset_; }
    bool finished() const { return finished_; }
    const EpisodeConfig& config() const { return config_; }
    const Mission& mission() const { return mission_; }
    const VesselState& state() const { return state_; }
    const ActuatorState& actuators() const { return actuators_; }
    const WaveField& waves() const { return waves_; }
    std::size_t waypoint_index() const { return waypoint_index_; }
    const EpisodeLog& log() const { return log_; }
    double time() const;

    /// Loads on the vessel for the given state and wind (no side effects).
    ForceBreakdown loads(const VesselState& state, const Vec3& wind_world) const;

private:
    Vec2 current_target() const;
    void record(double reward);

    EpisodeConfig config_;
    RigidBodyModel model_;
    Mission mission_;
    WaveField waves_;
    WindProcess wind_;
    Vec3 last_wind_ = Vec3::Zero();
    VesselState state_;
    ActuatorState actuators_;
    SensorSuite sensors_;
    Rng wind_rng_{0};
    Rng sensor_rng_{0};
    std::size_t waypoint_index_ = 0;
    std::uint64_t steps_ = 0;
    bool reset_ = false;
    bool finished_ = false;
    EpisodeLog log_;
};

/// Rule-based helmsman: proportional rudder on bearing, boom scheduled on
/// apparent wind angle, propeller when slow or pointing into the no-go zone.
struct BaselineController {
    double bearing_gain = 1.0;          // rad rudder per rad error
    double yaw_rate_gain = 0.5;         // rad rudder per rad/s
    double no_go = deg2rad(40.0);
    double sail_attack = deg2rad(25.0);
    double assist_speed = 0.8;          // m/s
    double max_rudder = deg2rad(35.0);
    double max_boom = deg2rad(80.0);
    int assist_level = 5;

    explicit BaselineController(const VesselParams& params = default_eboat_params());

    Action operator()(const Observation& obs) const;
};

using Controller = std::function<Action(const Observation&)>;

struct EpisodeSummary {
    std::uint64_t seed = 0;
    Termination cause = Termination::None;
    bool completed = false;
    double time = 0.0;
    double path_length = 0.0;
    std::size_t waypoints_reached = 0;
    std::string error;
};

struct EpisodeOutcome {
    EpisodeLog log;
    EpisodeSummary summary;
};

/// Resets `env` with `seed` and drives it with `controller` until it ends.
/// Integration blow-ups are caught and reported in the summary.
EpisodeOutcome run_episode(Environment& env, std::uint64_t seed, const Controller& controller,
                           std::optional<Mission> mission = std::nullopt);

EpisodeOutcome run_scripted_baseline(Environment& env, std::uint64_t seed,
                                     std::optional<Mission> mission = std::nullopt);

}  // namespace eboat
