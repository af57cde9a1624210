#include "doctest.h"

#include "eboat/sensing.hpp"

#include <cmath>
#include <random>

using namespace eboat;

namespace {

VesselState sample_state() {
    VesselState s;
    s.position = Vec3(3.0, -4.0, 0.05);
    s.attitude = Vec3(0.1, 0.02, 0.6);
    s.velocity << 1.5, -0.2, 0.0, 0.01, 0.0, 0.05;
    return s;
}

ApparentWind sample_wind() {
    ApparentWind a;
    a.vector = Vec3(-4.0, -3.0, 0.0);
    a.speed = 5.0;
    a.angle = std::atan2(3.0, 4.0);
    return a;
}

}  // namespace

TEST_CASE("noiseless sensors report truth") {
    const auto s = sample_state();
    ActuatorState act;
    act.rudder_angle = 0.1;
    act.boom_angle = 0.4;
    act.propeller_position = 2.0;
    const Vec2 target(50.0, 50.0);
    SensorNoise zero{0.0, 0.0, 0.0, 0.0, 0.01};
    Rng rng(3);
    const auto o = read_sensors(s, act, sample_wind(), target, zero, rng);
    CHECK(o == true_observation(s, act, sample_wind(), target));
    CHECK(o.surge == 1.5);
    CHECK(o.sway == -0.2);
    CHECK(o.yaw_rate == 0.05);
    CHECK(o.roll == 0.1);
    CHECK(o.apparent_wind_speed == 5.0);
    CHECK(o.rudder_angle == 0.1);
    CHECK(o.boom_angle == 0.4);
    CHECK(o.propeller_level == 2);
    CHECK(o.distance_to_waypoint == doctest::Approx(Vec2(47.0, 54.0).norm()));

    SensorSuite suite(zero);
    CHECK(suite.read(s, act, sample_wind(), target, rng) == o);
}

TEST_CASE("bearing is zero when heading at the waypoint") {
    VesselState s;
    s.attitude.z() = std::atan2(30.0, 40.0);
    const auto o = true_observation(s, ActuatorState{}, ApparentWind{}, Vec2(40.0, 30.0));
    CHECK(o.relative_bearing == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(o.distance_to_waypoint == doctest::Approx(50.0));

    // waypoint due east while heading north: 90 degrees to starboard
    const auto e = true_observation(VesselState{}, ActuatorState{}, ApparentWind{}, Vec2(0.0, 10.0));
    CHECK(e.relative_bearing == doctest::Approx(kPi / 2));
}

TEST_CASE("heading noise spreads the bearing") {
    SensorNoise n{0.0, 0.0, 0.01, 0.0, 0.01};
    Rng rng(99);
    double sum = 0.0, sq = 0.0;
    const int count = 20000;
    for (int i = 0; i < count; ++i) {
        const auto o = read_sensors(VesselState{}, ActuatorState{}, ApparentWind{}, Vec2(100.0, 0.0), n, rng);
        sum += o.relative_bearing;
        sq += o.relative_bearing * o.relative_bearing;
    }
    const double mean = sum / count;
    const double sd = std::sqrt(sq / count - mean * mean);
    CHECK(sd >= 0.009);
    CHECK(sd <= 0.011);
}

TEST_CASE("draw count does not depend on sigmas") {
    const auto s = sample_state();
    SensorNoise quiet{0.0, 0.0, 0.0, 0.0, 0.01};
    Rng a(5), b(5);
    read_sensors(s, ActuatorState{}, sample_wind(), Vec2::Zero(), quiet, a);
    read_sensors(s, ActuatorState{}, sample_wind(), Vec2::Zero(), SensorNoise::defaults(), b);
    CHECK(a.normal() == b.normal());
}

TEST_CASE("sensor channels hold between refreshes") {
    SensorSuite suite(SensorNoise::defaults());
    Rng rng(4);
    VesselState s = sample_state();
    s.sim_time = 0.0;
    const auto first = suite.read(s, ActuatorState{}, sample_wind(), Vec2::Zero(), rng);
    s.sim_time = 0.05;
    const auto held = suite.read(s, ActuatorState{}, sample_wind(), Vec2::Zero(), rng);
    CHECK(held.surge == first.surge);
    CHECK(held.distance_to_waypoint == first.distance_to_waypoint);
    s.sim_time = 0.1;
    const auto fresh = suite.read(s, ActuatorState{}, sample_wind(), Vec2::Zero(), rng);
    CHECK(fresh.surge != first.surge);
}

TEST_CASE("action mapping clamps and rounds") {
    const auto p = default_eboat_params();
    const auto t = action_targets({2.0, -1.0, 7.8}, p);
    REQUIRE(t);
    CHECK(t->rudder == doctest::Approx(p.rudder.max_deflection));
    CHECK(t->boom == 0.0);
    CHECK(t->propeller == 5);
    CHECK(action_targets({0.0, 9.0, -7.8}, p)->propeller == -5);
    CHECK(action_targets({0.0, 9.0, 0.0}, p)->boom == doctest::Approx(p.max_boom()));
    CHECK_FALSE(action_targets({std::nan(""), 0.0, 0.0}, p));
}

TEST_CASE("actuators slew at their rate limits") {
    auto p = default_eboat_params();
    p.rudder.max_deflection = deg2rad(60.0);
    p.rudder.min_deflection = -deg2rad(60.0);
    ActuatorState a;
    a.targets.rudder = deg2rad(45.0);
    const auto r = slew_actuators(a, p, 0.1);
    CHECK(r.rudder_angle == doctest::Approx(deg2rad(3.0)).epsilon(1e-12));

    ActuatorState at;
    at.rudder_angle = 0.2;
    at.targets.rudder = 0.2;
    CHECK(slew_actuators(at, p, 0.1).rudder_angle == 0.2);

    const auto d = default_eboat_params();
    ActuatorState prop;
    auto res = apply_actuator_commands(prop, {0.0, 0.0, 7.8}, d, 1.0);
    CHECK_FALSE(res.rejected);
    CHECK(res.state.targets.propeller == 5);
    CHECK(res.state.propeller_position == doctest::Approx(2.0));
    for (int i = 0; i < 5; ++i) res = apply_actuator_commands(res.state, {0.0, 0.0, 7.8}, d, 1.0);
    CHECK(res.state.propeller_level() == 5);
}

TEST_CASE("non-finite commands are rejected and actuators hold targets") {
    const auto p = default_eboat_params();
    ActuatorState a;
    a.targets.rudder = 0.3;
    const auto r = apply_actuator_commands(a, {std::numeric_limits<double>::infinity(), 0.0, 0.0}, p, 0.1);
    CHECK(r.rejected);
    CHECK(r.state.targets.rudder == 0.3);
}

TEST_CASE("slewing never overshoots and respects limits") {
    const auto p = default_eboat_params();
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    ActuatorState a;
    for (int i = 0; i < 2000; ++i) {
        const Action cmd{u(gen), u(gen), 8.0 * u(gen)};
        const auto before = a;
        a = apply_actuator_commands(a, cmd, p, 0.05).state;
        const double dr = a.rudder_angle - before.rudder_angle;
        CHECK(std::abs(dr) <= p.rate_limits.rudder * 0.05 + 1e-12);
        CHECK(std::abs(a.boom_angle - before.boom_angle) <= p.rate_limits.boom * 0.05 + 1e-12);
        CHECK(std::abs(a.propeller_position - before.propeller_position) <= p.rate_limits.propeller * 0.05 + 1e-12);
        // moves toward the target and never past it
        CHECK((a.targets.rudder - a.rudder_angle) * (a.targets.rudder - before.rudder_angle) >= -1e-15);
        CHECK(a.rudder_angle <= p.rudder.max_deflection);
        CHECK(a.rudder_angle >= p.rudder.min_deflection);
        CHECK(a.boom_angle >= 0.0);
        CHECK(a.boom_angle <= p.max_boom());
        CHECK(std::abs(a.propeller_level()) <= p.propeller.max_level);
    }
}

TEST_CASE("observation array round trip") {
    Observation o;
    o.distance_to_waypoint = 12.5;
    o.relative_bearing = -0.3;
    o.propeller_level = -2;
    CHECK(Observation::from_array(o.to_array()) == o);
    CHECK(Observation::names().front() == "distance_to_waypoint");
}
