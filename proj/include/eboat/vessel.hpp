#pragma once

#include "eboat/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace eboat {

/// Pose and body velocity of the vessel.
///
/// Frames follow the usual marine convention: world is NED (x north,
/// y east, z down), body is x forward, y starboard, z down. `attitude`
/// holds (roll, pitch, yaw) and `velocity` holds (u, v, w, p, q, r).
struct VesselState {
    Vec3 position = Vec3::Zero();
    Vec3 attitude = Vec3::Zero();
    Vec6 velocity = Vec6::Zero();
    double sim_time = 0.0;

    Vec3 linear_velocity() const { return velocity.head<3>(); }
    Vec3 angular_velocity() const { return velocity.tail<3>(); }
    double roll() const { return attitude.x(); }
    double pitch() const { return attitude.y(); }
    double yaw() const { return attitude.z(); }

    bool finite() const;
};

struct Coefficients {
    double lift = 0.0;
    double drag = 0.0;
};

struct CoefficientSample {
    double alpha = 0.0;  // radians, [0, pi]
    double lift = 0.0;
    double drag = 0.0;
};

/// Sampled attack-angle curve alpha -> (C_L, C_D) on [0, pi].
///
/// Validity is checked once at construction; `at()` on an invalid table
/// throws ConfigError. Negative angles fold onto the table with the lift
/// sign mirrored, so the curve is odd in C_L and even in C_D.
class CoefficientTable {
public:
    CoefficientTable() : CoefficientTable(std::vector<CoefficientSample>{}) {}
    explicit CoefficientTable(std::vector<CoefficientSample> samples);

    Coefficients at(double alpha) const;

    std::span<const CoefficientSample> samples() const { return samples_; }
    bool valid() const { return violations_.empty(); }
    /// Constraint failures, with field names relative to the table.
    const std::vector<Violation>& violations() const { return violations_; }
    /// Largest |dC/dalpha| over all segments of either curve.
    double max_slope() const;

private:
    std::vector<CoefficientSample> samples_;
    std::vector<Violation> violations_;
};

/// A lifting surface: sail, keel or rudder.
struct FoilParams {
    double area = 0.0;
    /// Leading-to-trailing edge direction at zero deflection, body frame.
    Vec3 chord_direction{-1.0, 0.0, 0.0};
    Vec3 center_of_effort = Vec3::Zero();
    CoefficientTable coefficients;
    double min_deflection = 0.0;
    double max_deflection = 0.0;
};

/// One of the four buoyancy cells the hull is split into.
struct HullQuadrant {
    Vec3 offset = Vec3::Zero();  // body frame, from CG
    double volume = 0.0;         // fully submerged displacement, m^3
    double plan_area = 0.0;      // waterplane area, m^2

    /// Depth at which the cell is fully submerged.
    double reference_draft() const { return volume / plan_area; }
};

/// Discrete manufacturer thrust curve on integer levels -max_level..+max_level.
struct PropellerParams {
    int max_level = 0;
    std::vector<double> thrust;  // size 2*max_level+1, thrust[i] for level i-max_level
    Vec3 application_point = Vec3::Zero();

    double thrust_at(int level) const;
};

struct RateLimits {
    double rudder = 0.0;     // rad/s
    double boom = 0.0;       // rad/s
    double propeller = 0.0;  // levels/s
};

struct VesselParams {
    double length = 0.0;
    double beam = 0.0;
    double mass = 0.0;
    Mat3 inertia = Mat3::Zero();
    Vec6 added_mass = Vec6::Zero();
    Vec6 linear_damping = Vec6::Zero();
    Vec6 quadratic_damping = Vec6::Zero();
    /// Vertical damping per hull cell against the local wave surface, N*s/m.
    double heave_damping = 0.0;
    std::vector<HullQuadrant> hull_quadrants;
    FoilParams sail;
    FoilParams keel;
    FoilParams rudder;
    PropellerParams propeller;
    RateLimits rate_limits;
    double gravity = 9.81;

    /// Boom travel; the sail deflection limit bounds how far it can be let out.
    double max_boom() const { return sail.max_deflection; }
};

Coefficients interpolate_coefficients(const CoefficientTable& table, double alpha);

/// Every invariant violation in `params`. Empty means valid.
std::vector<Violation> check_params(const VesselParams& params, double water_density = 1025.0);

/// Returns `params` unchanged if valid, else throws ConfigError listing all violations.
VesselParams validate_params(const VesselParams& params, double water_density = 1025.0);

/// Shipped defaults for a small (2.5 m, 100 kg) wind+propeller robotic sailboat.
/// These are engineering stand-ins, not measurements; changing them is a breaking change.
VesselParams default_eboat_params();

CoefficientTable default_sail_table();
CoefficientTable default_foil_table();

/// Depth of the hull cells below the still-water surface at hydrostatic equilibrium.
double equilibrium_depth(const VesselParams& params, double water_density);

}  // namespace eboat
