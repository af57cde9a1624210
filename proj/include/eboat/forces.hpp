#pragma once

#include "eboat/vessel.hpp"
#include "eboat/world.hpp"

namespace eboat {

/// Force and moment in the body frame, moments about the CG.
struct GeneralizedForce {
    Vec3 force = Vec3::Zero();
    Vec3 moment = Vec3::Zero();

    /// Force applied at body-frame point `r`.
    static GeneralizedForce at_point(const Vec3& f, const Vec3& r) { return {f, r.cross(f)}; }

    Vec6 vector() const {
        Vec6 v;
        v << force, moment;
        return v;
    }
    bool finite() const { return force.allFinite() && moment.allFinite(); }

    GeneralizedForce& operator+=(const GeneralizedForce& o) {
        force += o.force;
        moment += o.moment;
        return *this;
    }
    friend GeneralizedForce operator+(GeneralizedForce a, const GeneralizedForce& b) { return a += b; }
};

struct ApparentWind {
    Vec3 vector = Vec3::Zero();  // air velocity relative to the vessel, body frame
    double speed = 0.0;          // horizontal
    double angle = 0.0;          // direction the wind comes FROM, from body x, + to starboard
};

/// Below this relative flow speed (m/s) a foil produces no force.
inline constexpr double kNoFlowSpeed = 1e-6;

struct AttackAngle {
    double angle = 0.0;
    bool no_flow = false;
};

ApparentWind apparent_wind(const Vec3& true_wind_world, const VesselState& state);

/// Signed angle from flow direction to chord direction in the body horizontal
/// plane, in (-pi, pi]. Positive is a rotation about body +z.
AttackAngle attack_angle(const Vec3& flow, const Vec3& chord_direction);

/// Breakdown of a foil force; `lift` and `drag` are the body-frame force components.
struct FoilForce {
    GeneralizedForce total;
    Vec3 lift = Vec3::Zero();
    Vec3 drag = Vec3::Zero();
    double alpha = 0.0;
    bool no_flow = false;
};

/// Lift/drag on a foil from the fluid velocity relative to it (body frame).
/// `deflection` rotates the chord about body z. Only horizontal flow is used.
FoilForce foil_force_detail(const FoilParams& foil, const Vec3& flow, double deflection, double density);

GeneralizedForce foil_force(const FoilParams& foil, const Vec3& flow, double deflection, double density);

struct SailForce {
    FoilForce foil;
    /// Boom angle the sail actually lies at, + to starboard.
    double sail_angle = 0.0;
    bool slack = false;
};

/// The boom angle is a one-sided limit: if the wind would carry the sail
/// past it, the sail lies at the limit on the leeward side; otherwise the
/// sheet is slack, the sail weathervanes and produces no force.
SailForce sail_force_detail(const VesselParams& params, const ApparentWind& apparent, double boom_angle,
                            double air_density);

GeneralizedForce sail_force(const VesselParams& params, const ApparentWind& apparent, double boom_angle,
                            double air_density);

/// Fluid velocity seen by a point of the hull moving with the vessel (still water).
Vec3 water_flow_at(const VesselState& state, const Vec3& point);

/// Four-cell buoyancy plus per-cell heave damping against the local wave surface.
/// Restoring forces enter the equations of motion through this term.
GeneralizedForce buoyancy_forces(const VesselState& state, const WaveField& waves, double t,
                                 const VesselParams& params, double water_density);

/// Weight at the CG, resolved in the body frame.
GeneralizedForce gravity_force(const VesselState& state, const VesselParams& params);

/// Diagonal linear+quadratic damping, -(D_l + D_q |nu_i|) nu_i.
GeneralizedForce hull_damping(const Vec6& nu, const VesselParams& params);

/// Discrete thrust along body +x at the propeller.
GeneralizedForce propeller_thrust(int level, const VesselParams& params);

Mat3 rotation_body_to_world(const Vec3& attitude);

}  // namespace eboat
