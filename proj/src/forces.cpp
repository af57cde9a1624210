#include "eboat/forces.hpp"

#include <algorithm>
#include <cmath>

namespace eboat {

Mat3 rotation_body_to_world(const Vec3& attitude) {
    const double cphi = std::cos(attitude.x()), sphi = std::sin(attitude.x());
    const double cth = std::cos(attitude.y()), sth = std::sin(attitude.y());
    const double cpsi = std::cos(attitude.z()), spsi = std::sin(attitude.z());
    Mat3 r;
    r << cpsi * cth, -spsi * cphi + cpsi * sth * sphi, spsi * sphi + cpsi * cphi * sth,
         spsi * cth, cpsi * cphi + sphi * sth * spsi, -cpsi * sphi + sth * spsi * cphi,
         -sth, cth * sphi, cth * cphi;
    return r;
}

ApparentWind apparent_wind(const Vec3& true_wind_world, const VesselState& state) {
    const Mat3 r = rotation_body_to_world(state.attitude);
    ApparentWind out;
    out.vector = r.transpose() * true_wind_world - state.linear_velocity();
    out.speed = std::hypot(out.vector.x(), out.vector.y());
    out.angle = out.speed > 0.0 ? wrap_angle(std::atan2(-out.vector.y(), -out.vector.x())) : 0.0;
    return out;
}

AttackAngle attack_angle(const Vec3& flow, const Vec3& chord_direction) {
    const double speed = std::hypot(flow.x(), flow.y());
    if (speed <= kNoFlowSpeed) {
        return {0.0, true};
    }
    const double cross = flow.x() * chord_direction.y() - flow.y() * chord_direction.x();
    const double dot = flow.x() * chord_direction.x() + flow.y() * chord_direction.y();
    return {wrap_angle(std::atan2(cross, dot)), false};
}

namespace {

Vec3 rotate_about_z(const Vec3& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z()};
}

}  // namespace

FoilForce foil_force_detail(const FoilParams& foil, const Vec3& flow, double deflection, double density) {
    FoilForce out;
    const Vec3 chord = rotate_about_z(foil.chord_direction, deflection);
    const auto aoa = attack_angle(flow, chord);
    out.alpha = aoa.angle;
    out.no_flow = aoa.no_flow;
    if (aoa.no_flow) {
        return out;
    }
    const Vec3 horizontal(flow.x(), flow.y(), 0.0);
    const double speed_sq = horizontal.squaredNorm();
    const Vec3 along = horizontal / std::sqrt(speed_sq);
    const Vec3 across(along.y(), -along.x(), 0.0);

    const auto coeff = foil.coefficients.at(aoa.angle);
    const double scale = 0.5 * density * speed_sq * foil.area;
    out.drag = scale * coeff.drag * along;
    out.lift = scale * coeff.lift * across;
    out.total = GeneralizedForce::at_point(out.lift + out.drag, foil.center_of_effort);
    return out;
}

GeneralizedForce foil_force(const FoilParams& foil, const Vec3& flow, double deflection, double density) {
    return foil_force_detail(foil, flow, deflection, density).total;
}

SailForce sail_force_detail(const VesselParams& params, const ApparentWind& apparent, double boom_angle,
                            double air_density) {
    SailForce out;
    const Vec3& flow = apparent.vector;
    if (std::hypot(flow.x(), flow.y()) <= kNoFlowSpeed) {
        out.slack = true;
        out.foil.no_flow = true;
        return out;
    }
    const double limit = std::clamp(std::abs(boom_angle), 0.0, params.max_boom());
    // The angle the sail would take on its own, pointing downwind from the mast.
    const double free_angle = std::atan2(flow.y(), -flow.x());
    if (std::abs(free_angle) <= limit) {
        out.sail_angle = free_angle;
        out.slack = true;
        return out;
    }
    out.sail_angle = free_angle < 0.0 ? -limit : limit;
    // A boom to starboard is a negative rotation of the aft-pointing chord about z.
    out.foil = foil_force_detail(params.sail, flow, -out.sail_angle, air_density);
    return out;
}

GeneralizedForce sail_force(const VesselParams& params, const ApparentWind& apparent, double boom_angle,
                            double air_density) {
    return sail_force_detail(params, apparent, boom_angle, air_density).foil.total;
}

Vec3 water_flow_at(const VesselState& state, const Vec3& point) {
    return -(state.linear_velocity() + state.angular_velocity().cross(point));
}

GeneralizedForce buoyancy_forces(const VesselState& state, const WaveField& waves, double t,
                                 const VesselParams& params, double water_density) {
    const Mat3 r = rotation_body_to_world(state.attitude);
    const Mat3 rt = r.transpose();
    const Vec3 v = state.linear_velocity();
    const Vec3 w = state.angular_velocity();

    GeneralizedForce total;
    for (const auto& cell : params.hull_quadrants) {
        const Vec3 p = state.position + r * cell.offset;
        const double elevation = wave_elevation(waves, p.x(), p.y(), t);
        // NED: the surface sits at z = -elevation, depth is positive below it.
        const double depth = p.z() + elevation;
        const double fraction = std::clamp(depth / cell.reference_draft(), 0.0, 1.0);
        if (fraction <= 0.0) {
            continue;
        }
        const double lift = water_density * params.gravity * fraction * cell.volume;

        const double z_rate = (r * (v + w.cross(cell.offset))).z();
        const double surface_rate = -wave_elevation_rate(waves, p.x(), p.y(), t);
        const double damping = -params.heave_damping * fraction * (z_rate - surface_rate);

        const Vec3 f_world(0.0, 0.0, -lift + damping);
        total += GeneralizedForce::at_point(rt * f_world, cell.offset);
    }
    return total;
}

GeneralizedForce gravity_force(const VesselState& state, const VesselParams& params) {
    const Mat3 r = rotation_body_to_world(state.attitude);
    return {r.transpose() * Vec3(0.0, 0.0, params.mass * params.gravity), Vec3::Zero()};
}

GeneralizedForce hull_damping(const Vec6& nu, const VesselParams& params) {
    const Vec6 d = -(params.linear_damping.array() + params.quadratic_damping.array() * nu.array().abs()) *
                   nu.array();
    return {d.head<3>(), d.tail<3>()};
}

GeneralizedForce propeller_thrust(int level, const VesselParams& params) {
    const double thrust = params.propeller.thrust_at(level);
    return GeneralizedForce::at_point(Vec3(thrust, 0.0, 0.0), params.propeller.application_point);
}

}  // namespace eboat
