#include "eboat/dynamics.hpp"

#include <cmath>

namespace eboat {

IntegrationError::IntegrationError(const std::string& what, VesselState offending)
    : std::runtime_error(what), state_(std::move(offending)) {}

MassMatrix build_mass_matrix(const VesselParams& params) {
    MassMatrix m;
    m.matrix.setZero();
    m.matrix.topLeftCorner<3, 3>() = params.mass * Mat3::Identity();
    m.matrix.bottomRightCorner<3, 3>() = params.inertia;
    m.matrix.diagonal() += params.added_mass;
    Eigen::LLT<Mat6> llt(m.matrix);
    if (!m.matrix.allFinite() || llt.info() != Eigen::Success) {
        throw ConfigError("mass_matrix", "M_RB + M_A must be positive definite");
    }
    return m;
}

Vec6 coriolis_force(const MassMatrix& mass, const Vec6& nu) {
    const Mat6& m = mass.matrix;
    const Vec3 v1 = nu.head<3>();
    const Vec3 v2 = nu.tail<3>();
    const Vec3 a = m.topLeftCorner<3, 3>() * v1 + m.topRightCorner<3, 3>() * v2;
    const Vec3 b = m.bottomLeftCorner<3, 3>() * v1 + m.bottomRightCorner<3, 3>() * v2;
    // C(nu) = [[0, -S(a)], [-S(a), -S(b)]]
    Vec6 out;
    out << -a.cross(v2), -a.cross(v1) - b.cross(v2);
    return out;
}

KinematicTransform kinematic_transform(const Vec3& attitude) {
    const double theta = attitude.y();
    if (!(std::abs(theta) < kPi / 2.0 - kGimbalMargin)) {
        throw SingularityError("pitch within gimbal margin of +-90 deg");
    }
    const double cphi = std::cos(attitude.x()), sphi = std::sin(attitude.x());
    const double cth = std::cos(theta), tth = std::tan(theta);
    KinematicTransform out;
    out.rotation = rotation_body_to_world(attitude);
    out.euler_rates << 1.0, sphi * tth, cphi * tth,
                       0.0, cphi, -sphi,
                       0.0, sphi / cth, cphi / cth;
    return out;
}

RigidBodyModel::RigidBodyModel(const VesselParams& params)
    : params_(params), mass_(build_mass_matrix(params)), llt_(mass_.matrix) {}

VesselState step_dynamics(const VesselState& state, const GeneralizedForce& tau, const RigidBodyModel& model,
                          double dt) {
    const Vec6& nu = state.velocity;
    const Vec6 rhs = tau.vector() - coriolis_force(model.mass(), nu) + hull_damping(nu, model.params()).vector();
    const Vec6 nu_dot = model.solve(rhs);

    VesselState next = state;
    next.velocity = nu + dt * nu_dot;
    const auto j = kinematic_transform(state.attitude);
    next.position += dt * (j.rotation * next.velocity.head<3>());
    next.attitude += dt * (j.euler_rates * next.velocity.tail<3>());
    for (int i = 0; i < 3; ++i) {
        next.attitude[i] = wrap_angle(next.attitude[i]);
    }
    next.sim_time = state.sim_time + dt;
    if (!next.finite()) {
        throw IntegrationError("integration produced non-finite state", state);
    }
    return next;
}

VesselState step_dynamics(const VesselState& state, const GeneralizedForce& tau, const VesselParams& params,
                          double dt) {
    return step_dynamics(state, tau, RigidBodyModel(params), dt);
}

}  // namespace eboat
