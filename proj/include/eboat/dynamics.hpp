#pragma once

#include "eboat/forces.hpp"
#include "eboat/vessel.hpp"

#include <stdexcept>

namespace eboat {

/// Pitch margin from +-pi/2 below which the Euler kinematics are refused.
inline constexpr double kGimbalMargin = 0.01;

class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A step produced non-finite values. Carries the state that went in.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, VesselState offending);
    const VesselState& state() const noexcept { return state_; }

private:
    VesselState state_;
};

/// M = M_RB + M_A, CG at the body origin, diagonal added mass.
struct MassMatrix {
    Mat6 matrix = Mat6::Identity();
};

MassMatrix build_mass_matrix(const VesselParams& params);

/// C(nu) nu from the skew-symmetric parameterisation of M; nu^T C(nu) nu = 0.
Vec6 coriolis_force(const MassMatrix& mass, const Vec6& nu);

struct KinematicTransform {
    Mat3 rotation;  // body -> world
    Mat3 euler_rates;  // (p, q, r) -> (phi, theta, psi) rates
};

/// Throws SingularityError within kGimbalMargin of pitch = +-pi/2.
KinematicTransform kinematic_transform(const Vec3& attitude);

/// Mass matrix with its factorisation, built once per parameter set.
class RigidBodyModel {
public:
    explicit RigidBodyModel(const VesselParams& params);

    const VesselParams& params() const { return params_; }
    const MassMatrix& mass() const { return mass_; }
    Vec6 solve(const Vec6& rhs) const { return llt_.solve(rhs); }

private:
    VesselParams params_;
    MassMatrix mass_;
    Eigen::LLT<Mat6> llt_;
};

/// One semi-implicit Euler step of M nu_dot + C(nu) nu + D(nu) nu = tau.
///
/// `tau` must already include every external and restoring load (sail,
/// foils, propeller, buoyancy, weight); there is no separate g(eta) term.
/// Hull damping D(nu) nu is applied here from the vessel parameters.
VesselState step_dynamics(const VesselState& state, const GeneralizedForce& tau, const RigidBodyModel& model,
                          double dt);

VesselState step_dynamics(const VesselState& state, const GeneralizedForce& tau, const VesselParams& params,
                          double dt);

}  // namespace eboat
