#include "eboat/vessel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eboat {

ConfigError::ConfigError(std::vector<Violation> violations)
    : std::runtime_error(format_violations(violations)), violations_(std::move(violations)) {}

ConfigError::ConfigError(std::string field, std::string constraint)
    : ConfigError(std::vector<Violation>{{std::move(field), std::move(constraint)}}) {}

std::string format_violations(const std::vector<Violation>& violations) {
    std::ostringstream out;
    out << violations.size() << " configuration violation(s)";
    for (const auto& v : violations) {
        out << "\n  " << v.field << ": " << v.constraint;
    }
    return out.str();
}

bool VesselState::finite() const {
    return position.allFinite() && attitude.allFinite() && velocity.allFinite() &&
           std::isfinite(sim_time);
}

// ---------------------------------------------------------------------------
// Coefficient tables

CoefficientTable::CoefficientTable(std::vector<CoefficientSample> samples)
    : samples_(std::move(samples)) {
    constexpr double kTol = 1e-9;
    if (samples_.size() < 2) {
        violations_.push_back({"samples", "at least two samples (alpha = 0 and alpha = pi)"});
        return;
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        const std::string at = "samples[" + std::to_string(i) + "]";
        if (!std::isfinite(s.alpha) || !std::isfinite(s.lift) || !std::isfinite(s.drag)) {
            violations_.push_back({at, "all values finite"});
            continue;
        }
        if (s.drag < 0.0) {
            violations_.push_back({at + ".drag", "C_D >= 0"});
        }
        if (i > 0 && !(s.alpha > samples_[i - 1].alpha)) {
            violations_.push_back({at + ".alpha", "alpha strictly increasing"});
        }
    }
    if (std::abs(samples_.front().alpha) > kTol) {
        violations_.push_back({"samples[0].alpha", "first sample at alpha = 0"});
    }
    if (std::abs(samples_.back().alpha - kPi) > kTol) {
        violations_.push_back({"samples[last].alpha", "last sample at alpha = pi"});
    }
}

Coefficients CoefficientTable::at(double alpha) const {
    if (!valid()) {
        throw ConfigError(violations_);
    }
    const double wrapped = wrap_angle(alpha);
    const double sign = wrapped < 0.0 ? -1.0 : 1.0;
    const double a = std::clamp(std::abs(wrapped), 0.0, kPi);

    auto upper = std::upper_bound(samples_.begin(), samples_.end(), a,
                                  [](double value, const CoefficientSample& s) { return value < s.alpha; });
    if (upper == samples_.end()) {
        const auto& last = samples_.back();
        return {sign * last.lift, last.drag};
    }
    if (upper == samples_.begin()) {
        return {sign * upper->lift, upper->drag};
    }
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double t = (a - lo.alpha) / (hi.alpha - lo.alpha);
    const double lift = lo.lift + t * (hi.lift - lo.lift);
    const double drag = lo.drag + t * (hi.drag - lo.drag);
    return {sign * lift, drag};
}

double CoefficientTable::max_slope() const {
    double slope = 0.0;
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        const double da = samples_[i].alpha - samples_[i - 1].alpha;
        if (da <= 0.0) {
            continue;
        }
        slope = std::max(slope, std::abs(samples_[i].lift - samples_[i - 1].lift) / da);
        slope = std::max(slope, std::abs(samples_[i].drag - samples_[i - 1].drag) / da);
    }
    return slope;
}

Coefficients interpolate_coefficients(const CoefficientTable& table, double alpha) {
    return table.at(alpha);
}

namespace {

// Builds a [0, pi] table from a [0, 90] deg half-curve by mirroring about 90 deg:
// C_L(180 - a) = -C_L(a), C_D(180 - a) = C_D(a). Flow from the trailing edge
// behaves like flow from the leading edge with the lift side flipped.
CoefficientTable mirrored_table(const std::vector<CoefficientSample>& half_deg) {
    std::vector<CoefficientSample> samples;
    for (const auto& s : half_deg) {
        samples.push_back({deg2rad(s.alpha), s.lift, s.drag});
    }
    for (auto it = half_deg.rbegin(); it != half_deg.rend(); ++it) {
        if (it->alpha >= 90.0) {
            continue;
        }
        samples.push_back({kPi - deg2rad(it->alpha), -it->lift, it->drag});
    }
    samples.back().alpha = kPi;
    return CoefficientTable(std::move(samples));
}

}  // namespace

CoefficientTable default_sail_table() {
    // Soft sail: lift peaks around 27 deg, stalls gradually, pure drag at 90 deg.
    return mirrored_table({
        {0.0, 0.00, 0.05},
        {5.0, 0.30, 0.06},
        {10.0, 0.60, 0.08},
        {15.0, 0.85, 0.10},
        {20.0, 1.05, 0.14},
        {25.0, 1.20, 0.20},
        {30.0, 1.25, 0.28},
        {35.0, 1.15, 0.38},
        {45.0, 1.00, 0.60},
        {60.0, 0.80, 0.90},
        {75.0, 0.45, 1.15},
        {90.0, 0.00, 1.30},
    });
}

CoefficientTable default_foil_table() {
    // Symmetric section, stall near 15 deg, flat-plate behaviour beyond.
    return mirrored_table({
        {0.0, 0.00, 0.010},
        {4.0, 0.35, 0.012},
        {8.0, 0.70, 0.020},
        {12.0, 0.95, 0.035},
        {15.0, 1.05, 0.050},
        {18.0, 0.75, 0.150},
        {22.0, 0.65, 0.250},
        {30.0, 0.75, 0.450},
        {45.0, 0.90, 0.900},
        {60.0, 0.75, 1.300},
        {75.0, 0.40, 1.600},
        {90.0, 0.00, 1.700},
    });
}

// ---------------------------------------------------------------------------
// Parameters

double PropellerParams::thrust_at(int level) const {
    const int clamped = std::clamp(level, -max_level, max_level);
    return thrust.at(static_cast<std::size_t>(clamped + max_level));
}

double equilibrium_depth(const VesselParams& params, double water_density) {
    double plan_area = 0.0;
    for (const auto& q : params.hull_quadrants) {
        plan_area += q.plan_area;
    }
    return params.mass / (water_density * plan_area);
}

namespace {

void check_foil(const FoilParams& foil, const std::string& name, std::vector<Violation>& out) {
    if (!(foil.area > 0.0) || !std::isfinite(foil.area)) {
        out.push_back({name + ".area", "A > 0"});
    }
    if (!foil.center_of_effort.allFinite()) {
        out.push_back({name + ".center_of_effort", "finite"});
    }
    const double chord_norm = foil.chord_direction.norm();
    if (!std::isfinite(chord_norm) || std::abs(chord_norm - 1.0) > 1e-9) {
        out.push_back({name + ".chord_direction", "unit vector"});
    }
    if (!(foil.min_deflection <= foil.max_deflection)) {
        out.push_back({name + ".deflection_limits", "min <= max"});
    }
    for (const auto& v : foil.coefficients.violations()) {
        out.push_back({name + ".coefficients." + v.field, v.constraint});
    }
}

bool symmetric_positive_definite(const Mat3& m) {
    if (!m.allFinite() || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff())) {
        return false;
    }
    Eigen::LLT<Mat3> llt(m);
    return llt.info() == Eigen::Success;
}

}  // namespace

std::vector<Violation> check_params(const VesselParams& p, double water_density) {
    std::vector<Violation> out;
    if (!(p.mass > 0.0) || !std::isfinite(p.mass)) {
        out.push_back({"mass", "mass > 0"});
    }
    if (!(p.length > 0.0)) {
        out.push_back({"length", "length > 0"});
    }
    if (!(p.beam > 0.0)) {
        out.push_back({"beam", "beam > 0"});
    }
    if (!(p.gravity > 0.0)) {
        out.push_back({"gravity", "g > 0"});
    }
    if (!symmetric_positive_definite(p.inertia)) {
        out.push_back({"inertia", "symmetric positive definite"});
    }
    auto non_negative = [&](const Vec6& v, const char* name) {
        if (!v.allFinite() || (v.array() < 0.0).any()) {
            out.push_back({name, "all entries >= 0"});
        }
    };
    non_negative(p.added_mass, "added_mass");
    non_negative(p.linear_damping, "linear_damping");
    non_negative(p.quadratic_damping, "quadratic_damping");
    if (!(p.heave_damping >= 0.0)) {
        out.push_back({"heave_damping", ">= 0"});
    }

    if (p.hull_quadrants.size() != 4) {
        out.push_back({"hull_quadrants", "exactly 4 hull quadrants (got " +
                                             std::to_string(p.hull_quadrants.size()) + ")"});
    }
    double reserve = 0.0;
    for (std::size_t i = 0; i < p.hull_quadrants.size(); ++i) {
        const auto& q = p.hull_quadrants[i];
        const std::string at = "hull_quadrants[" + std::to_string(i) + "]";
        if (!q.offset.allFinite()) {
            out.push_back({at + ".offset", "finite"});
        }
        if (!(q.volume > 0.0)) {
            out.push_back({at + ".volume", "volume > 0"});
        }
        if (!(q.plan_area > 0.0)) {
            out.push_back({at + ".plan_area", "plan_area > 0"});
        }
        reserve += q.volume;
    }
    if (p.hull_quadrants.size() == 4 && p.mass > 0.0 && reserve * water_density <= p.mass) {
        out.push_back({"hull_quadrants", "total volume must displace more than the vessel mass"});
    }

    check_foil(p.sail, "sail", out);
    check_foil(p.keel, "keel", out);
    check_foil(p.rudder, "rudder", out);
    if (p.sail.min_deflection > 0.0 || p.sail.max_deflection < 0.0) {
        out.push_back({"sail.deflection_limits", "range must contain 0 (boom centered)"});
    }

    const auto& prop = p.propeller;
    if (prop.max_level < 0 || prop.thrust.size() != static_cast<std::size_t>(2 * prop.max_level + 1)) {
        out.push_back({"propeller.thrust", "one entry per level -L..+L"});
    } else {
        if (prop.thrust[static_cast<std::size_t>(prop.max_level)] != 0.0) {
            out.push_back({"propeller.thrust", "thrust(0) = 0"});
        }
        for (std::size_t i = 0; i < prop.thrust.size(); ++i) {
            if (!std::isfinite(prop.thrust[i])) {
                out.push_back({"propeller.thrust", "finite"});
                break;
            }
            if (i > 0 && prop.thrust[i] < prop.thrust[i - 1]) {
                out.push_back({"propeller.thrust", "monotone non-decreasing in level"});
                break;
            }
        }
    }
    if (!prop.application_point.allFinite()) {
        out.push_back({"propeller.application_point", "finite"});
    }

    if (!(p.rate_limits.rudder > 0.0)) {
        out.push_back({"rate_limits.rudder", "> 0"});
    }
    if (!(p.rate_limits.boom > 0.0)) {
        out.push_back({"rate_limits.boom", "> 0"});
    }
    if (!(p.rate_limits.propeller > 0.0)) {
        out.push_back({"rate_limits.propeller", "> 0"});
    }
    return out;
}

VesselParams validate_params(const VesselParams& params, double water_density) {
    auto violations = check_params(params, water_density);
    if (!violations.empty()) {
        throw ConfigError(std::move(violations));
    }
    return params;
}

VesselParams default_eboat_params() {
    VesselParams p;
    p.length = 2.5;
    p.beam = 0.8;
    p.mass = 100.0;
    p.gravity = 9.81;
    p.inertia = Vec3(18.0, 45.0, 50.0).asDiagonal();
    p.added_mass << 6.0, 40.0, 80.0, 6.0, 30.0, 25.0;
    p.linear_damping << 4.0, 60.0, 300.0, 40.0, 120.0, 30.0;
    p.quadratic_damping << 1.5, 80.0, 150.0, 20.0, 50.0, 30.0;
    p.heave_damping = 250.0;

    // 2x2 split: bow/stern x port/starboard, each carrying a quarter of
    // the reference displacement.
    const double qx = p.length / 4.0;
    const double qy = p.beam / 4.0;
    const double plan = (p.length / 2.0) * (p.beam / 2.0);
    for (double sx : {1.0, -1.0}) {
        for (double sy : {1.0, -1.0}) {
            p.hull_quadrants.push_back({Vec3(sx * qx, sy * qy, 0.0), 0.05, plan});
        }
    }

    p.sail.area = 3.0;
    p.sail.chord_direction = Vec3(-1.0, 0.0, 0.0);
    p.sail.center_of_effort = Vec3(0.2, 0.0, -1.3);
    p.sail.coefficients = default_sail_table();
    p.sail.min_deflection = deg2rad(-80.0);
    p.sail.max_deflection = deg2rad(80.0);

    p.keel.area = 0.3;
    p.keel.chord_direction = Vec3(-1.0, 0.0, 0.0);
    p.keel.center_of_effort = Vec3(0.0, 0.0, 0.5);
    p.keel.coefficients = default_foil_table();

    p.rudder.area = 0.12;
    p.rudder.chord_direction = Vec3(-1.0, 0.0, 0.0);
    p.rudder.center_of_effort = Vec3(-1.15, 0.0, 0.35);
    p.rudder.coefficients = default_foil_table();
    p.rudder.min_deflection = deg2rad(-35.0);
    p.rudder.max_deflection = deg2rad(35.0);

    p.propeller.max_level = 5;
    for (int level = -5; level <= 5; ++level) {
        p.propeller.thrust.push_back(5.0 * level);
    }
    p.propeller.application_point = Vec3(-1.1, 0.0, 0.2);

    p.rate_limits.rudder = deg2rad(30.0);
    p.rate_limits.boom = deg2rad(20.0);
    p.rate_limits.propeller = 2.0;
    return p;
}

}  // namespace eboat
