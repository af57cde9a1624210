#include "doctest.h"

#include "eboat/vessel.hpp"

#include <algorithm>
#include <random>

using namespace eboat;

namespace {

CoefficientTable two_point_table() {
    return CoefficientTable({{0.0, 0.0, 0.1}, {deg2rad(10.0), 0.8, 0.2}, {kPi, 0.0, 0.1}});
}

bool names_field(const std::vector<Violation>& vs, const std::string& field) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.field == field; });
}

}  // namespace

TEST_CASE("interpolation hits samples exactly") {
    const auto t = two_point_table();
    const auto c = interpolate_coefficients(t, deg2rad(10.0));
    CHECK(c.lift == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(c.drag == doctest::Approx(0.2).epsilon(1e-15));

    const auto z = interpolate_coefficients(default_foil_table(), 0.0);
    CHECK(z.lift == 0.0);
    CHECK(z.drag == doctest::Approx(0.01));
}

TEST_CASE("interpolation between samples is linear") {
    const auto c = interpolate_coefficients(two_point_table(), deg2rad(5.0));
    CHECK(c.lift == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(c.drag == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("negative angles fold with lift mirrored") {
    const auto t = default_sail_table();
    for (double deg : {3.0, 17.0, 44.0, 91.0, 170.0}) {
        const auto p = t.at(deg2rad(deg));
        const auto n = t.at(-deg2rad(deg));
        CHECK(n.lift == -p.lift);
        CHECK(n.drag == p.drag);
    }
}

TEST_CASE("interpolation stays within neighbouring samples and is continuous") {
    const auto t = default_foil_table();
    const auto s = t.samples();
    std::mt19937_64 gen(7);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        std::uniform_real_distribution<double> u(s[i].alpha, s[i + 1].alpha);
        for (int k = 0; k < 50; ++k) {
            const double a = u(gen);
            const auto c = t.at(a);
            CHECK(c.lift >= std::min(s[i].lift, s[i + 1].lift) - 1e-12);
            CHECK(c.lift <= std::max(s[i].lift, s[i + 1].lift) + 1e-12);
            CHECK(c.drag >= std::min(s[i].drag, s[i + 1].drag) - 1e-12);
            CHECK(c.drag <= std::max(s[i].drag, s[i + 1].drag) + 1e-12);
        }
    }
    const double slope = t.max_slope();
    const double h = 1e-7;
    std::uniform_real_distribution<double> u(-kPi + h, kPi - h);
    for (int k = 0; k < 1000; ++k) {
        const double a = u(gen);
        const auto c0 = t.at(a);
        const auto c1 = t.at(a + h);
        CHECK(std::abs(c1.lift - c0.lift) <= slope * h * (1 + 1e-9));
        CHECK(std::abs(c1.drag - c0.drag) <= slope * h * (1 + 1e-9));
    }
}

TEST_CASE("invalid tables report and refuse") {
    CoefficientTable empty;
    CHECK_FALSE(empty.valid());
    CHECK_THROWS_AS(empty.at(0.1), ConfigError);

    CoefficientTable unordered({{0.0, 0.0, 0.1}, {1.0, 0.5, 0.2}, {0.5, 0.3, 0.1}, {kPi, 0.0, 0.1}});
    CHECK_FALSE(unordered.valid());

    CoefficientTable negative_drag({{0.0, 0.0, -0.1}, {kPi, 0.0, 0.1}});
    CHECK_FALSE(negative_drag.valid());
    CHECK(names_field(negative_drag.violations(), "samples[0].drag"));
}

TEST_CASE("default params") {
    const auto p = default_eboat_params();
    CHECK(p.hull_quadrants.size() == 4);
    CHECK(p.propeller.thrust_at(0) == 0.0);
    CHECK(check_params(p).empty());
    CHECK_NOTHROW(validate_params(p));
    CHECK(default_sail_table().at(0.0).lift == 0.0);
}

TEST_CASE("validation names offending fields and lists them all") {
    auto p = default_eboat_params();
    p.mass = -1.0;
    CHECK(names_field(check_params(p), "mass"));
    CHECK_THROWS_AS(validate_params(p), ConfigError);

    auto q = default_eboat_params();
    q.hull_quadrants.pop_back();
    CHECK(names_field(check_params(q), "hull_quadrants"));

    auto both = default_eboat_params();
    both.mass = -1.0;
    both.hull_quadrants.pop_back();
    both.rate_limits.boom = 0.0;
    try {
        validate_params(both);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(names_field(e.violations(), "mass"));
        CHECK(names_field(e.violations(), "hull_quadrants"));
        CHECK(names_field(e.violations(), "rate_limits.boom"));
        CHECK(std::string(e.what()).find("mass") != std::string::npos);
    }
}

TEST_CASE("insufficient reserve buoyancy is rejected") {
    auto p = default_eboat_params();
    p.mass = 1000.0;
    CHECK(names_field(check_params(p), "hull_quadrants"));
}

TEST_CASE("thrust table shape is enforced") {
    auto p = default_eboat_params();
    p.propeller.thrust[static_cast<std::size_t>(p.propeller.max_level)] = 1.0;
    CHECK(names_field(check_params(p), "propeller.thrust"));
    CHECK(default_eboat_params().propeller.thrust_at(5) == 25.0);
    CHECK(default_eboat_params().propeller.thrust_at(-3) == -15.0);
}

TEST_CASE("equilibrium depth balances weight") {
    const auto p = default_eboat_params();
    CHECK(equilibrium_depth(p, 1025.0) == doctest::Approx(0.04878048780487805).epsilon(1e-12));
}
