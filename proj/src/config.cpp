#include "eboat/config.hpp"

#include <fstream>
#include <sstream>

namespace eboat {

using nlohmann::json;

namespace {

// Walks one JSON object, writing values into existing fields and recording
// type errors instead of throwing, so a single pass reports everything.
class Reader {
public:
    Reader(const json& node, std::string path, std::vector<Violation>& out)
        : node_(node), path_(std::move(path)), out_(out) {}

    bool has(const char* key) const { return node_.contains(key); }

    std::optional<Reader> child(const char* key) const {
        if (!node_.contains(key)) {
            return std::nullopt;
        }
        const json& c = node_.at(key);
        if (!c.is_object()) {
            fail(key, "must be an object");
            return std::nullopt;
        }
        return Reader(c, field(key), out_);
    }

    void number(const char* key, double& dst, double scale = 1.0) const {
        if (!node_.contains(key)) {
            return;
        }
        const json& v = node_.at(key);
        if (!v.is_number()) {
            fail(key, "must be a number");
            return;
        }
        dst = v.get<double>() * scale;
    }

    void angle(const char* key, double& dst) const { number(key, dst, kPi / 180.0); }

    void boolean(const char* key, bool& dst) const {
        if (!node_.contains(key)) {
            return;
        }
        const json& v = node_.at(key);
        if (!v.is_boolean()) {
            fail(key, "must be true or false");
            return;
        }
        dst = v.get<bool>();
    }

    void text(const char* key, std::string& dst) const {
        if (!node_.contains(key)) {
            return;
        }
        const json& v = node_.at(key);
        if (!v.is_string()) {
            fail(key, "must be a string");
            return;
        }
        dst = v.get<std::string>();
    }

    std::optional<std::vector<double>> numbers(const char* key, std::size_t expected = 0) const {
        if (!node_.contains(key)) {
            return std::nullopt;
        }
        return numbers_of(node_.at(key), field(key), expected);
    }

    template <int N>
    void vector(const char* key, Eigen::Matrix<double, N, 1>& dst, double scale = 1.0) const {
        if (auto v = numbers(key, N)) {
            for (int i = 0; i < N; ++i) {
                dst[i] = (*v)[static_cast<std::size_t>(i)] * scale;
            }
        }
    }

    const json& node() const { return node_; }
    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    void fail(const std::string& key, const std::string& what) const { out_.push_back({field(key), what}); }
    std::vector<Violation>& out() const { return out_; }

    std::optional<std::vector<double>> numbers_of(const json& v, const std::string& name,
                                                  std::size_t expected) const {
        if (!v.is_array() || (expected != 0 && v.size() != expected)) {
            out_.push_back({name, expected ? "must be an array of " + std::to_string(expected) + " numbers"
                                           : std::string("must be an array of numbers")});
            return std::nullopt;
        }
        std::vector<double> values;
        for (const auto& x : v) {
            if (!x.is_number()) {
                out_.push_back({name, "must contain only numbers"});
                return std::nullopt;
            }
            values.push_back(x.get<double>());
        }
        return values;
    }

private:
    const json& node_;
    std::string path_;
    std::vector<Violation>& out_;
};

void read_inertia(const Reader& r, Mat3& inertia) {
    if (!r.has("inertia")) {
        return;
    }
    const json& v = r.node().at("inertia");
    if (v.is_array() && v.size() == 3 && v[0].is_number()) {
        if (auto d = r.numbers("inertia", 3)) {
            inertia = Vec3((*d)[0], (*d)[1], (*d)[2]).asDiagonal();
        }
        return;
    }
    if (!v.is_array() || v.size() != 3) {
        r.fail("inertia", "must be a 3x3 matrix or 3 diagonal entries");
        return;
    }
    for (int i = 0; i < 3; ++i) {
        auto row = r.numbers_of(v[static_cast<std::size_t>(i)], r.field("inertia"), 3);
        if (!row) {
            return;
        }
        for (int j = 0; j < 3; ++j) {
            inertia(i, j) = (*row)[static_cast<std::size_t>(j)];
        }
    }
}

void read_foil(const Reader& r, FoilParams& foil) {
    r.number("area", foil.area);
    r.vector<3>("chord_direction", foil.chord_direction);
    r.vector<3>("center_of_effort", foil.center_of_effort);
    if (auto limits = r.numbers("deflection_limits_deg", 2)) {
        foil.min_deflection = deg2rad((*limits)[0]);
        foil.max_deflection = deg2rad((*limits)[1]);
    }
    if (r.has("coefficients")) {
        const json& rows = r.node().at("coefficients");
        if (!rows.is_array()) {
            r.fail("coefficients", "must be an array of [alpha_deg, C_L, C_D]");
            return;
        }
        std::vector<CoefficientSample> samples;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto row = r.numbers_of(rows[i], r.field("coefficients[" + std::to_string(i) + "]"), 3);
            if (!row) {
                return;
            }
            samples.push_back({deg2rad((*row)[0]), (*row)[1], (*row)[2]});
        }
        // Table constraints are checked with the rest of the vessel.
        foil.coefficients = CoefficientTable(std::move(samples));
    }
}

void read_vessel(const Reader& r, VesselParams& p) {
    r.number("length", p.length);
    r.number("beam", p.beam);
    r.number("mass", p.mass);
    r.number("gravity", p.gravity);
    read_inertia(r, p.inertia);
    r.vector<6>("added_mass", p.added_mass);
    r.vector<6>("linear_damping", p.linear_damping);
    r.vector<6>("quadratic_damping", p.quadratic_damping);
    r.number("heave_damping", p.heave_damping);
    if (r.has("hull_quadrants")) {
        const json& cells = r.node().at("hull_quadrants");
        if (!cells.is_array()) {
            r.fail("hull_quadrants", "must be an array");
        } else {
            p.hull_quadrants.clear();
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const std::string name = r.field("hull_quadrants[" + std::to_string(i) + "]");
                if (!cells[i].is_object()) {
                    r.out().push_back({name, "must be an object"});
                    continue;
                }
                Reader cell(cells[i], name, r.out());
                HullQuadrant q;
                cell.vector<3>("offset", q.offset);
                cell.number("volume", q.volume);
                cell.number("plan_area", q.plan_area);
                p.hull_quadrants.push_back(q);
            }
        }
    }
    for (auto [key, foil] : {std::pair{"sail", &p.sail}, std::pair{"keel", &p.keel}, std::pair{"rudder", &p.rudder}}) {
        if (auto f = r.child(key)) {
            read_foil(*f, *foil);
        }
    }
    if (auto prop = r.child("propeller")) {
        if (auto thrust = prop->numbers("thrust")) {
            p.propeller.thrust = *thrust;
            p.propeller.max_level = static_cast<int>(thrust->size() / 2);
            if (thrust->size() % 2 == 0) {
                prop->fail("thrust", "needs an odd number of entries (levels -L..+L)");
            }
        }
        prop->vector<3>("application_point", p.propeller.application_point);
    }
    if (auto rates = r.child("rate_limits")) {
        rates->angle("rudder_deg_s", p.rate_limits.rudder);
        rates->angle("boom_deg_s", p.rate_limits.boom);
        rates->number("propeller_levels_s", p.rate_limits.propeller);
    }
}

void read_world(const Reader& r, WorldConfig& w) {
    r.number("air_density", w.air_density);
    r.number("water_density", w.water_density);
    if (auto wind = r.child("wind")) {
        Vec2 mean = w.wind.mean.head<2>();
        wind->vector<2>("mean", mean);
        w.wind.mean = Vec3(mean.x(), mean.y(), 0.0);
        wind->number("gust_sigma", w.wind.gust_sigma);
        wind->number("gust_time_constant", w.wind.gust_time_constant);
    }
    if (auto waves = r.child("waves")) {
        waves->boolean("enabled", w.waves_enabled);
        waves->boolean("randomize_phases", w.randomize_wave_phases);
        waves->number("gravity", w.waves.gravity);
        if (waves->has("components")) {
            const json& list = waves->node().at("components");
            if (!list.is_array()) {
                waves->fail("components", "must be an array");
            } else {
                w.waves.components.clear();
                for (std::size_t i = 0; i < list.size(); ++i) {
                    const std::string name = waves->field("components[" + std::to_string(i) + "]");
                    if (!list[i].is_object()) {
                        r.out().push_back({name, "must be an object"});
                        continue;
                    }
                    Reader c(list[i], name, r.out());
                    WaveComponent comp;
                    double direction = 0.0;
                    c.number("amplitude", comp.amplitude);
                    c.number("wavelength", comp.wavelength);
                    c.angle("direction_deg", direction);
                    c.angle("phase_deg", comp.phase);
                    comp.direction = Vec2(std::cos(direction), std::sin(direction));
                    w.waves.components.push_back(comp);
                }
            }
        }
    }
}

void read_sensors(const Reader& r, EpisodeConfig& c) {
    r.boolean("enabled", c.sensor_noise_enabled);
    r.number("position_sigma", c.sensors.position);
    r.number("speed_sigma", c.sensors.speed);
    r.angle("angle_sigma_deg", c.sensors.angle);
    r.number("wind_sigma", c.sensors.wind);
    r.number("period", c.sensors.period);
}

void read_episode(const Reader& r, EpisodeConfig& c) {
    r.number("dt", c.dt);
    r.number("control_period", c.control_period);
    r.angle("capsize_roll_deg", c.capsize_roll);
    if (auto start = r.child("start")) {
        start->number("x", c.start.x);
        start->number("y", c.start.y);
        start->angle("heading_deg", c.start.heading);
        start->number("surge", c.start.surge);
    }
    if (auto jitter = r.child("jitter")) {
        jitter->boolean("enabled", c.jitter.enabled);
        jitter->number("position_sigma", c.jitter.position_sigma);
        jitter->angle("heading_sigma_deg", c.jitter.heading_sigma);
    }
    if (auto reward = r.child("reward")) {
        reward->number("progress", c.reward.progress);
        reward->number("waypoint_bonus", c.reward.waypoint_bonus);
        reward->number("capsize_penalty", c.reward.capsize_penalty);
    }
    if (r.has("sensor_seed")) {
        const json& v = r.node().at("sensor_seed");
        if (v.is_null()) {
            c.sensor_seed.reset();
        } else if (v.is_number_integer() && (v.is_number_unsigned() || v.get<std::int64_t>() >= 0)) {
            c.sensor_seed = v.get<std::uint64_t>();
        } else {
            r.fail("sensor_seed", "must be a non-negative integer or null");
        }
    }
}

void read_mission(const Reader& r, Mission& m) {
    if (r.has("waypoints")) {
        const json& wps = r.node().at("waypoints");
        if (!wps.is_object()) {
            r.fail("waypoints", "must be an object of label -> [x, y]");
        } else {
            m.waypoints.clear();
            for (const auto& [label, value] : wps.items()) {
                const std::string name = r.field("waypoints." + label);
                if (label.size() != 1) {
                    r.out().push_back({name, "labels are single characters"});
                    continue;
                }
                if (auto xy = r.numbers_of(value, name, 2)) {
                    m.waypoints[label[0]] = Vec2((*xy)[0], (*xy)[1]);
                }
            }
        }
    }
    r.text("sequence", m.sequence);
    r.number("acceptance_radius", m.acceptance_radius);
    r.number("time_limit", m.time_limit);
}

json vec_json(const auto& v, double scale = 1.0) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) {
        a.push_back(v[i] * scale);
    }
    return a;
}

json foil_json(const FoilParams& f) {
    json rows = json::array();
    for (const auto& s : f.coefficients.samples()) {
        rows.push_back({rad2deg(s.alpha), s.lift, s.drag});
    }
    return {
        {"area", f.area},
        {"chord_direction", vec_json(f.chord_direction)},
        {"center_of_effort", vec_json(f.center_of_effort)},
        {"deflection_limits_deg", {rad2deg(f.min_deflection), rad2deg(f.max_deflection)}},
        {"coefficients", rows},
    };
}

}  // namespace

std::vector<Violation> check_sim_config(const SimConfig& config) {
    auto out = check_config(config.episode);
    auto mission = check_mission(config.mission);
    out.insert(out.end(), mission.begin(), mission.end());
    return out;
}

SimConfig parse_config(const json& doc) {
    SimConfig config;
    std::vector<Violation> out;
    if (!doc.is_object()) {
        throw ConfigError("<document>", "must be a JSON object");
    }
    Reader root(doc, "", out);
    if (auto r = root.child("vessel")) read_vessel(*r, config.episode.vessel);
    if (auto r = root.child("world")) read_world(*r, config.episode.world);
    if (auto r = root.child("sensors")) read_sensors(*r, config.episode);
    if (auto r = root.child("episode")) read_episode(*r, config.episode);
    if (auto r = root.child("mission")) read_mission(*r, config.mission);

    auto invariants = check_sim_config(config);
    out.insert(out.end(), invariants.begin(), invariants.end());
    if (!out.empty()) {
        throw ConfigError(std::move(out));
    }
    return config;
}

Mission parse_mission(const json& doc) {
    Mission m = default_mission();
    std::vector<Violation> out;
    if (!doc.is_object()) {
        throw ConfigError("<mission>", "must be a JSON object");
    }
    // Accept either a bare mission object or a config document with a "mission" key.
    const json& node = doc.contains("mission") ? doc.at("mission") : doc;
    read_mission(Reader(node, "mission", out), m);
    auto invariants = check_mission(m);
    out.insert(out.end(), invariants.begin(), invariants.end());
    if (!out.empty()) {
        throw ConfigError(std::move(out));
    }
    return m;
}

namespace {

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigFileError("cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ConfigFileError(path.string() + ": " + e.what());
    }
}

}  // namespace

SimConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_json_file(path));
}

Mission load_mission(const std::filesystem::path& path) {
    return parse_mission(read_json_file(path));
}

json mission_to_json(const Mission& m) {
    json wps = json::object();
    for (const auto& [label, p] : m.waypoints) {
        wps[std::string(1, label)] = {p.x(), p.y()};
    }
    return {
        {"waypoints", wps},
        {"sequence", m.sequence},
        {"acceptance_radius", m.acceptance_radius},
        {"time_limit", m.time_limit},
    };
}

json config_to_json(const SimConfig& config) {
    const auto& e = config.episode;
    const auto& p = e.vessel;
    json inertia = json::array();
    for (int i = 0; i < 3; ++i) {
        inertia.push_back({p.inertia(i, 0), p.inertia(i, 1), p.inertia(i, 2)});
    }
    json cells = json::array();
    for (const auto& q : p.hull_quadrants) {
        cells.push_back({{"offset", vec_json(q.offset)}, {"volume", q.volume}, {"plan_area", q.plan_area}});
    }
    json waves = json::array();
    for (const auto& c : e.world.waves.components) {
        waves.push_back({
            {"amplitude", c.amplitude},
            {"wavelength", c.wavelength},
            {"direction_deg", rad2deg(std::atan2(c.direction.y(), c.direction.x()))},
            {"phase_deg", rad2deg(c.phase)},
        });
    }
    json doc = {
        {"vessel",
         {
             {"length", p.length},
             {"beam", p.beam},
             {"mass", p.mass},
             {"gravity", p.gravity},
             {"inertia", inertia},
             {"added_mass", vec_json(p.added_mass)},
             {"linear_damping", vec_json(p.linear_damping)},
             {"quadratic_damping", vec_json(p.quadratic_damping)},
             {"heave_damping", p.heave_damping},
             {"hull_quadrants", cells},
             {"sail", foil_json(p.sail)},
             {"keel", foil_json(p.keel)},
             {"rudder", foil_json(p.rudder)},
             {"propeller",
              {{"thrust", p.propeller.thrust}, {"application_point", vec_json(p.propeller.application_point)}}},
             {"rate_limits",
              {{"rudder_deg_s", rad2deg(p.rate_limits.rudder)},
               {"boom_deg_s", rad2deg(p.rate_limits.boom)},
               {"propeller_levels_s", p.rate_limits.propeller}}},
         }},
        {"world",
         {
             {"air_density", e.world.air_density},
             {"water_density", e.world.water_density},
             {"wind",
              {{"mean", {e.world.wind.mean.x(), e.world.wind.mean.y()}},
               {"gust_sigma", e.world.wind.gust_sigma},
               {"gust_time_constant", e.world.wind.gust_time_constant}}},
             {"waves",
              {{"enabled", e.world.waves_enabled},
               {"randomize_phases", e.world.randomize_wave_phases},
               {"gravity", e.world.waves.gravity},
               {"components", waves}}},
         }},
        {"sensors",
         {
             {"enabled", e.sensor_noise_enabled},
             {"position_sigma", e.sensors.position},
             {"speed_sigma", e.sensors.speed},
             {"angle_sigma_deg", rad2deg(e.sensors.angle)},
             {"wind_sigma", e.sensors.wind},
             {"period", e.sensors.period},
         }},
        {"episode",
         {
             {"dt", e.dt},
             {"control_period", e.control_period},
             {"capsize_roll_deg", rad2deg(e.capsize_roll)},
             {"start", {{"x", e.start.x}, {"y", e.start.y}, {"heading_deg", rad2deg(e.start.heading)}, {"surge", e.start.surge}}},
             {"jitter",
              {{"enabled", e.jitter.enabled},
               {"position_sigma", e.jitter.position_sigma},
               {"heading_sigma_deg", rad2deg(e.jitter.heading_sigma)}}},
             {"reward",
              {{"progress", e.reward.progress},
               {"waypoint_bonus", e.reward.waypoint_bonus},
               {"capsize_penalty", e.reward.capsize_penalty}}},
             {"sensor_seed", e.sensor_seed ? json(*e.sensor_seed) : json(nullptr)},
         }},
        {"mission", mission_to_json(config.mission)},
    };
    return doc;
}

}  // namespace eboat
