#include "eboat/log_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace eboat {

const std::vector<std::string>& log_columns() {
    static const std::vector<std::string> kColumns = {
        "t", "x", "y", "z", "roll", "pitch", "yaw", "u", "v", "w", "p", "q", "r",
        "rudder", "boom", "propeller", "wind_x", "wind_y", "reward", "waypoint_index",
    };
    return kColumns;
}

std::string format_real(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

void write_log_csv(const EpisodeLog& log, std::ostream& out) {
    out << kLogFormatLine << '\n';
    const auto& cols = log_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
    for (const auto& r : log.records) {
        out << format_real(r.t);
        for (int i = 0; i < 3; ++i) out << ',' << format_real(r.position[i]);
        for (int i = 0; i < 3; ++i) out << ',' << format_real(r.attitude[i]);
        for (int i = 0; i < 6; ++i) out << ',' << format_real(r.velocity[i]);
        out << ',' << format_real(r.rudder) << ',' << format_real(r.boom) << ',' << r.propeller << ','
            << format_real(r.wind.x()) << ',' << format_real(r.wind.y()) << ',' << format_real(r.reward) << ','
            << r.waypoint_index << '\n';
    }
}

void write_summary_csv(const std::vector<EpisodeSummary>& summaries, std::ostream& out) {
    out << "seed,completed,cause,time,path_length,waypoints_reached,error\n";
    for (const auto& s : summaries) {
        std::string error = s.error;
        for (char& c : error) {
            if (c == ',' || c == '\n') c = ' ';
        }
        out << s.seed << ',' << (s.completed ? 1 : 0) << ',' << to_string(s.cause) << ',' << format_real(s.time)
            << ',' << format_real(s.path_length) << ',' << s.waypoints_reached << ',' << error << '\n';
    }
}

namespace {

double parse_real(std::string_view text, const std::string& where) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw CsvError(where + ": not a number: '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

EpisodeLog read_log_csv(std::istream& in, const std::string& source) {
    EpisodeLog log;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    const auto& cols = log_columns();
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const std::string where = source + " row " + std::to_string(line_no);
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!header_seen) {
            if (fields.size() != cols.size() || fields[0] != "t") {
                throw CsvError(where + ": unexpected header");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != cols.size()) {
            throw CsvError(where + ": expected " + std::to_string(cols.size()) + " fields, got " +
                           std::to_string(fields.size()));
        }
        std::vector<double> v;
        v.reserve(fields.size());
        for (auto f : fields) {
            v.push_back(parse_real(f, where));
        }
        LogRecord r;
        r.t = v[0];
        r.position = Vec3(v[1], v[2], v[3]);
        r.attitude = Vec3(v[4], v[5], v[6]);
        r.velocity << v[7], v[8], v[9], v[10], v[11], v[12];
        r.rudder = v[13];
        r.boom = v[14];
        r.propeller = static_cast<int>(v[15]);
        r.wind = Vec2(v[16], v[17]);
        r.reward = v[18];
        r.waypoint_index = static_cast<std::size_t>(v[19]);
        log.records.push_back(r);
    }
    if (!header_seen) {
        throw CsvError(source + ": no header row");
    }
    return log;
}

}  // namespace eboat
