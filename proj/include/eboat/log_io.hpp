#pragma once

#include "eboat/episode.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace eboat {

/// First line of every episode CSV. Bump the version when columns change.
inline constexpr const char* kLogFormatLine = "# eboat-log v1";

/// Column order of episode CSVs. Angles are radians, positions NED metres.
const std::vector<std::string>& log_columns();

/// Shortest decimal that parses back to exactly `value`.
std::string format_real(double value);

void write_log_csv(const EpisodeLog& log, std::ostream& out);

void write_summary_csv(const std::vector<EpisodeSummary>& summaries, std::ostream& out);

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses an episode CSV back into records. Errors name the offending line.
EpisodeLog read_log_csv(std::istream& in, const std::string& source = "<csv>");

}  // namespace eboat
