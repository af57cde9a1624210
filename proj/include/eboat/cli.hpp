#pragma once

#include "eboat/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eboat::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kValidation = 1,
    kIo = 2,
    kRuntime = 3,
};

/// Parses "0..19", "7", "1,4,9" or combinations like "0..3,10".
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Parses "on"/"off" (also true/false, 1/0).
bool parse_switch(const std::string& text);

struct CommonOptions {
    std::optional<std::string> config;
    std::optional<std::string> mission;
};

/// Loads config (defaults when absent) and applies a mission file override.
SimConfig load_sim_config(const CommonOptions& options);

struct RunOptions : CommonOptions {
    std::string seeds = "0";
    std::string out = "runs";
    std::string controller = "baseline";
    std::optional<bool> waves;
    std::optional<bool> noise;
    std::optional<std::uint64_t> sensor_seed;
    bool serial = false;
};

struct PlotOptions : CommonOptions {
    std::vector<std::string> logs;
    std::string out = "trajectories.svg";
};

struct ServeOptions : CommonOptions {
    std::optional<std::string> address;
    double idle_timeout = 300.0;
};

int cmd_validate(const CommonOptions& options, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotOptions& options, std::ostream& out, std::ostream& err);
int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);
int cmd_defaults(std::ostream& out);

/// File name of the CSV written for `seed`.
std::string log_file_name(std::uint64_t seed);

/// Full command-line entry point.
int run_cli(int argc, char** argv);

}  // namespace eboat::cli
