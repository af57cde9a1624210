#include "eboat/cli.hpp"

#include "eboat/batch.hpp"
#include "eboat/log_io.hpp"
#include "eboat/netenv.hpp"
#include "eboat/plot.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace eboat::cli {

namespace fs = std::filesystem;

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string part;
    auto number = [&text](const std::string& s) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != s.size() || s.empty() || s.front() == '-') {
            throw std::invalid_argument("bad seed list '" + text + "'");
        }
        return static_cast<std::uint64_t>(v);
    };
    while (std::getline(ss, part, ',')) {
        if (auto dots = part.find(".."); dots != std::string::npos) {
            const auto lo = number(part.substr(0, dots));
            const auto hi = number(part.substr(dots + 2));
            if (hi < lo) {
                throw std::invalid_argument("empty seed range '" + part + "'");
            }
            for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            seeds.push_back(number(part));
        }
    }
    if (seeds.empty()) {
        throw std::invalid_argument("no seeds in '" + text + "'");
    }
    return seeds;
}

bool parse_switch(const std::string& text) {
    if (text == "on" || text == "true" || text == "1") return true;
    if (text == "off" || text == "false" || text == "0") return false;
    throw std::invalid_argument("expected on|off, got '" + text + "'");
}

SimConfig load_sim_config(const CommonOptions& options) {
    SimConfig config = options.config ? load_config(*options.config) : SimConfig{};
    if (options.mission) {
        config.mission = load_mission(*options.mission);
    }
    return config;
}

std::string log_file_name(std::uint64_t seed) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "episode_seed%03llu.csv", static_cast<unsigned long long>(seed));
    return buf;
}

namespace {

// Runs `body`, mapping the error families onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigFileError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ConfigError& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kValidation;
    } catch (const CsvError& e) {
        err << "malformed log: " << e.what() << '\n';
        return kValidation;
    } catch (const net::BindError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const IntegrationError& e) {
        err << "integration failure: " << e.what() << '\n';
        return kRuntime;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
}

}  // namespace

int cmd_validate(const CommonOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto config = load_sim_config(options);
        out << "ok: " << (options.config ? *options.config : std::string("<defaults>")) << " ("
            << config.mission.sequence.size() << " mission targets)\n";
        return kOk;
    });
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto config = load_sim_config(options);
        if (options.waves) config.episode.world.waves_enabled = *options.waves;
        if (options.noise) config.episode.sensor_noise_enabled = *options.noise;
        if (options.sensor_seed) config.episode.sensor_seed = *options.sensor_seed;
        ControllerKind kind;
        if (options.controller == "baseline") {
            kind = ControllerKind::Baseline;
        } else if (options.controller == "zero") {
            kind = ControllerKind::Zero;
        } else {
            throw std::invalid_argument("unknown controller '" + options.controller + "' (baseline|zero)");
        }
        const auto seeds = parse_seeds(options.seeds);

        const auto outcomes = options.serial ? run_batch_serial(config.episode, config.mission, seeds, kind)
                                             : run_batch_parallel(config.episode, config.mission, seeds, kind);

        std::error_code ec;
        fs::create_directories(options.out, ec);
        if (ec) {
            throw ConfigFileError("cannot create " + options.out + ": " + ec.message());
        }
        std::vector<EpisodeSummary> summaries;
        bool blowup = false;
        for (const auto& o : outcomes) {
            const fs::path path = fs::path(options.out) / log_file_name(o.summary.seed);
            std::ofstream file(path, std::ios::binary);
            if (!file) {
                throw ConfigFileError("cannot write " + path.string());
            }
            write_log_csv(o.log, file);
            summaries.push_back(o.summary);
            blowup = blowup || !o.summary.error.empty();
        }
        const fs::path summary_path = fs::path(options.out) / "summary.csv";
        std::ofstream summary(summary_path, std::ios::binary);
        if (!summary) {
            throw ConfigFileError("cannot write " + summary_path.string());
        }
        write_summary_csv(summaries, summary);

        std::size_t completed = 0;
        for (const auto& s : summaries) completed += s.completed ? 1 : 0;
        out << completed << "/" << summaries.size() << " episodes completed mission \"" << config.mission.sequence
            << "\"; logs in " << options.out << '\n';
        return blowup ? kRuntime : kOk;
    });
}

int cmd_plot(const PlotOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (options.logs.empty()) {
            throw std::invalid_argument("no log files given");
        }
        const auto config = load_sim_config(options);
        std::vector<EpisodeLog> logs;
        for (const auto& path : options.logs) {
            std::ifstream in(path, std::ios::binary);
            if (!in) {
                throw ConfigFileError("cannot open " + path);
            }
            logs.push_back(read_log_csv(in, path));
        }
        const std::string svg = render_trajectories_svg(logs, config.mission);
        std::ofstream file(options.out, std::ios::binary);
        if (!file) {
            throw ConfigFileError("cannot write " + options.out);
        }
        file << svg;
        out << "wrote " << options.out << " (" << logs.size() << " trajectories)\n";
        return kOk;
    });
}

namespace {

std::atomic<net::Server*> g_server{nullptr};

extern "C" void handle_shutdown_signal(int) {
    if (auto* s = g_server.load()) {
        s->stop();
    }
}

}  // namespace

int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto config = load_sim_config(options);
        auto server_options = net::default_server_options();
        if (options.address) {
            server_options = net::parse_address(*options.address, server_options);
        }
        server_options.idle_timeout = options.idle_timeout;
        net::Server server(config, server_options);
        server.bind();

        g_server.store(&server);
        struct sigaction action {};
        action.sa_handler = handle_shutdown_signal;
        sigemptyset(&action.sa_mask);
        struct sigaction old_int {}, old_term {};
        sigaction(SIGINT, &action, &old_int);
        sigaction(SIGTERM, &action, &old_term);

        out << "listening on " << server_options.host << ":" << server.port() << std::endl;
        server.run();

        sigaction(SIGINT, &old_int, nullptr);
        sigaction(SIGTERM, &old_term, nullptr);
        g_server.store(nullptr);
        out << "shut down cleanly" << std::endl;
        return kOk;
    });
}

int cmd_defaults(std::ostream& out) {
    out << config_to_json(SimConfig{}).dump(2) << '\n';
    return kOk;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Wind and propeller sailing-vessel simulator"};
    app.require_subcommand(1);

    CommonOptions validate_opts;
    auto* validate = app.add_subcommand("validate", "Check a configuration (and mission) file");
    validate->add_option("--config,config", validate_opts.config, "Config JSON")->required();
    validate->add_option("--mission", validate_opts.mission, "Mission JSON");

    RunOptions run_opts;
    std::string waves, noise;
    auto* run = app.add_subcommand("run", "Run scripted episodes and write per-seed CSV logs");
    run->add_option("--config", run_opts.config, "Config JSON");
    run->add_option("--mission", run_opts.mission, "Mission JSON");
    run->add_option("--seeds", run_opts.seeds, "Seeds, e.g. 0..19 or 1,2,3")->capture_default_str();
    run->add_option("--out", run_opts.out, "Output directory")->capture_default_str();
    run->add_option("--controller", run_opts.controller, "baseline|zero")->capture_default_str();
    run->add_option("--waves", waves, "on|off");
    run->add_option("--noise", noise, "on|off");
    run->add_option("--sensor-seed", run_opts.sensor_seed, "Override the sensor-noise substream seed");
    run->add_flag("--serial", run_opts.serial, "Run episodes one after another");

    PlotOptions plot_opts;
    auto* plot = app.add_subcommand("plot", "Overlay episode CSVs as an SVG");
    plot->add_option("--config", plot_opts.config, "Config JSON (waypoint map)");
    plot->add_option("--mission", plot_opts.mission, "Mission JSON (waypoint map)");
    plot->add_option("--out", plot_opts.out, "SVG path")->capture_default_str();
    plot->add_option("logs", plot_opts.logs, "Episode CSV files");

    ServeOptions serve_opts;
    auto* serve = app.add_subcommand("serve", "Serve episodes over newline-delimited JSON/TCP");
    serve->add_option("--config", serve_opts.config, "Config JSON");
    serve->add_option("--mission", serve_opts.mission, "Mission JSON");
    serve->add_option("--address", serve_opts.address, "host:port (default 127.0.0.1:5757, or $EBOAT_PORT)");
    serve->add_option("--idle-timeout", serve_opts.idle_timeout, "Seconds before idle connections close")
        ->capture_default_str();

    auto* defaults = app.add_subcommand("defaults", "Print the default configuration document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kValidation;
    }

    if (*validate) return cmd_validate(validate_opts, std::cout, std::cerr);
    if (*run) {
        try {
            if (!waves.empty()) run_opts.waves = parse_switch(waves);
            if (!noise.empty()) run_opts.noise = parse_switch(noise);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kValidation;
        }
        return cmd_run(run_opts, std::cout, std::cerr);
    }
    if (*plot) return cmd_plot(plot_opts, std::cout, std::cerr);
    if (*serve) return cmd_serve(serve_opts, std::cout, std::cerr);
    if (*defaults) return cmd_defaults(std::cout);
    return kValidation;
}

}  // namespace eboat::cli
