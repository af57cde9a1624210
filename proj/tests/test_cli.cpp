#include "doctest.h"

#include "eboat/cli.hpp"
#include "eboat/log_io.hpp"
#include "eboat/netenv.hpp"

#include <csignal>
#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace eboat;

extern char** environ;

namespace {

const std::string kCli = EBOAT_CLI_PATH;

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("eboat_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

int run(const std::string& args, const std::string& capture = "/dev/null") {
    const int status = std::system((kCli + " " + args + " > " + capture + " 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

// Background `eboat serve`, stdout+stderr to `log`.
struct ServeProcess {
    pid_t pid = -1;
    ServeProcess(const std::vector<std::string>& args, const std::string& log) {
        std::vector<std::string> argv_s{kCli, "serve"};
        argv_s.insert(argv_s.end(), args.begin(), args.end());
        std::vector<char*> argv;
        for (auto& a : argv_s) argv.push_back(a.data());
        argv.push_back(nullptr);
        posix_spawn_file_actions_t fa;
        posix_spawn_file_actions_init(&fa);
        posix_spawn_file_actions_addopen(&fa, 1, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        posix_spawn_file_actions_adddup2(&fa, 1, 2);
        posix_spawn(&pid, kCli.c_str(), &fa, nullptr, argv.data(), environ);
        posix_spawn_file_actions_destroy(&fa);
    }
    int wait_exit() {
        int status = 0;
        ::waitpid(pid, &status, 0);
        pid = -1;
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    ~ServeProcess() {
        if (pid > 0) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
        }
    }
};

std::uint16_t wait_for_port(const std::string& log) {
    for (int i = 0; i < 100; ++i) {
        const auto text = slurp(log);
        const auto pos = text.find("listening on ");
        if (pos != std::string::npos && text.find('\n', pos) != std::string::npos) {
            const auto colon = text.rfind(':', text.find('\n', pos));
            return static_cast<std::uint16_t>(std::stoi(text.substr(colon + 1)));
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    return 0;
}

std::uint16_t free_port() {
    net::ServerOptions o;
    o.port = 0;
    net::Server probe(SimConfig{}, o);
    probe.bind();
    return probe.port();
}

}  // namespace

TEST_CASE("seed lists") {
    CHECK(cli::parse_seeds("0..19").size() == 20);
    CHECK(cli::parse_seeds("7") == std::vector<std::uint64_t>{7});
    CHECK(cli::parse_seeds("1,4,9") == std::vector<std::uint64_t>{1, 4, 9});
    CHECK(cli::parse_seeds("0..2,10") == std::vector<std::uint64_t>{0, 1, 2, 10});
    CHECK_THROWS_AS(cli::parse_seeds("3..1"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_seeds("x"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_seeds("-1"), std::invalid_argument);
    CHECK(cli::parse_switch("on"));
    CHECK_FALSE(cli::parse_switch("off"));
    CHECK_THROWS_AS(cli::parse_switch("sometimes"), std::invalid_argument);
}

TEST_CASE("validate exit codes") {
    Scratch s("validate");
    CHECK(run("validate " + std::string(EBOAT_SOURCE_DIR) + "/config/default.json") == 0);
    {
        std::ofstream(s / "bad.json") << R"({"vessel": {"mass": -1}})";
    }
    CHECK(run("validate " + (s / "bad.json"), s / "out.txt") == 1);
    CHECK(slurp(s / "out.txt").find("mass") != std::string::npos);
    CHECK(run("validate " + (s / "missing.json")) == 2);
    {
        std::ofstream(s / "broken.json") << "{";
    }
    CHECK(run("validate " + (s / "broken.json")) == 2);
    CHECK(run("nonsense") == 1);
}

TEST_CASE("in-process validate reports all violations") {
    Scratch s("validate_inproc");
    {
        std::ofstream(s / "bad.json") << R"({"vessel": {"mass": -1, "beam": 0}, "episode": {"dt": -1}})";
    }
    cli::CommonOptions o;
    o.config = s / "bad.json";
    std::ostringstream out, err;
    CHECK(cli::cmd_validate(o, out, err) == cli::kValidation);
    CHECK(err.str().find("mass") != std::string::npos);
    CHECK(err.str().find("beam") != std::string::npos);
    CHECK(err.str().find("dt") != std::string::npos);
}

TEST_CASE("batch run writes one CSV per seed plus a summary") {
    Scratch s("run20");
    CHECK(run("run --seeds 0..19 --out " + (s / "runs")) == 0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CHECK(fs::exists(s.dir / "runs" / cli::log_file_name(seed)));
    }
    const auto summary = slurp(s / "runs/summary.csv");
    CHECK(count(summary, "\n") == 21);
    CHECK(count(summary, ",1,mission_complete,") == 20);

    CHECK(run("plot --out " + (s / "fig.svg") + " " + (s / "runs/episode_seed*.csv")) == 0);
    const auto svg = slurp(s / "fig.svg");
    CHECK(count(svg, "<polyline") == 20);
    CHECK(count(svg, "<text") == 4);
    CHECK(run("plot --out " + (s / "fig2.svg") + " " + (s / "runs/episode_seed*.csv")) == 0);
    CHECK(slurp(s / "fig2.svg") == svg);
}

TEST_CASE("same seed twice gives byte-identical CSV") {
    Scratch s("same_seed");
    CHECK(run("run --seeds 3 --out " + (s / "a")) == 0);
    CHECK(run("run --seeds 3 --serial --out " + (s / "b")) == 0);
    const auto a = slurp(s / "a/episode_seed003.csv");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(s / "b/episode_seed003.csv"));
}

TEST_CASE("sensor noise substream does not move the boat when waves are off") {
    Scratch s("streams");
    const std::string common = "run --seeds 4 --waves off --noise off --controller baseline ";
    CHECK(run(common + "--sensor-seed 100 --out " + (s / "a")) == 0);
    CHECK(run(common + "--sensor-seed 200 --out " + (s / "b")) == 0);
    std::ifstream fa(s / "a/episode_seed004.csv"), fb(s / "b/episode_seed004.csv");
    const auto la = read_log_csv(fa), lb = read_log_csv(fb);
    REQUIRE(la.records.size() == lb.records.size());
    for (std::size_t i = 0; i < la.records.size(); ++i) {
        CHECK(la.records[i].position == lb.records[i].position);
        CHECK(la.records[i].attitude == lb.records[i].attitude);
    }
}

TEST_CASE("run flag errors") {
    Scratch s("run_flags");
    CHECK(run("run --seeds 0 --waves maybe --out " + (s / "x")) == 1);
    CHECK(run("run --seeds 2..1 --out " + (s / "x")) == 1);
    CHECK(run("run --seeds 0 --controller psychic --out " + (s / "x")) == 1);
    CHECK(run("run --seeds 0 --config " + (s / "nope.json") + " --out " + (s / "x")) == 2);
}

TEST_CASE("numeric blowup is recorded and fails the run") {
    Scratch s("blowup");
    {
        // dynamic pressure overflows to infinity on the first substep
        std::ofstream(s / "gale.json") << R"({"world": {"wind": {"mean": [1e200, 0], "gust_sigma": 0}}})";
    }
    CHECK(run("run --seeds 0 --controller zero --config " + (s / "gale.json") + " --out " + (s / "r")) == 3);
    const auto summary = slurp(s / "r/summary.csv");
    CHECK(summary.find("0,0,") != std::string::npos);
    CHECK(summary.find("non-finite") != std::string::npos);
}

TEST_CASE("plot errors") {
    Scratch s("plot");
    CHECK(run("plot --out " + (s / "empty.svg")) == 1);
    CHECK_FALSE(fs::exists(s.dir / "empty.svg"));
    {
        std::ofstream(s / "bad.csv") << kLogFormatLine << "\n" << "t,x\n1,2\n";
    }
    CHECK(run("plot --out " + (s / "bad.svg") + " " + (s / "bad.csv"), s / "err.txt") == 1);
    CHECK(slurp(s / "err.txt").find("row") != std::string::npos);
    CHECK_FALSE(fs::exists(s.dir / "bad.svg"));
    CHECK(run("plot --out " + (s / "m.svg") + " " + (s / "missing.csv")) == 2);
}

TEST_CASE("defaults document validates") {
    Scratch s("defaults");
    CHECK(run("defaults", s / "d.json") == 0);
    CHECK(run("validate " + (s / "d.json")) == 0);
    CHECK(slurp(s / "d.json") == slurp(std::string(EBOAT_SOURCE_DIR) + "/config/default.json"));
}

TEST_CASE("serve listens on the configured default port and drains on SIGTERM") {
    Scratch s("serve");
    const auto port = free_port();
    ::setenv(net::kPortEnvVar, std::to_string(port).c_str(), 1);
    ServeProcess proc({}, s / "serve.log");
    ::unsetenv(net::kPortEnvVar);
    REQUIRE(wait_for_port(s / "serve.log") == port);
    {
        net::LineClient c("127.0.0.1", port);
        CHECK(c.request({{"type", "hello"}}).at("type") == "ack");
    }
    ::kill(proc.pid, SIGTERM);
    CHECK(proc.wait_exit() == 0);
    CHECK(slurp(s / "serve.log").find("shut down cleanly") != std::string::npos);
}

TEST_CASE("serve on an occupied port fails to start") {
    Scratch s("serve_busy");
    ServeProcess first({"--address", "127.0.0.1:0"}, s / "first.log");
    const auto port = wait_for_port(s / "first.log");
    REQUIRE(port != 0);
    CHECK(run("serve --address 127.0.0.1:" + std::to_string(port), s / "second.log") == 2);
    ::kill(first.pid, SIGINT);
    CHECK(first.wait_exit() == 0);
}
