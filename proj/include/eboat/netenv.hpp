#pragma once

#include "eboat/config.hpp"
#include "eboat/episode.hpp"

#include "json.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eboat::net {

inline constexpr const char* kProtocolVersion = "1";
inline constexpr std::uint16_t kDefaultPort = 5757;
/// Environment variable that overrides the default port.
inline constexpr const char* kPortEnvVar = "EBOAT_PORT";

using nlohmann::json;

json observation_json(const Observation& obs);
json info_json(const StepInfo& info, double t);
json spaces_json(const VesselParams& params);
json error_json(const std::string& code, const std::string& message);

/// Decodes an action given as [rudder, boom, propeller] or as an object.
/// Throws std::invalid_argument when it is neither.
Action parse_action(const json& value);

/// One connection's protocol state machine around one Environment.
///
/// NEW --hello--> READY --reset--> RUNNING --step*--> FINISHED --reset--> RUNNING
/// Any state --close--> CLOSED.
class Session {
public:
    enum class State { New, Ready, Running, Finished, Closed };

    struct Reply {
        json message;
        bool close_connection = false;
    };

    explicit Session(SimConfig config);

    /// Parses one protocol line. Malformed input yields error{parse} and asks to close.
    Reply handle_line(const std::string& line);

    /// Handles one parsed request; exactly one response.
    json handle_message(const json& request);

    State state() const { return state_; }

private:
    json obs_message(const Observation& obs, double reward, bool terminated, bool truncated, const StepInfo& info);

    SimConfig config_;
    Environment env_;
    State state_ = State::New;
};

struct ServerOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = kDefaultPort;
    /// Connections silent for longer than this are closed. <= 0 disables.
    double idle_timeout = 300.0;
};

/// "host:port", ":port", "port" or "host". Missing parts keep `defaults`.
ServerOptions parse_address(const std::string& address, ServerOptions defaults = {});

/// Default options honoring the port environment variable.
ServerOptions default_server_options();

class BindError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Newline-delimited JSON over TCP, one Session per connection.
class Server {
public:
    Server(SimConfig config, ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and listens. Throws BindError.
    void bind();
    /// Port actually bound (useful with port 0).
    std::uint16_t port() const { return bound_port_; }
    /// Accepts until stop(); then lets connections finish their current request.
    void run();
    /// Only sets an atomic flag; safe from a signal handler.
    void stop() noexcept { stopping_.store(true); }
    bool stopping() const noexcept { return stopping_.load(); }

private:
    void serve_connection(int fd);

    SimConfig config_;
    ServerOptions options_;
    int listen_fd_ = -1;
    std::uint16_t bound_port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex workers_mutex_;
    std::vector<std::thread> workers_;
};

/// Blocking line client, for tests and tooling.
class LineClient {
public:
    LineClient(const std::string& host, std::uint16_t port);
    ~LineClient();
    LineClient(const LineClient&) = delete;
    LineClient& operator=(const LineClient&) = delete;

    void send_line(const std::string& line);
    /// Next response line; nullopt when the server closed the connection.
    std::optional<std::string> read_line();
    json request(const json& message);

private:
    int fd_ = -1;
    std::string buffer_;
};

}  // namespace eboat::net
