#include "eboat/netenv.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>

namespace eboat::net {

namespace {

constexpr std::size_t kMaxLine = 1 << 20;
constexpr int kPollMillis = 100;

json vec_json(const auto& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) {
        a.push_back(v[i]);
    }
    return a;
}

json force_json(const GeneralizedForce& f) {
    return vec_json(f.vector());
}

bool send_all(int fd, const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

}  // namespace

json observation_json(const Observation& obs) {
    json a = json::array();
    for (double v : obs.to_array()) {
        a.push_back(v);
    }
    return a;
}

json info_json(const StepInfo& info, double t) {
    const auto& s = info.state;
    const auto& f = info.forces;
    return {
        {"t", t},
        {"pose",
         {{"x", s.position.x()}, {"y", s.position.y()}, {"z", s.position.z()},
          {"roll", s.roll()}, {"pitch", s.pitch()}, {"yaw", s.yaw()}}},
        {"velocity", vec_json(s.velocity)},
        {"waypoint_index", info.waypoint_index},
        {"wind", {info.wind.x(), info.wind.y()}},
        {"cause", to_string(info.cause)},
        {"command_rejected", info.command_rejected},
        {"forces",
         {{"sail", force_json(f.sail)},
          {"keel", force_json(f.keel)},
          {"rudder", force_json(f.rudder)},
          {"buoyancy", force_json(f.buoyancy)},
          {"damping", force_json(f.damping)},
          {"propeller", force_json(f.propeller)},
          {"gravity", force_json(f.gravity)}}},
    };
}

json spaces_json(const VesselParams& params) {
    json names = json::array();
    for (auto n : Observation::names()) {
        names.push_back(std::string(n));
    }
    const double level = params.propeller.max_level;
    return {
        {"observation", {{"names", names}, {"size", Observation::kSize}}},
        {"action",
         {{"names", {"rudder", "boom", "propeller"}},
          {"low", {-1.0, 0.0, -level}},
          {"high", {1.0, 1.0, level}},
          {"discrete", {false, false, true}}}},
    };
}

json error_json(const std::string& code, const std::string& message) {
    return {{"type", "error"}, {"code", code}, {"message", message}};
}

Action parse_action(const json& value) {
    auto number = [](const json& v) {
        if (!v.is_number()) throw std::invalid_argument("action components must be numbers");
        return v.get<double>();
    };
    if (value.is_array()) {
        if (value.size() != 3) throw std::invalid_argument("action array must have 3 entries");
        return {number(value[0]), number(value[1]), number(value[2])};
    }
    if (value.is_object()) {
        Action a;
        if (value.contains("rudder")) a.rudder = number(value.at("rudder"));
        if (value.contains("boom")) a.boom = number(value.at("boom"));
        if (value.contains("propeller")) a.propeller = number(value.at("propeller"));
        return a;
    }
    throw std::invalid_argument("action must be an array or an object");
}

// ---------------------------------------------------------------------------

Session::Session(SimConfig config) : config_(std::move(config)), env_(config_.episode) {}

Session::Reply Session::handle_line(const std::string& line) {
    json request;
    try {
        request = json::parse(line);
    } catch (const json::parse_error& e) {
        return {error_json("parse", std::string("malformed JSON: ") + e.what()), true};
    }
    if (!request.is_object() || !request.contains("type") || !request.at("type").is_string()) {
        return {error_json("parse", "request must be an object with a string \"type\""), true};
    }
    Reply reply{handle_message(request), false};
    reply.close_connection = state_ == State::Closed;
    return reply;
}

json Session::obs_message(const Observation& obs, double reward, bool terminated, bool truncated,
                          const StepInfo& info) {
    return {
        {"type", "obs"},
        {"observation", observation_json(obs)},
        {"reward", reward},
        {"terminated", terminated},
        {"truncated", truncated},
        {"info", info_json(info, env_.time())},
    };
}

json Session::handle_message(const json& request) {
    if (!request.is_object() || !request.contains("type") || !request.at("type").is_string()) {
        return error_json("parse", "request must be an object with a string \"type\"");
    }
    const std::string type = request.at("type").get<std::string>();

    if (type == "close") {
        state_ = State::Closed;
        return {{"type", "ack"}, {"protocol_version", kProtocolVersion}, {"closed", true}};
    }
    if (state_ == State::Closed) {
        return error_json("state", "session closed");
    }

    if (type == "hello") {
        if (state_ != State::New) {
            return error_json("state", "hello already received");
        }
        if (request.contains("protocol_version")) {
            const auto& v = request.at("protocol_version");
            if (!v.is_string() || v.get<std::string>() != kProtocolVersion) {
                return error_json("version", std::string("server speaks protocol ") + kProtocolVersion +
                                                 ", client asked for " + v.dump());
            }
        }
        state_ = State::Ready;
        return {{"type", "ack"}, {"protocol_version", kProtocolVersion}, {"spaces", spaces_json(config_.episode.vessel)}};
    }

    if (type == "reset") {
        if (state_ == State::New) {
            return error_json("state", "send hello before reset");
        }
        const bool seed_ok = request.contains("seed") && request.at("seed").is_number_integer() &&
                             (request.at("seed").is_number_unsigned() || request.at("seed").get<std::int64_t>() >= 0);
        if (!seed_ok) {
            return error_json("parse", "reset needs a non-negative integer \"seed\"");
        }
        const auto seed = request.at("seed").get<std::uint64_t>();
        std::optional<Mission> mission = config_.mission;
        if (request.contains("mission") && !request.at("mission").is_null()) {
            try {
                mission = parse_mission(request.at("mission"));
            } catch (const ConfigError& e) {
                return error_json("config", e.what());
            }
        }
        const Observation obs = env_.reset(seed, mission);
        state_ = State::Running;
        StepInfo info;
        info.state = env_.state();
        info.waypoint_index = env_.waypoint_index();
        const Vec2 wind = env_.log().records.back().wind;
        info.wind = Vec3(wind.x(), wind.y(), 0.0);
        return obs_message(obs, 0.0, false, false, info);
    }

    if (type == "step") {
        if (state_ == State::New || state_ == State::Ready) {
            return error_json("not_reset", "step before reset");
        }
        if (state_ == State::Finished) {
            return error_json("finished", "episode finished; reset to start a new one");
        }
        if (!request.contains("action")) {
            return error_json("parse", "step needs an \"action\"");
        }
        Action action;
        try {
            action = parse_action(request.at("action"));
        } catch (const std::invalid_argument& e) {
            return error_json("parse", e.what());
        }
        try {
            const StepResult r = env_.step(action);
            if (r.terminated || r.truncated) {
                state_ = State::Finished;
            }
            return obs_message(r.observation, r.reward, r.terminated, r.truncated, r.info);
        } catch (const IntegrationError& e) {
            state_ = State::Finished;
            return error_json("runtime", e.what());
        }
    }

    return error_json("parse", "unknown request type \"" + type + "\"");
}

// ---------------------------------------------------------------------------

ServerOptions parse_address(const std::string& address, ServerOptions defaults) {
    ServerOptions out = defaults;
    if (address.empty()) {
        return out;
    }
    const auto colon = address.rfind(':');
    std::string host = address;
    std::string port;
    if (colon != std::string::npos) {
        host = address.substr(0, colon);
        port = address.substr(colon + 1);
    } else if (address.find_first_not_of("0123456789") == std::string::npos) {
        host.clear();
        port = address;
    }
    if (!host.empty()) {
        out.host = host;
    }
    if (!port.empty()) {
        char* end = nullptr;
        const long p = std::strtol(port.c_str(), &end, 10);
        if (*end != '\0' || p < 0 || p > 65535) {
            throw std::invalid_argument("invalid port in address '" + address + "'");
        }
        out.port = static_cast<std::uint16_t>(p);
    }
    return out;
}

ServerOptions default_server_options() {
    ServerOptions out;
    if (const char* env = std::getenv(kPortEnvVar)) {
        out = parse_address(env, out);
    }
    return out;
}

Server::Server(SimConfig config, ServerOptions options) : config_(std::move(config)), options_(std::move(options)) {}

Server::~Server() {
    stop();
    {
        std::lock_guard lock(workers_mutex_);
        for (auto& t : workers_) {
            if (t.joinable()) t.join();
        }
    }
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
    }
}

void Server::bind() {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string port = std::to_string(options_.port);
    if (int rc = ::getaddrinfo(options_.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
        throw BindError("cannot resolve " + options_.host + ": " + gai_strerror(rc));
    }
    int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) {
        ::freeaddrinfo(res);
        throw BindError(std::string("socket: ") + std::strerror(errno));
    }
    int yes = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    if (::bind(fd, res->ai_addr, res->ai_addrlen) != 0 || ::listen(fd, 64) != 0) {
        const std::string why = std::strerror(errno);
        ::close(fd);
        ::freeaddrinfo(res);
        throw BindError("cannot listen on " + options_.host + ":" + port + ": " + why);
    }
    ::freeaddrinfo(res);
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    bound_port_ = ntohs(addr.sin_port);
    listen_fd_ = fd;
}

void Server::run() {
    if (listen_fd_ < 0) {
        bind();
    }
    while (!stopping_.load()) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, kPollMillis);
        if (ready <= 0) {
            continue;
        }
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            continue;
        }
        int yes = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
        std::lock_guard lock(workers_mutex_);
        workers_.emplace_back([this, fd] { serve_connection(fd); });
    }
    ::close(listen_fd_);
    listen_fd_ = -1;
    std::lock_guard lock(workers_mutex_);
    for (auto& t : workers_) {
        if (t.joinable()) t.join();
    }
    workers_.clear();
}

void Server::serve_connection(int fd) {
    using Clock = std::chrono::steady_clock;
    std::unique_ptr<Session> session;
    try {
        session = std::make_unique<Session>(config_);
    } catch (const std::exception& e) {
        send_all(fd, error_json("config", e.what()).dump() + "\n");
        ::close(fd);
        return;
    }
    std::string buffer;
    auto last_activity = Clock::now();
    char chunk[4096];
    bool open = true;
    while (open) {
        // Answer every complete line already buffered before reading more.
        std::size_t newline;
        while (open && (newline = buffer.find('\n')) != std::string::npos) {
            std::string line = buffer.substr(0, newline);
            buffer.erase(0, newline + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto reply = session->handle_line(line);
            if (!send_all(fd, reply.message.dump() + "\n") || reply.close_connection) {
                open = false;
            }
        }
        if (!open || stopping_.load()) {
            break;
        }
        if (buffer.size() > kMaxLine) {
            send_all(fd, error_json("parse", "line too long").dump() + "\n");
            break;
        }
        pollfd pfd{fd, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, kPollMillis);
        if (ready == 0) {
            const double idle = std::chrono::duration<double>(Clock::now() - last_activity).count();
            if (options_.idle_timeout > 0.0 && idle > options_.idle_timeout) {
                break;
            }
            continue;
        }
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n <= 0) {
            break;
        }
        buffer.append(chunk, static_cast<std::size_t>(n));
        last_activity = Clock::now();
    }
    ::close(fd);
}

// ---------------------------------------------------------------------------

LineClient::LineClient(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string p = std::to_string(port);
    if (::getaddrinfo(host.c_str(), p.c_str(), &hints, &res) != 0) {
        throw std::runtime_error("cannot resolve " + host);
    }
    fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd_ < 0 || ::connect(fd_, res->ai_addr, res->ai_addrlen) != 0) {
        const std::string why = std::strerror(errno);
        ::freeaddrinfo(res);
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
        throw std::runtime_error("cannot connect to " + host + ":" + p + ": " + why);
    }
    ::freeaddrinfo(res);
    int yes = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
}

LineClient::~LineClient() {
    if (fd_ >= 0) ::close(fd_);
}

void LineClient::send_line(const std::string& line) {
    if (!send_all(fd_, line + "\n")) {
        throw std::runtime_error("send failed");
    }
}

std::optional<std::string> LineClient::read_line() {
    char chunk[4096];
    while (true) {
        if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return std::nullopt;
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

json LineClient::request(const json& message) {
    send_line(message.dump());
    auto line = read_line();
    if (!line) {
        throw std::runtime_error("connection closed by server");
    }
    return json::parse(*line);
}

}  // namespace eboat::net
