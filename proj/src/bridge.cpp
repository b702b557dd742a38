// Copyright 2026 The svqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svqc/bridge.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "svqc/error.hpp"

namespace svqc {

using nlohmann::json;

namespace {

std::string excerpt(const std::string &line) {
    constexpr std::size_t kMax = 200;
    return line.size() <= kMax ? line : line.substr(0, kMax) + "...";
}

std::vector<double> number_array(const json &j, const char *field, const std::string &line) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw BridgeError(std::string("bridge response lacks '") + field + "': " + excerpt(line));
    }
    std::vector<double> out;
    for (const auto &v : j[field]) {
        if (!v.is_number()) {
            throw BridgeError(std::string("non-numeric entry in '") + field + "': " + excerpt(line));
        }
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

BridgeClient::BridgeClient(const std::string &command, std::chrono::milliseconds handshake_timeout,
                           std::chrono::milliseconds request_timeout)
    : request_timeout_(request_timeout) {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
        throw BridgeError(std::string("socketpair failed: ") + std::strerror(errno));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
        ::close(sv[0]);
        ::close(sv[1]);
        throw BridgeError(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
        ::dup2(sv[1], STDIN_FILENO);
        ::dup2(sv[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
        ::_exit(127);
    }
    ::close(sv[1]);
    fd_ = sv[0];

    try {
        const auto line = roundtrip(R"({"cmd":"hello"})", handshake_timeout);
        const auto j = json::parse(line);
        if (!j.contains("version") || !j["version"].is_number_integer()) {
            throw BridgeError("hello response has no protocol version: " + excerpt(line));
        }
        version_ = j["version"].get<int>();
        if (version_ != kBridgeProtocolVersion) {
            throw BridgeError("bridge speaks protocol version " + std::to_string(version_) + ", expected " +
                              std::to_string(kBridgeProtocolVersion));
        }
    } catch (...) {
        shutdown_child();
        throw;
    }
}

BridgeClient::~BridgeClient() {
    try {
        close();
    } catch (...) {
    }
    shutdown_child();
}

void BridgeClient::shutdown_child() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
    if (pid_ > 0) {
        int status = 0;
        // EOF on stdin is the polite request; escalate if it is ignored.
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(pid_, &status, WNOHANG) == pid_) {
                pid_ = -1;
                return;
            }
            ::usleep(10000);
        }
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

void BridgeClient::write_all(const std::string &data) {
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw BridgeError(std::string("write to bridge failed: ") + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string BridgeClient::read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
        const auto nl = pending_.find('\n');
        if (nl != std::string::npos) {
            std::string line = pending_.substr(0, nl);
            pending_.erase(0, nl + 1);
            return line;
        }
        const auto left =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            throw BridgeError("bridge did not answer within " + std::to_string(timeout.count()) + " ms");
        }
        pollfd p{fd_, POLLIN, 0};
        const int r = ::poll(&p, 1, static_cast<int>(left.count()));
        if (r < 0 && errno == EINTR) {
            continue;
        }
        if (r < 0) {
            throw BridgeError(std::string("poll on bridge failed: ") + std::strerror(errno));
        }
        if (r == 0) {
            continue;
        }
        char buf[4096];
        const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            throw BridgeError("bridge closed its output" +
                              (pending_.empty() ? std::string() : ": " + excerpt(pending_)));
        }
        pending_.append(buf, static_cast<std::size_t>(n));
    }
}

std::string BridgeClient::roundtrip(const std::string &payload, std::chrono::milliseconds timeout) {
    if (fd_ < 0 || closed_) {
        throw UsageError("bridge connection is closed");
    }
    json req = json::parse(payload);
    if (!req.is_object()) {
        throw ConfigError("bridge request must be a JSON object");
    }
    const std::uint64_t seq = ++seq_;
    req["seq"] = seq;
    write_all(req.dump() + "\n");

    const std::string line = read_line(timeout);
    json resp;
    try {
        resp = json::parse(line);
    } catch (const json::exception &) {
        throw BridgeError("bridge sent a malformed line: " + excerpt(line));
    }
    if (!resp.is_object() || !resp.contains("seq") || !resp["seq"].is_number_unsigned()) {
        throw BridgeError("bridge response has no sequence number: " + excerpt(line));
    }
    if (resp["seq"].get<std::uint64_t>() != seq) {
        throw BridgeError("bridge answered out of order (expected seq " + std::to_string(seq) +
                          "): " + excerpt(line));
    }
    if (!resp.contains("ok") || !resp["ok"].is_boolean()) {
        throw BridgeError("bridge response has no ok flag: " + excerpt(line));
    }
    if (!resp["ok"].get<bool>()) {
        const std::string err = resp.contains("error") && resp["error"].is_string()
                                    ? resp["error"].get<std::string>()
                                    : std::string("unspecified error");
        throw BridgeError("bridge rejected '" + req.value("cmd", std::string("?")) + "': " + err);
    }
    return line;
}

std::string BridgeClient::raw_request(const std::string &json_object) {
    return roundtrip(json_object, request_timeout_);
}

std::pair<std::size_t, std::size_t> BridgeClient::spec(const std::string &env_id) {
    const auto line = roundtrip(json{{"cmd", "spec"}, {"env", env_id}}.dump(), request_timeout_);
    const auto j = json::parse(line);
    if (!j.contains("obs_dim") || !j.contains("n_actions") || !j["obs_dim"].is_number_unsigned() ||
        !j["n_actions"].is_number_unsigned()) {
        throw BridgeError("spec response lacks obs_dim/n_actions: " + excerpt(line));
    }
    return {j["obs_dim"].get<std::size_t>(), j["n_actions"].get<std::size_t>()};
}

std::vector<double> BridgeClient::reset(const std::string &env_id, std::uint64_t seed) {
    const auto line = roundtrip(json{{"cmd", "reset"}, {"env", env_id}, {"seed", seed}}.dump(), request_timeout_);
    return number_array(json::parse(line), "observation", line);
}

BridgeStep BridgeClient::step(std::size_t action) {
    const auto line = roundtrip(json{{"cmd", "step"}, {"action", action}}.dump(), request_timeout_);
    const auto j = json::parse(line);
    BridgeStep out;
    out.observation = number_array(j, "observation", line);
    if (!j.contains("reward") || !j["reward"].is_number() || !j.contains("done") || !j["done"].is_boolean()) {
        throw BridgeError("step response lacks reward/done: " + excerpt(line));
    }
    out.reward = j["reward"].get<double>();
    out.done = j["done"].get<bool>();
    if (j.contains("state")) {
        out.state = number_array(j, "state", line);
    }
    return out;
}

void BridgeClient::inject_state(std::span<const double> raw) {
    json state = json::array();
    for (double v : raw) {
        state.push_back(v);
    }
    roundtrip(json{{"cmd", "inject_state"}, {"state", state}}.dump(), request_timeout_);
}

void BridgeClient::close() {
    if (closed_ || fd_ < 0) {
        return;
    }
    try {
        roundtrip(R"({"cmd":"close"})", std::chrono::seconds(2));
    } catch (...) {
        closed_ = true;
        throw;
    }
    closed_ = true;
}

// ---------------------------------------------------------------------------

BridgeEnv::BridgeEnv(std::shared_ptr<BridgeClient> client, const EnvSpec &spec)
    : client_(std::move(client)), spec_(spec) {
    const auto [d, k] = client_->spec(spec_.remote_id());
    if (d != spec_.obs_dim || k != spec_.n_actions) {
        throw ConfigError("bridge reports " + spec_.remote_id() + " as (" + std::to_string(d) + ", " +
                          std::to_string(k) + "), expected (" + std::to_string(spec_.obs_dim) + ", " +
                          std::to_string(spec_.n_actions) + ")");
    }
}

std::vector<double> BridgeEnv::reset(std::uint64_t seed) {
    obs_ = client_->reset(spec_.remote_id(), seed);
    raw_.clear();
    steps_ = 0;
    done_ = false;
    return obs_;
}

StepResult BridgeEnv::step(std::size_t action) {
    if (done_) {
        throw UsageError("step called on a finished episode");
    }
    if (action >= spec_.n_actions) {
        throw InvalidInputError("action " + std::to_string(action) + " outside [0, " +
                                std::to_string(spec_.n_actions) + ")");
    }
    auto s = client_->step(action);
    ++steps_;
    obs_ = s.observation;
    raw_ = std::move(s.state);
    done_ = s.done || steps_ >= spec_.max_steps;
    return {std::move(s.observation), s.reward, done_};
}

void BridgeEnv::inject_state(std::span<const double> raw) {
    client_->inject_state(raw);
    raw_.assign(raw.begin(), raw.end());
    done_ = false;
}

} // namespace svqc
