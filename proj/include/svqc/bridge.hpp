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

#ifndef SVQC_BRIDGE_HPP
#define SVQC_BRIDGE_HPP

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <sys/types.h>
#include <vector>

#include "svqc/env.hpp"

namespace svqc {

inline constexpr int kBridgeProtocolVersion = 1;

struct BridgeStep {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;
    std::vector<double> state; // raw physics state, when the bridge reports it
};

/// Client side of the line protocol spoken by an environment subprocess.
///
/// Requests and responses are one JSON object per line. Every request carries
/// a sequence number that the response must echo; anything else is a
/// protocol violation and raises BridgeError quoting the offending line.
class BridgeClient {
  public:
    /// Spawns `/bin/sh -c command` and completes the hello handshake.
    explicit BridgeClient(const std::string &command,
                          std::chrono::milliseconds handshake_timeout = std::chrono::seconds(10),
                          std::chrono::milliseconds request_timeout = std::chrono::seconds(60));
    ~BridgeClient();

    BridgeClient(const BridgeClient &) = delete;
    BridgeClient &operator=(const BridgeClient &) = delete;

    int protocol_version() const { return version_; }
    std::uint64_t requests() const { return seq_; }

    /// (obs_dim, n_actions) as reported by the remote.
    std::pair<std::size_t, std::size_t> spec(const std::string &env_id);
    std::vector<double> reset(const std::string &env_id, std::uint64_t seed);
    BridgeStep step(std::size_t action);
    void inject_state(std::span<const double> raw);
    void close();

    /// Sends an arbitrary request line (seq is added) and returns the raw
    /// response line after validating it. Intended for conformance tests.
    std::string raw_request(const std::string &json_object);

  private:
    std::string roundtrip(const std::string &payload, std::chrono::milliseconds timeout);
    std::string read_line(std::chrono::milliseconds timeout);
    void write_all(const std::string &data);
    void shutdown_child();

    int fd_ = -1;
    pid_t pid_ = -1;
    std::uint64_t seq_ = 0;
    int version_ = 0;
    std::string pending_;
    std::chrono::milliseconds request_timeout_;
    bool closed_ = false;
};

/// Environment backed by a bridge subprocess.
class BridgeEnv final : public Environment {
  public:
    BridgeEnv(std::shared_ptr<BridgeClient> client, const EnvSpec &spec);

    const EnvSpec &spec() const override { return spec_; }
    std::vector<double> reset(std::uint64_t seed) override;
    StepResult step(std::size_t action) override;
    void inject_state(std::span<const double> raw) override;
    std::vector<double> raw_state() const override { return raw_; }
    std::vector<double> observation() const override { return obs_; }
    int steps() const override { return steps_; }
    bool done() const override { return done_; }

    /// Raw state reported by the last step, empty if the remote does not send it.
    const std::vector<double> &last_state() const { return raw_; }

  private:
    std::shared_ptr<BridgeClient> client_;
    EnvSpec spec_;
    std::vector<double> obs_;
    std::vector<double> raw_;
    int steps_ = 0;
    bool done_ = false;
};

} // namespace svqc

#endif
