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

// Native control environments with the termination and reward semantics of
// the reference classic-control suite.

#ifndef SVQC_ENV_HPP
#define SVQC_ENV_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svqc/quantum.hpp"

namespace svqc {

struct EnvSpec {
    std::string id;
    std::size_t obs_dim = 0;
    std::size_t n_actions = 0;
    int max_steps = 0;
    double solve_threshold = 0.0;
    std::size_t solve_window = 100;

    /// Known ids: cartpole-v0, cartpole-v1, acrobot-v1, bandit and
    /// bridge:<remote id>. ConfigError for anything else.
    static EnvSpec lookup(std::string_view id);
    bool is_bridge() const { return id.starts_with("bridge:"); }
    std::string remote_id() const { return is_bridge() ? id.substr(7) : id; }
};

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;
};

class Environment {
  public:
    virtual ~Environment() = default;

    virtual const EnvSpec &spec() const = 0;
    virtual std::vector<double> reset(std::uint64_t seed) = 0;
    /// UsageError after done; InvalidInputError for an action outside [0, k).
    virtual StepResult step(std::size_t action) = 0;
    /// Overwrites the internal physics state (for oracle cross-checks). The
    /// step counter is left alone.
    virtual void inject_state(std::span<const double> raw) = 0;
    virtual std::vector<double> raw_state() const = 0;
    virtual std::vector<double> observation() const = 0;
    virtual int steps() const = 0;
    virtual bool done() const = 0;
};

class CartPole final : public Environment {
  public:
    /// version 0 (200-step limit) or 1 (500-step limit).
    explicit CartPole(int version = 1);

    static constexpr double kGravity = 9.8;
    static constexpr double kCartMass = 1.0;
    static constexpr double kPoleMass = 0.1;
    static constexpr double kTotalMass = kCartMass + kPoleMass;
    static constexpr double kHalfLength = 0.5;
    static constexpr double kPoleMassLength = kPoleMass * kHalfLength;
    static constexpr double kForce = 10.0;
    static constexpr double kTau = 0.02;
    static constexpr double kThetaLimit = 12.0 * 2.0 * 3.141592653589793 / 360.0;
    static constexpr double kXLimit = 2.4;

    const EnvSpec &spec() const override { return spec_; }
    std::vector<double> reset(std::uint64_t seed) override;
    StepResult step(std::size_t action) override;
    void inject_state(std::span<const double> raw) override;
    std::vector<double> raw_state() const override { return {state_.begin(), state_.end()}; }
    std::vector<double> observation() const override { return raw_state(); }
    int steps() const override { return steps_; }
    bool done() const override { return done_; }

  private:
    EnvSpec spec_;
    std::array<double, 4> state_{}; // x, x_dot, theta, theta_dot
    int steps_ = 0;
    bool done_ = false;
};

class Acrobot final : public Environment {
  public:
    Acrobot();

    static constexpr double kDt = 0.2;
    static constexpr double kLinkLength1 = 1.0;
    static constexpr double kLinkMass1 = 1.0;
    static constexpr double kLinkMass2 = 1.0;
    static constexpr double kLinkCom1 = 0.5;
    static constexpr double kLinkCom2 = 0.5;
    static constexpr double kLinkMoi = 1.0;
    static constexpr double kMaxVel1 = 4.0 * 3.141592653589793;
    static constexpr double kMaxVel2 = 9.0 * 3.141592653589793;

    const EnvSpec &spec() const override { return spec_; }
    std::vector<double> reset(std::uint64_t seed) override;
    StepResult step(std::size_t action) override;
    /// raw = (theta1, theta2, dtheta1, dtheta2).
    void inject_state(std::span<const double> raw) override;
    std::vector<double> raw_state() const override { return {state_.begin(), state_.end()}; }
    std::vector<double> observation() const override;
    int steps() const override { return steps_; }
    bool done() const override { return done_; }

    /// Time derivative of (theta1, theta2, dtheta1, dtheta2) under `torque`.
    static std::array<double, 4> derivatives(const std::array<double, 4> &s, double torque);
    bool at_goal() const;

  private:
    EnvSpec spec_;
    std::array<double, 4> state_{};
    int steps_ = 0;
    bool done_ = false;
};

/// Stateless two-armed bandit: arm 0 pays 1, arm 1 pays 0, constant
/// observation, fixed episode length.
class Bandit final : public Environment {
  public:
    explicit Bandit(int episode_length = 10);

    const EnvSpec &spec() const override { return spec_; }
    std::vector<double> reset(std::uint64_t seed) override;
    StepResult step(std::size_t action) override;
    void inject_state(std::span<const double> raw) override;
    std::vector<double> raw_state() const override { return {0.0}; }
    std::vector<double> observation() const override { return {0.0}; }
    int steps() const override { return steps_; }
    bool done() const override { return done_; }

  private:
    EnvSpec spec_;
    int steps_ = 0;
    bool done_ = false;
};

/// Native environment for a non-bridge id; ConfigError otherwise.
std::unique_ptr<Environment> make_native_env(std::string_view id);

/// Mean of rewards[start, start + window).
double window_mean(std::span<const double> rewards, std::size_t start, std::size_t window);

/// Mean over the last min(window, size) rewards; 0 for an empty series.
double trailing_mean(std::span<const double> rewards, std::size_t window);

/// Number of episodes after which a full solve window first meets the
/// threshold (inclusive); nullopt when never.
std::optional<std::size_t> episodes_to_solve(std::span<const double> rewards, const EnvSpec &spec);

bool is_solved(std::span<const double> rewards, const EnvSpec &spec);

} // namespace svqc

#endif
