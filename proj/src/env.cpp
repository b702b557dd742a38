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

#include "svqc/env.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "svqc/error.hpp"

namespace svqc {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void check_action(const EnvSpec &spec, std::size_t action, bool done) {
    if (done) {
        throw UsageError(spec.id + ": step called after the episode ended");
    }
    if (action >= spec.n_actions) {
        throw InvalidInputError(spec.id + ": action " + std::to_string(action) + " outside [0, " +
                                std::to_string(spec.n_actions) + ")");
    }
}

} // namespace

EnvSpec EnvSpec::lookup(std::string_view id) {
    const std::string key = lower(id);
    if (key == "cartpole-v0") {
        return {"cartpole-v0", 4, 2, 200, 195.0, 100};
    }
    if (key == "cartpole-v1") {
        return {"cartpole-v1", 4, 2, 500, 475.0, 100};
    }
    if (key == "acrobot-v1") {
        // No official solve condition; trailing-20 mean >= -100 is the proxy.
        return {"acrobot-v1", 6, 3, 500, -100.0, 20};
    }
    if (key == "bandit") {
        return {"bandit", 1, 2, 10, 9.5, 20};
    }
    if (key.starts_with("bridge:")) {
        const std::string remote = key.substr(7);
        EnvSpec spec;
        if (remote.starts_with("lunarlander")) {
            spec = {"", 8, 4, 1000, 200.0, 100};
        } else if (remote.starts_with("cartpole")) {
            spec = lookup(remote);
        } else if (remote.starts_with("acrobot")) {
            spec = lookup(remote);
        } else {
            throw ConfigError("unknown bridge environment '" + std::string(id) + "'");
        }
        spec.id = std::string("bridge:") + std::string(id.substr(7));
        return spec;
    }
    throw ConfigError("unknown environment id '" + std::string(id) + "'");
}

// ---------------------------------------------------------------------------
// CartPole

CartPole::CartPole(int version) {
    if (version != 0 && version != 1) {
        throw ConfigError("CartPole version must be 0 or 1");
    }
    spec_ = EnvSpec::lookup(version == 0 ? "cartpole-v0" : "cartpole-v1");
}

std::vector<double> CartPole::reset(std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (auto &s : state_) {
        s = u(rng);
    }
    steps_ = 0;
    done_ = false;
    return raw_state();
}

StepResult CartPole::step(std::size_t action) {
    check_action(spec_, action, done_);
    auto [x, x_dot, theta, theta_dot] = state_;
    const double force = action == 1 ? kForce : -kForce;
    const double costheta = std::cos(theta);
    const double sintheta = std::sin(theta);

    const double temp = (force + kPoleMassLength * (theta_dot * theta_dot) * sintheta) / kTotalMass;
    const double thetaacc = (kGravity * sintheta - costheta * temp) /
                            (kHalfLength * (4.0 / 3.0 - kPoleMass * (costheta * costheta) / kTotalMass));
    const double xacc = temp - kPoleMassLength * thetaacc * costheta / kTotalMass;

    // Explicit Euler, position updated from the old velocity.
    x = x + kTau * x_dot;
    x_dot = x_dot + kTau * xacc;
    theta = theta + kTau * theta_dot;
    theta_dot = theta_dot + kTau * thetaacc;
    state_ = {x, x_dot, theta, theta_dot};
    ++steps_;

    const bool terminated = x < -kXLimit || x > kXLimit || theta < -kThetaLimit || theta > kThetaLimit;
    done_ = terminated || steps_ >= spec_.max_steps;
    return {raw_state(), 1.0, done_};
}

void CartPole::inject_state(std::span<const double> raw) {
    if (raw.size() != 4) {
        throw ConfigError("CartPole state has 4 components");
    }
    std::copy(raw.begin(), raw.end(), state_.begin());
    done_ = false;
}

// ---------------------------------------------------------------------------
// Acrobot

namespace {

double wrap(double x, double lo, double hi) {
    const double diff = hi - lo;
    while (x > hi) {
        x = x - diff;
    }
    while (x < lo) {
        x = x + diff;
    }
    return x;
}

double bound(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

constexpr std::array<double, 3> kTorques{-1.0, 0.0, 1.0};

} // namespace

Acrobot::Acrobot() : spec_(EnvSpec::lookup("acrobot-v1")) {}

std::vector<double> Acrobot::reset(std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (auto &s : state_) {
        s = u(rng);
    }
    steps_ = 0;
    done_ = false;
    return observation();
}

std::vector<double> Acrobot::observation() const {
    return {std::cos(state_[0]), std::sin(state_[0]), std::cos(state_[1]),
            std::sin(state_[1]), state_[2],           state_[3]};
}

std::array<double, 4> Acrobot::derivatives(const std::array<double, 4> &s, double torque) {
    constexpr double m1 = kLinkMass1;
    constexpr double m2 = kLinkMass2;
    constexpr double l1 = kLinkLength1;
    constexpr double lc1 = kLinkCom1;
    constexpr double lc2 = kLinkCom2;
    constexpr double I1 = kLinkMoi;
    constexpr double I2 = kLinkMoi;
    constexpr double g = 9.8;
    constexpr double pi = std::numbers::pi;
    const double theta1 = s[0];
    const double theta2 = s[1];
    const double dtheta1 = s[2];
    const double dtheta2 = s[3];

    // Same operation order as the reference so results agree to rounding.
    const double d1 = m1 * (lc1 * lc1) + m2 * ((l1 * l1) + (lc2 * lc2) + 2 * l1 * lc2 * std::cos(theta2)) + I1 + I2;
    const double d2 = m2 * ((lc2 * lc2) + l1 * lc2 * std::cos(theta2)) + I2;
    const double phi2 = m2 * lc2 * g * std::cos(theta1 + theta2 - pi / 2.0);
    const double phi1 = -m2 * l1 * lc2 * (dtheta2 * dtheta2) * std::sin(theta2) -
                        2 * m2 * l1 * lc2 * dtheta2 * dtheta1 * std::sin(theta2) +
                        (m1 * lc1 + m2 * l1) * g * std::cos(theta1 - pi / 2) + phi2;
    const double ddtheta2 = (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * (dtheta1 * dtheta1) * std::sin(theta2) - phi2) /
                            (m2 * (lc2 * lc2) + I2 - (d2 * d2) / d1);
    const double ddtheta1 = -(d2 * ddtheta2 + phi1) / d1;
    return {dtheta1, dtheta2, ddtheta1, ddtheta2};
}

StepResult Acrobot::step(std::size_t action) {
    check_action(spec_, action, done_);
    const double torque = kTorques[action];

    // One classical RK4 step over [0, dt].
    const double dt = kDt;
    const double dt2 = dt / 2.0;
    const auto &y0 = state_;
    auto axpy = [](const std::array<double, 4> &y, double h, const std::array<double, 4> &k) {
        return std::array<double, 4>{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
    };
    const auto k1 = derivatives(y0, torque);
    const auto k2 = derivatives(axpy(y0, dt2, k1), torque);
    const auto k3 = derivatives(axpy(y0, dt2, k2), torque);
    const auto k4 = derivatives(axpy(y0, dt, k3), torque);
    std::array<double, 4> ns{};
    for (std::size_t i = 0; i < 4; ++i) {
        ns[i] = y0[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    constexpr double pi = std::numbers::pi;
    ns[0] = wrap(ns[0], -pi, pi);
    ns[1] = wrap(ns[1], -pi, pi);
    ns[2] = bound(ns[2], -kMaxVel1, kMaxVel1);
    ns[3] = bound(ns[3], -kMaxVel2, kMaxVel2);
    state_ = ns;
    ++steps_;

    const bool terminated = at_goal();
    done_ = terminated || steps_ >= spec_.max_steps;
    // The reference pays 0 on the step that reaches the goal.
    return {observation(), terminated ? 0.0 : -1.0, done_};
}

bool Acrobot::at_goal() const { return -std::cos(state_[0]) - std::cos(state_[1] + state_[0]) > 1.0; }

void Acrobot::inject_state(std::span<const double> raw) {
    if (raw.size() != 4) {
        throw ConfigError("Acrobot state has 4 components");
    }
    std::copy(raw.begin(), raw.end(), state_.begin());
    done_ = false;
}

// ---------------------------------------------------------------------------
// Bandit

Bandit::Bandit(int episode_length) : spec_(EnvSpec::lookup("bandit")) {
    if (episode_length < 1) {
        throw ConfigError("bandit episode length must be >= 1");
    }
    spec_.max_steps = episode_length;
    spec_.solve_threshold = 0.95 * episode_length;
}

std::vector<double> Bandit::reset(std::uint64_t) {
    steps_ = 0;
    done_ = false;
    return observation();
}

StepResult Bandit::step(std::size_t action) {
    check_action(spec_, action, done_);
    ++steps_;
    done_ = steps_ >= spec_.max_steps;
    return {observation(), action == 0 ? 1.0 : 0.0, done_};
}

void Bandit::inject_state(std::span<const double>) { done_ = false; }

// ---------------------------------------------------------------------------

std::unique_ptr<Environment> make_native_env(std::string_view id) {
    const EnvSpec spec = EnvSpec::lookup(id);
    if (spec.id == "cartpole-v0") {
        return std::make_unique<CartPole>(0);
    }
    if (spec.id == "cartpole-v1") {
        return std::make_unique<CartPole>(1);
    }
    if (spec.id == "acrobot-v1") {
        return std::make_unique<Acrobot>();
    }
    if (spec.id == "bandit") {
        return std::make_unique<Bandit>();
    }
    throw ConfigError("environment '" + std::string(id) + "' has no native implementation");
}

double window_mean(std::span<const double> rewards, std::size_t start, std::size_t window) {
    double total = 0.0;
    for (std::size_t i = start; i < start + window; ++i) {
        total += rewards[i];
    }
    return total / static_cast<double>(window);
}

double trailing_mean(std::span<const double> rewards, std::size_t window) {
    if (rewards.empty() || window == 0) {
        return 0.0;
    }
    const std::size_t n = std::min(window, rewards.size());
    return window_mean(rewards, rewards.size() - n, n);
}

std::optional<std::size_t> episodes_to_solve(std::span<const double> rewards, const EnvSpec &spec) {
    const std::size_t w = spec.solve_window;
    if (w == 0 || rewards.size() < w) {
        return std::nullopt;
    }
    for (std::size_t start = 0; start + w <= rewards.size(); ++start) {
        if (window_mean(rewards, start, w) >= spec.solve_threshold) {
            return start + w;
        }
    }
    return std::nullopt;
}

bool is_solved(std::span<const double> rewards, const EnvSpec &spec) {
    return episodes_to_solve(rewards, spec).has_value();
}

} // namespace svqc
