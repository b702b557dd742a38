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

#include "svqc/xcheck.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "svqc/error.hpp"

namespace svqc {

using nlohmann::json;

namespace {

std::vector<double> doubles(const json &j, const char *field, std::size_t line_no) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw ConfigError("trace line " + std::to_string(line_no) + " lacks '" + field + "'");
    }
    return j[field].get<std::vector<double>>();
}

bool is_acrobot(const std::string &id) { return id.find("acrobot") != std::string::npos; }

/// Observation implied by a raw physics state.
std::vector<double> observation_of(const std::string &native_id, std::span<const double> s) {
    if (is_acrobot(native_id)) {
        return {std::cos(s[0]), std::sin(s[0]), std::cos(s[1]), std::sin(s[1]), s[2], s[3]};
    }
    return {s.begin(), s.end()};
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        return INFINITY;
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

std::vector<double> random_state(const std::string &native_id, Rng &rng) {
    using std::numbers::pi;
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    if (is_acrobot(native_id)) {
        return {u(-pi, pi), u(-pi, pi), u(-4 * pi, 4 * pi), u(-9 * pi, 9 * pi)};
    }
    return {u(-2.3, 2.3), u(-2.0, 2.0), u(-0.2, 0.2), u(-2.5, 2.5)};
}

void note(XcheckReport &r, std::size_t step, const std::string &what) {
    if (r.first_problem.empty()) {
        r.first_problem = "step " + std::to_string(step) + ": " + what;
    }
}

} // namespace

Trace load_trace(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open trace " + path);
    }
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception &e) {
            throw ConfigError("trace line " + std::to_string(line_no) + " is not JSON: " + e.what());
        }
        if (line_no == 1) {
            if (!j.contains("env") || !j["env"].is_string()) {
                throw ConfigError("trace header lacks 'env'");
            }
            trace.env = j["env"].get<std::string>();
            continue;
        }
        TraceStep s;
        s.episode_start = j.value("reset", false);
        s.state = doubles(j, "state", line_no);
        s.action = j.at("action").get<std::size_t>();
        s.observation = doubles(j, "obs", line_no);
        s.next_state = doubles(j, "next_state", line_no);
        s.reward = j.at("reward").get<double>();
        s.done = j.at("done").get<bool>();
        trace.steps.push_back(std::move(s));
    }
    if (trace.env.empty()) {
        throw ConfigError("trace " + path + " is empty");
    }
    return trace;
}

std::string native_id_for(const std::string &reference_id) {
    std::string key = reference_id;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    if (key.starts_with("bridge:")) {
        key = key.substr(7);
    }
    return EnvSpec::lookup(key).id;
}

double XcheckReport::max_deviation() const { return std::max(max_state_deviation, max_observation_deviation); }

bool XcheckReport::passed(double tolerance) const {
    return steps > 0 && max_deviation() < tolerance && reward_mismatches == 0 && done_mismatches == 0;
}

std::string XcheckReport::summary() const {
    std::ostringstream os;
    os.precision(3);
    os << env << ": " << steps << " steps, max |dstate| " << std::scientific << max_state_deviation
       << ", max |dobs| " << max_observation_deviation << ", reward mismatches " << reward_mismatches
       << ", done mismatches " << done_mismatches;
    if (!first_problem.empty()) {
        os << " (first: " << first_problem << ")";
    }
    return os.str();
}

XcheckReport xcheck_trace(const Trace &trace, Environment &native, std::size_t max_steps) {
    const std::string id = native_id_for(trace.env);
    if (id != native.spec().id) {
        throw ConfigError("trace is for " + trace.env + ", environment is " + native.spec().id);
    }
    XcheckReport r;
    r.env = native.spec().id;
    bool started = false;
    for (std::size_t i = 0; i < trace.steps.size() && r.steps < max_steps; ++i) {
        const auto &t = trace.steps[i];
        if (t.episode_start || !started || native.done()) {
            native.reset(0);
            started = true;
        }
        native.inject_state(t.state);
        const auto res = native.step(t.action);
        ++r.steps;
        const auto state = native.raw_state();
        const double ds = max_abs_diff(state, t.next_state);
        const double dobs = max_abs_diff(res.observation, observation_of(id, t.next_state));
        r.max_state_deviation = std::max(r.max_state_deviation, ds);
        r.max_observation_deviation = std::max(r.max_observation_deviation, dobs);
        if (ds >= 1e-6 || dobs >= 1e-6) {
            note(r, i, "state deviates by " + std::to_string(std::max(ds, dobs)));
        }
        if (res.reward != t.reward) {
            ++r.reward_mismatches;
            note(r, i, "reward " + std::to_string(res.reward) + " vs " + std::to_string(t.reward));
        }
        // The native step limit is not part of the reference's termination flag.
        const bool native_terminal = res.done && native.steps() < native.spec().max_steps;
        if (native_terminal != t.done) {
            ++r.done_mismatches;
            note(r, i, std::string("done ") + (res.done ? "true" : "false") + " vs " + (t.done ? "true" : "false"));
        }
    }
    return r;
}

XcheckReport xcheck_bridge(const std::string &env_id, std::size_t steps, BridgeClient &bridge, std::uint64_t seed) {
    const std::string id = native_id_for(env_id);
    auto native = make_native_env(id);
    std::string remote = env_id.starts_with("bridge:") ? env_id.substr(7) : env_id;
    if (remote == id) {
        remote = id == "cartpole-v0" ? "CartPole-v0" : id == "cartpole-v1" ? "CartPole-v1" : "Acrobot-v1";
    }
    const auto [d, k] = bridge.spec(remote);
    if (d != native->spec().obs_dim || k != native->spec().n_actions) {
        throw ConfigError("bridge reports " + remote + " as (" + std::to_string(d) + ", " + std::to_string(k) +
                          "), native " + id + " is (" + std::to_string(native->spec().obs_dim) + ", " +
                          std::to_string(native->spec().n_actions) + ")");
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> action(0, k - 1);
    XcheckReport r;
    r.env = id;
    bool need_reset = true;
    std::uint64_t episode = 0;
    for (std::size_t i = 0; i < steps; ++i) {
        if (need_reset) {
            native->reset(seed + episode);
            bridge.reset(remote, seed + episode);
            ++episode;
            const auto s = random_state(id, rng);
            native->inject_state(s);
            need_reset = false;
        }
        const auto state = native->raw_state();
        bridge.inject_state(state);
        const std::size_t a = action(rng);
        const auto mine = native->step(a);
        const auto theirs = bridge.step(a);
        ++r.steps;
        if (!theirs.state.empty()) {
            const double ds = max_abs_diff(native->raw_state(), theirs.state);
            const double dobs = max_abs_diff(mine.observation, observation_of(id, theirs.state));
            r.max_state_deviation = std::max(r.max_state_deviation, ds);
            r.max_observation_deviation = std::max(r.max_observation_deviation, dobs);
            if (std::max(ds, dobs) >= 1e-6) {
                note(r, i, "state deviates by " + std::to_string(std::max(ds, dobs)));
            }
        } else {
            const double dobs = max_abs_diff(mine.observation, theirs.observation);
            r.max_observation_deviation = std::max(r.max_observation_deviation, dobs);
            if (dobs >= 1e-6) {
                note(r, i, "observation deviates by " + std::to_string(dobs));
            }
        }
        if (mine.reward != theirs.reward) {
            ++r.reward_mismatches;
            note(r, i, "reward " + std::to_string(mine.reward) + " vs " + std::to_string(theirs.reward));
        }
        const bool native_terminal = mine.done && native->steps() < native->spec().max_steps;
        if (native_terminal != theirs.done) {
            ++r.done_mismatches;
            note(r, i, "done flags differ");
        }
        need_reset = mine.done || theirs.done;
    }
    return r;
}

} // namespace svqc
