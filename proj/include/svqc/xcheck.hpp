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

#ifndef SVQC_XCHECK_HPP
#define SVQC_XCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "svqc/bridge.hpp"
#include "svqc/env.hpp"

namespace svqc {

/// One recorded reference step: the injected physics state, the action, and
/// what the reference environment returned.
struct TraceStep {
    bool episode_start = false;
    std::vector<double> state;
    std::size_t action = 0;
    std::vector<double> observation; // as emitted by the reference (may be float32-rounded)
    std::vector<double> next_state;
    double reward = 0.0;
    bool done = false;
};

struct Trace {
    std::string env; // reference id, e.g. CartPole-v1
    std::vector<TraceStep> steps;
};

/// Reads a JSON-lines trace: a header object, then one object per step.
Trace load_trace(const std::string &path);

/// Maps a reference id (CartPole-v1, Acrobot-v1) to the native id.
std::string native_id_for(const std::string &reference_id);

struct XcheckReport {
    std::string env;
    std::size_t steps = 0;
    double max_state_deviation = 0.0;       // raw physics state
    double max_observation_deviation = 0.0; // observation vs. one built from the reference state
    std::size_t reward_mismatches = 0;
    std::size_t done_mismatches = 0;
    std::string first_problem;

    double max_deviation() const;
    bool passed(double tolerance = 1e-6) const;
    std::string summary() const;
};

/// Replays a recorded trace through a native environment with state injection.
XcheckReport xcheck_trace(const Trace &trace, Environment &native, std::size_t max_steps = SIZE_MAX);

/// Drives a native and a bridge environment side by side with injected
/// identical states and identical seeded random actions.
XcheckReport xcheck_bridge(const std::string &env_id, std::size_t steps, BridgeClient &bridge,
                           std::uint64_t seed = 0);

} // namespace svqc

#endif
