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

#include <gtest/gtest.h>

#include <cmath>

#include "svqc/error.hpp"
#include "svqc/xcheck.hpp"

using namespace svqc;

namespace {

std::string fixture(const char *name) { return std::string(SVQC_FIXTURE_DIR) + "/" + name; }

} // namespace

TEST(EnvSpec, Dimensions) {
    EXPECT_EQ(EnvSpec::lookup("cartpole-v1").obs_dim, 4u);
    EXPECT_EQ(EnvSpec::lookup("cartpole-v1").n_actions, 2u);
    EXPECT_EQ(EnvSpec::lookup("acrobot-v1").obs_dim, 6u);
    EXPECT_EQ(EnvSpec::lookup("acrobot-v1").n_actions, 3u);
    const auto ll = EnvSpec::lookup("bridge:LunarLander-v2");
    EXPECT_EQ(ll.obs_dim, 8u);
    EXPECT_EQ(ll.n_actions, 4u);
    EXPECT_EQ(ll.remote_id(), "LunarLander-v2");
    EXPECT_THROW(EnvSpec::lookup("mountaincar-v0"), ConfigError);
}

TEST(CartPoleEnv, ResetIsSeededAndBounded) {
    CartPole a(1), b(1);
    EXPECT_EQ(a.reset(42), b.reset(42));
    EXPECT_NE(a.reset(42), a.reset(43));
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        for (double v : a.reset(seed)) {
            ASSERT_GE(v, -0.05);
            ASSERT_LE(v, 0.05);
        }
        ASSERT_EQ(a.steps(), 0);
    }
}

TEST(CartPoleEnv, StepAfterDoneAndBadAction) {
    CartPole env(1);
    env.reset(0);
    EXPECT_THROW(env.step(2), InvalidInputError);
    while (!env.step(1).done) {
    }
    EXPECT_THROW(env.step(0), UsageError);
}

TEST(CartPoleEnv, StepLimits) {
    for (int version : {0, 1}) {
        CartPole env(version);
        env.reset(0);
        int n = 0;
        bool done = false;
        while (!done) {
            // Keep the pole upright by re-injecting rest before each step.
            env.inject_state(std::vector<double>{0, 0, 0, 0});
            done = env.step(n % 2).done;
            ++n;
        }
        EXPECT_EQ(n, version == 0 ? 200 : 500);
    }
}

TEST(CartPoleEnv, PushFromRestMatchesReference) {
    const auto trace = load_trace(fixture("cartpole-v1-push.jsonl"));
    CartPole env(1);
    env.reset(0);
    env.inject_state(std::vector<double>{0, 0, 0, 0});
    std::size_t i = 0;
    StepResult r;
    do {
        r = env.step(1);
        const auto &ref = trace.steps.at(i);
        for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(r.observation[c], ref.next_state[c], 1e-12);
        EXPECT_EQ(r.done, ref.done);
        ++i;
    } while (!r.done && i < 50);
    EXPECT_TRUE(r.done);
    EXPECT_EQ(i, trace.steps.size());
}

TEST(CartPoleEnv, RecordedTraceAgrees) {
    const auto trace = load_trace(fixture("cartpole-v1.jsonl"));
    ASSERT_EQ(trace.steps.size(), 1000u);
    CartPole env(1);
    const auto r = xcheck_trace(trace, env);
    EXPECT_TRUE(r.passed()) << r.summary();
    EXPECT_LT(r.max_deviation(), 1e-12) << r.summary();
}

TEST(CartPoleEnv, ObservationBoundsUnderRandomPlay) {
    CartPole env(1);
    Rng rng(3);
    std::bernoulli_distribution coin(0.5);
    std::uint64_t seed = 0;
    env.reset(seed);
    for (int i = 0; i < 200000; ++i) {
        const auto r = env.step(coin(rng));
        // One Euler step past the termination bound stays inside the observation box.
        ASSERT_LE(std::abs(r.observation[0]), 4.8);
        ASSERT_LE(std::abs(r.observation[2]), 0.418);
        if (r.done) env.reset(++seed);
    }
}

TEST(AcrobotEnv, ResetOnUnitCircle) {
    Acrobot env;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto o = env.reset(seed);
        ASSERT_NEAR(o[0] * o[0] + o[1] * o[1], 1.0, 1e-12);
        ASSERT_NEAR(o[2] * o[2] + o[3] * o[3], 1.0, 1e-12);
        for (double v : env.raw_state()) {
            ASSERT_LE(std::abs(v), 0.1);
        }
    }
}

TEST(AcrobotEnv, ZeroTorqueNeverReachesGoal) {
    Acrobot env;
    env.reset(5);
    double total = 0.0;
    int steps = 0;
    StepResult r;
    do {
        r = env.step(1);
        total += r.reward;
        ++steps;
    } while (!r.done);
    EXPECT_EQ(steps, 500);
    EXPECT_EQ(total, -500.0);
}

TEST(AcrobotEnv, RecordedTraceAgrees) {
    const auto trace = load_trace(fixture("acrobot-v1.jsonl"));
    ASSERT_EQ(trace.steps.size(), 1000u);
    Acrobot env;
    const auto r = xcheck_trace(trace, env);
    EXPECT_TRUE(r.passed()) << r.summary();
}

TEST(AcrobotEnv, BoundsUnderRandomPlay) {
    Acrobot env;
    Rng rng(4);
    std::uniform_int_distribution<std::size_t> act(0, 2);
    std::uint64_t seed = 0;
    env.reset(seed);
    for (int i = 0; i < 100000; ++i) {
        const auto o = env.step(act(rng)).observation;
        ASSERT_NEAR(o[0] * o[0] + o[1] * o[1], 1.0, 1e-9);
        ASSERT_NEAR(o[2] * o[2] + o[3] * o[3], 1.0, 1e-9);
        ASSERT_LE(std::abs(o[4]), 4 * M_PI);
        ASSERT_LE(std::abs(o[5]), 9 * M_PI);
        if (env.done()) env.reset(++seed);
    }
}

TEST(AcrobotEnv, DeterministicTrajectories) {
    Acrobot a, b;
    a.reset(9);
    b.reset(9);
    for (int i = 0; i < 300 && !a.done(); ++i) {
        ASSERT_EQ(a.step(i % 3).observation, b.step(i % 3).observation);
    }
}

TEST(SolveMetric, Windows) {
    const auto spec = EnvSpec::lookup("cartpole-v1");
    EXPECT_TRUE(is_solved(std::vector<double>(100, 500.0), spec));
    EXPECT_FALSE(is_solved(std::vector<double>(99, 500.0), spec));
    std::vector<double> alt;
    for (int i = 0; i < 100; ++i) alt.push_back(i % 2 ? 550.0 : 400.0);
    EXPECT_TRUE(is_solved(alt, spec));
    EXPECT_EQ(episodes_to_solve(alt, spec), 100u);
    std::vector<double> late(50, 0.0);
    late.insert(late.end(), 100, 500.0);
    // The window ending at episode 145 holds five zeros: mean exactly 475.
    EXPECT_EQ(episodes_to_solve(late, spec), 145u);
}

TEST(SolveMetric, TrailingMean) {
    const std::vector<double> r{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(trailing_mean(r, 2), 3.5);
    EXPECT_DOUBLE_EQ(trailing_mean(r, 20), 2.5);
}

TEST(Trace, MissingFileIsIoError) { EXPECT_THROW(load_trace("/nonexistent/trace.jsonl"), IoError); }

TEST(Trace, WrongEnvironmentIsConfigError) {
    const auto trace = load_trace(fixture("cartpole-v1.jsonl"));
    Acrobot env;
    EXPECT_THROW(xcheck_trace(trace, env), ConfigError);
}
