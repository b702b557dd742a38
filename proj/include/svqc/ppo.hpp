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

// Actor-critic PPO with a clipped surrogate, full-batch epochs over each
// collected segment and separate Adam optimizers for actor and critic.

#ifndef SVQC_PPO_HPP
#define SVQC_PPO_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "svqc/env.hpp"
#include "svqc/network.hpp"
#include "svqc/quantum.hpp"

namespace svqc {

/// R_t = r_t + gamma * R_{t+1}, with R after the last reward = bootstrap.
std::vector<double> discounted_returns(std::span<const double> rewards, double gamma, double bootstrap = 0.0);

/// returns - values, elementwise.
std::vector<double> advantages(std::span<const double> returns, std::span<const double> values);

/// min(r * A, clip(r, 1 - eps, 1 + eps) * A). NumericError for r <= 0.
double ppo_clip_objective(double ratio, double advantage, double clip);

/// Mean squared error. NumericError on empty input.
double value_loss(std::span<const double> values, std::span<const double> returns);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
    bool operator==(const AdamState &) const = default;
};

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One bias-corrected Adam descent step.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState &state, double lr,
               const AdamConfig &config = {});

struct TrainerConfig {
    double actor_lr = 0.001;
    double critic_lr = 0.01;
    double gamma = 0.99;
    int epochs = 4;
    double clip = 0.1;
    int update_horizon = 128;
    int max_episodes = 1000;
    std::uint64_t seed = 0;

    // Off by default; none of these is part of the base algorithm.
    bool normalize_advantages = false;
    double entropy_coef = 0.0;
    bool use_gae = false;
    double gae_lambda = 0.95;
    double reward_scale = 1.0; // rewards are multiplied by this before returns are formed

    // Freeze/resume manager.
    bool freeze = false;
    double freeze_threshold = 200.0;
    std::size_t freeze_window = 100;

    void validate() const;
    bool operator==(const TrainerConfig &) const = default;
};

struct Transition {
    std::vector<double> state;
    std::size_t action = 0;
    double reward = 0.0;
    double action_prob = 0.0; // pi_old(a|x) at collection time
    double value = 0.0;       // V(x) at collection time
    bool done = false;
};

/// Experience collected since the last update.
class TrajectoryBuffer {
  public:
    void push(Transition t) { items_.push_back(std::move(t)); }
    void clear() { items_.clear(); }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::span<const Transition> items() const { return items_; }

  private:
    std::vector<Transition> items_;
};

/// Everything an update needs, frozen at collection time.
struct PpoBatch {
    std::vector<std::vector<double>> states;
    std::vector<std::size_t> actions;
    std::vector<double> old_probs;
    std::vector<double> advantages;
    std::vector<double> returns;

    std::size_t size() const { return states.size(); }
};

/// Builds returns and advantages from a buffer segment.
PpoBatch make_batch(std::span<const Transition> segment, double bootstrap_value, const TrainerConfig &config);

/// Mean clipped surrogate (plus optional entropy bonus). If `grad` is
/// non-null it receives d(objective)/d(actor parameters).
double actor_objective(const Network &actor, const PpoBatch &batch, double clip, double entropy_coef,
                       std::vector<double> *grad);

/// Mean squared value error; `grad` receives d(loss)/d(critic parameters).
double critic_loss(const Network &critic, const PpoBatch &batch, std::vector<double> *grad);

struct FreezeState {
    bool frozen = false;
    int count = 0;
    int best = 0;
    std::vector<double> best_actor;
    std::vector<double> best_critic;

    bool operator==(const FreezeState &) const = default;
};

/// Freeze/resume rule: an episode at or above the threshold freezes
/// updates and extends the streak (snapshotting on a new best streak); a
/// trailing average below the threshold unfreezes and resets the streak.
FreezeState freeze_callback(double episode_reward, double trailing_average, FreezeState state,
                            std::span<const double> actor_params, std::span<const double> critic_params,
                            double threshold = 200.0);

struct EpisodeResult {
    std::size_t episode = 0; // 1-based
    double reward = 0.0;
    double avg20 = 0.0;
    int steps = 0;
    double wall_ms = 0.0;
};

/// Resumable trainer state other than the network parameters.
struct TrainerState {
    std::size_t episode = 0;
    std::uint64_t total_steps = 0;
    std::vector<double> rewards;
    Rng rng;
    AdamState actor_opt;
    AdamState critic_opt;
    FreezeState freeze;
};

/// Seed handed to env.reset() for a given episode of a run.
std::uint64_t episode_seed(std::uint64_t run_seed, std::size_t episode);

class Trainer {
  public:
    using EpisodeCallback = std::function<void(const EpisodeResult &, const Trainer &)>;

    Trainer(Environment &env, std::unique_ptr<Network> actor, std::unique_ptr<Network> critic,
            TrainerConfig config);

    /// Runs episodes until config.max_episodes have completed.
    void run(const EpisodeCallback &on_episode = {});
    EpisodeResult run_episode();

    /// One update (all epochs) on a segment; returns the number of epochs run.
    int update(std::span<const Transition> segment, double bootstrap_value);

    const Network &actor() const { return *actor_; }
    const Network &critic() const { return *critic_; }
    Network &actor() { return *actor_; }
    Network &critic() { return *critic_; }
    const TrainerConfig &config() const { return config_; }
    const TrainerState &state() const { return state_; }
    void restore(TrainerState state);
    const TrajectoryBuffer &buffer() const { return buffer_; }
    std::uint64_t updates() const { return updates_; }

    /// Called after every update with the batch it consumed.
    std::function<void(const PpoBatch &)> on_update;

  private:
    std::size_t sample_action(std::span<const double> probs);

    Environment &env_;
    std::unique_ptr<Network> actor_;
    std::unique_ptr<Network> critic_;
    TrainerConfig config_;
    TrainerState state_;
    TrajectoryBuffer buffer_;
    std::uint64_t updates_ = 0;
};

} // namespace svqc

#endif
