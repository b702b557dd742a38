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

#include "svqc/ppo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "svqc/error.hpp"
#include "svqc/head.hpp"

namespace svqc {

std::vector<double> discounted_returns(std::span<const double> rewards, double gamma, double bootstrap) {
    std::vector<double> out(rewards.size());
    double running = bootstrap;
    for (std::size_t t = rewards.size(); t-- > 0;) {
        running = rewards[t] + gamma * running;
        out[t] = running;
    }
    return out;
}

std::vector<double> advantages(std::span<const double> returns, std::span<const double> values) {
    if (returns.size() != values.size()) {
        throw ConfigError("returns and values differ in length");
    }
    std::vector<double> out(returns.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = returns[i] - values[i];
    }
    return out;
}

double ppo_clip_objective(double ratio, double advantage, double clip) {
    if (!(ratio > 0.0)) {
        throw NumericError("probability ratio must be positive");
    }
    const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    return std::min(ratio * advantage, clipped * advantage);
}

double value_loss(std::span<const double> values, std::span<const double> returns) {
    if (values.size() != returns.size()) {
        throw ConfigError("values and returns differ in length");
    }
    if (values.empty()) {
        throw NumericError("value loss of an empty buffer");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - returns[i];
        total += d * d;
    }
    return total / static_cast<double>(values.size());
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState &state, double lr,
               const AdamConfig &config) {
    if (params.size() != grads.size()) {
        throw ConfigError("parameter and gradient sizes differ");
    }
    if (state.m.size() != params.size()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
        state.t = 0;
    }
    ++state.t;
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
        state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + config.eps);
    }
}

void TrainerConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw ConfigError("discount must lie in [0, 1)");
    }
    if (!(clip > 0.0)) {
        throw ConfigError("clip epsilon must be positive");
    }
    if (epochs < 1) {
        throw ConfigError("epochs must be >= 1");
    }
    if (update_horizon < 1) {
        throw ConfigError("update horizon must be >= 1");
    }
    if (max_episodes < 0) {
        throw ConfigError("max_episodes must be >= 0");
    }
    if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) {
        throw ConfigError("learning rates must be positive");
    }
    if (!(reward_scale > 0.0)) {
        throw ConfigError("reward scale must be positive");
    }
    if (freeze && freeze_window == 0) {
        throw ConfigError("freeze window must be >= 1");
    }
}

PpoBatch make_batch(std::span<const Transition> segment, double bootstrap_value, const TrainerConfig &config) {
    PpoBatch batch;
    const std::size_t n = segment.size();
    std::vector<double> rewards(n), values(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto &t = segment[i];
        batch.states.push_back(t.state);
        batch.actions.push_back(t.action);
        batch.old_probs.push_back(t.action_prob);
        rewards[i] = t.reward * config.reward_scale;
        values[i] = t.value;
    }
    if (config.use_gae) {
        batch.advantages.assign(n, 0.0);
        double running = 0.0;
        for (std::size_t t = n; t-- > 0;) {
            const bool terminal = segment[t].done;
            const double next_value = terminal ? 0.0 : (t + 1 < n ? values[t + 1] : bootstrap_value);
            const double delta = rewards[t] + config.gamma * next_value - values[t];
            running = delta + config.gamma * config.gae_lambda * (terminal ? 0.0 : running);
            batch.advantages[t] = running;
        }
        batch.returns.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            batch.returns[i] = batch.advantages[i] + values[i];
        }
    } else {
        batch.returns = discounted_returns(rewards, config.gamma, bootstrap_value);
        batch.advantages = advantages(batch.returns, values);
    }
    if (config.normalize_advantages && n > 1) {
        const double mean = std::accumulate(batch.advantages.begin(), batch.advantages.end(), 0.0) / n;
        double var = 0.0;
        for (double a : batch.advantages) {
            var += (a - mean) * (a - mean);
        }
        const double sd = std::sqrt(var / n) + 1e-8;
        for (auto &a : batch.advantages) {
            a = (a - mean) / sd;
        }
    }
    return batch;
}

double actor_objective(const Network &actor, const PpoBatch &batch, double clip, double entropy_coef,
                       std::vector<double> *grad) {
    const std::size_t n = batch.size();
    if (n == 0) {
        throw NumericError("actor objective of an empty batch");
    }
    if (grad) {
        grad->assign(actor.parameter_count(), 0.0);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    double total = 0.0;
    std::vector<double> upstream(actor.output_dim());
    for (std::size_t i = 0; i < n; ++i) {
        const auto logits = actor.forward(batch.states[i]);
        const auto probs = softmax(logits);
        const std::size_t a = batch.actions[i];
        const double ratio = probs[a] / batch.old_probs[i];
        const double adv = batch.advantages[i];
        const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
        const bool unclipped_active = ratio * adv <= clipped * adv;
        total += ppo_clip_objective(ratio, adv, clip);

        double entropy = 0.0;
        if (entropy_coef != 0.0) {
            for (double p : probs) {
                entropy -= p > 0.0 ? p * std::log(p) : 0.0;
            }
            total += entropy_coef * entropy;
        }
        if (!grad) {
            continue;
        }
        std::fill(upstream.begin(), upstream.end(), 0.0);
        if (unclipped_active) {
            // d(ratio)/d(logit_j) = ratio * (1[j == a] - p_j)
            for (std::size_t j = 0; j < probs.size(); ++j) {
                upstream[j] = adv * ratio * ((j == a ? 1.0 : 0.0) - probs[j]) * inv_n;
            }
        }
        if (entropy_coef != 0.0) {
            for (std::size_t j = 0; j < probs.size(); ++j) {
                const double logp = probs[j] > 0.0 ? std::log(probs[j]) : 0.0;
                upstream[j] += -entropy_coef * probs[j] * (logp + entropy) * inv_n;
            }
        }
        actor.accumulate_gradient(batch.states[i], upstream, *grad);
    }
    return total * inv_n;
}

double critic_loss(const Network &critic, const PpoBatch &batch, std::vector<double> *grad) {
    const std::size_t n = batch.size();
    if (n == 0) {
        throw NumericError("value loss of an empty batch");
    }
    if (grad) {
        grad->assign(critic.parameter_count(), 0.0);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    double total = 0.0;
    std::vector<double> upstream(1);
    for (std::size_t i = 0; i < n; ++i) {
        double v;
        if (grad) {
            // Upstream depends on V, so run forward first; accumulate_gradient is linear in upstream.
            v = critic.forward(batch.states[i])[0];
            upstream[0] = 2.0 * (v - batch.returns[i]) * inv_n;
            critic.accumulate_gradient(batch.states[i], upstream, *grad);
        } else {
            v = critic.forward(batch.states[i])[0];
        }
        const double d = v - batch.returns[i];
        total += d * d;
    }
    return total * inv_n;
}

FreezeState freeze_callback(double episode_reward, double trailing_average, FreezeState state,
                            std::span<const double> actor_params, std::span<const double> critic_params,
                            double threshold) {
    if (episode_reward >= threshold) {
        state.frozen = true;
        state.count += 1;
        if (state.count > state.best) {
            state.best = state.count;
            state.best_actor.assign(actor_params.begin(), actor_params.end());
            state.best_critic.assign(critic_params.begin(), critic_params.end());
        }
    }
    if (trailing_average < threshold) {
        state.frozen = false;
        state.count = 0;
    }
    return state;
}

std::uint64_t episode_seed(std::uint64_t run_seed, std::size_t episode) {
    // splitmix64 finalizer over (seed, episode)
    std::uint64_t z = run_seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(episode) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Trainer

Trainer::Trainer(Environment &env, std::unique_ptr<Network> actor, std::unique_ptr<Network> critic,
                 TrainerConfig config)
    : env_(env), actor_(std::move(actor)), critic_(std::move(critic)), config_(config) {
    config_.validate();
    const auto &spec = env_.spec();
    if (actor_->input_dim() != spec.obs_dim || critic_->input_dim() != spec.obs_dim) {
        throw ConfigError("model input size differs from " + spec.id + " observation size " +
                          std::to_string(spec.obs_dim));
    }
    if (actor_->output_dim() != spec.n_actions) {
        throw ConfigError("actor has " + std::to_string(actor_->output_dim()) + " outputs, " + spec.id +
                          " has " + std::to_string(spec.n_actions) + " actions");
    }
    if (critic_->output_dim() != 1) {
        throw ConfigError("critic must have exactly one output");
    }
    state_.rng.seed(config_.seed);
    state_.actor_opt = AdamState(actor_->parameter_count());
    state_.critic_opt = AdamState(critic_->parameter_count());
}

void Trainer::restore(TrainerState state) {
    if (state.actor_opt.m.size() != actor_->parameter_count() ||
        state.critic_opt.m.size() != critic_->parameter_count()) {
        throw ConfigError("optimizer state does not match the model size");
    }
    state_ = std::move(state);
    buffer_.clear();
}

std::size_t Trainer::sample_action(std::span<const double> probs) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double draw = u(state_.rng);
    double acc = 0.0;
    for (std::size_t a = 0; a < probs.size(); ++a) {
        acc += probs[a];
        if (draw < acc) {
            return a;
        }
    }
    return probs.size() - 1;
}

int Trainer::update(std::span<const Transition> segment, double bootstrap_value) {
    if (segment.empty()) {
        return 0;
    }
    const PpoBatch batch = make_batch(segment, bootstrap_value, config_);
    std::vector<double> grad;
    for (int epoch = 0; epoch < config_.epochs; ++epoch) {
        critic_loss(*critic_, batch, &grad);
        auto params = critic_->parameters();
        adam_step(params, grad, state_.critic_opt, config_.critic_lr);
        critic_->set_parameters(params);

        actor_objective(*actor_, batch, config_.clip, config_.entropy_coef, &grad);
        // Ascent on the objective as descent on its negation.
        for (auto &g : grad) {
            g = -g;
        }
        params = actor_->parameters();
        adam_step(params, grad, state_.actor_opt, config_.actor_lr);
        actor_->set_parameters(params);
    }
    ++updates_;
    if (on_update) {
        on_update(batch);
    }
    return config_.epochs;
}

EpisodeResult Trainer::run_episode() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t episode = state_.episode;
    auto obs = env_.reset(episode_seed(config_.seed, episode));
    buffer_.clear();
    double episode_reward = 0.0;
    int steps = 0;
    while (true) {
        const auto probs = softmax(actor_->forward(obs));
        const std::size_t action = sample_action(probs);
        const double value = critic_->forward(obs)[0];
        StepResult res = env_.step(action);
        episode_reward += res.reward;
        ++steps;
        ++state_.total_steps;
        buffer_.push({std::move(obs), action, res.reward, probs[action], value, res.done});
        obs = std::move(res.observation);

        if (res.done || buffer_.size() >= static_cast<std::size_t>(config_.update_horizon)) {
            if (!state_.freeze.frozen) {
                const double bootstrap = res.done ? 0.0 : critic_->forward(obs)[0];
                update(buffer_.items(), bootstrap);
            }
            buffer_.clear();
        }
        if (res.done) {
            break;
        }
    }

    state_.rewards.push_back(episode_reward);
    state_.episode = episode + 1;
    if (config_.freeze) {
        state_.freeze = freeze_callback(episode_reward, trailing_mean(state_.rewards, config_.freeze_window),
                                        std::move(state_.freeze), actor_->parameters(), critic_->parameters(),
                                        config_.freeze_threshold);
    }

    EpisodeResult result;
    result.episode = state_.episode;
    result.reward = episode_reward;
    result.avg20 = trailing_mean(state_.rewards, 20);
    result.steps = steps;
    result.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void Trainer::run(const EpisodeCallback &on_episode) {
    while (state_.episode < static_cast<std::size_t>(config_.max_episodes)) {
        const auto result = run_episode();
        if (on_episode) {
            on_episode(result, *this);
        }
    }
}

} // namespace svqc
