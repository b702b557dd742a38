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

#include "svqc/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "svqc/env.hpp"
#include "svqc/error.hpp"

namespace svqc {

using nlohmann::json;

namespace {

json hex_vector(const std::vector<double> &v) {
    json out = json::array();
    for (double d : v) {
        out.push_back(hex_double(d));
    }
    return out;
}

std::vector<double> read_vector(const json &j, const char *what) {
    if (!j.is_array()) {
        throw ConfigError(std::string("checkpoint field '") + what + "' must be a list");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto &e : j) {
        if (!e.is_string()) {
            throw ConfigError(std::string("checkpoint field '") + what + "' must hold hex strings");
        }
        out.push_back(parse_double(e.get<std::string>()));
    }
    return out;
}

json adam_json(const AdamState &s) { return {{"m", hex_vector(s.m)}, {"v", hex_vector(s.v)}, {"t", s.t}}; }

AdamState adam_from_json(const json &j) {
    AdamState s;
    s.m = read_vector(j.at("m"), "m");
    s.v = read_vector(j.at("v"), "v");
    s.t = j.at("t").get<std::uint64_t>();
    if (s.m.size() != s.v.size()) {
        throw ConfigError("optimizer moments differ in length");
    }
    return s;
}

const json &field(const json &j, const char *key) {
    if (!j.contains(key)) {
        throw ConfigError(std::string("checkpoint is missing '") + key + "'");
    }
    return j[key];
}

} // namespace

Checkpoint capture(const ExperimentConfig &config, const Trainer &trainer) {
    if (!trainer.buffer().empty()) {
        throw UsageError("checkpoints are taken between episodes");
    }
    Checkpoint c;
    c.config = config;
    c.config.trainer = trainer.config();
    c.actor = trainer.actor().parameters();
    c.critic = trainer.critic().parameters();
    c.state = trainer.state();
    return c;
}

std::string checkpoint_to_text(const Checkpoint &ckpt) {
    std::ostringstream rng;
    rng << ckpt.state.rng;
    const auto &f = ckpt.state.freeze;
    json j{{"format", "svqc-checkpoint"},
           {"version", kCheckpointVersion},
           {"config", json::parse(config_to_text(ckpt.config))},
           {"seed", ckpt.config.trainer.seed},
           {"fingerprint", fingerprint(ckpt.config)},
           {"model_kind", to_string(ckpt.config.model.kind)},
           {"actor", hex_vector(ckpt.actor)},
           {"critic", hex_vector(ckpt.critic)},
           {"actor_opt", adam_json(ckpt.state.actor_opt)},
           {"critic_opt", adam_json(ckpt.state.critic_opt)},
           {"episode", ckpt.state.episode},
           {"total_steps", ckpt.state.total_steps},
           {"rewards", hex_vector(ckpt.state.rewards)},
           {"rng", rng.str()},
           {"freeze",
            {{"frozen", f.frozen},
             {"count", f.count},
             {"best", f.best},
             {"best_actor", hex_vector(f.best_actor)},
             {"best_critic", hex_vector(f.best_critic)}}}};
    return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_text(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", std::string()) != "svqc-checkpoint") {
            throw ConfigError("not a checkpoint document");
        }
        const int version = field(j, "version").get<int>();
        if (version != kCheckpointVersion) {
            throw ConfigError("unsupported checkpoint version " + std::to_string(version));
        }
        Checkpoint c;
        c.config = config_from_text(field(j, "config").dump());
        c.config.trainer.seed = field(j, "seed").get<std::uint64_t>();
        c.actor = read_vector(field(j, "actor"), "actor");
        c.critic = read_vector(field(j, "critic"), "critic");
        c.state.actor_opt = adam_from_json(field(j, "actor_opt"));
        c.state.critic_opt = adam_from_json(field(j, "critic_opt"));
        c.state.episode = field(j, "episode").get<std::size_t>();
        c.state.total_steps = field(j, "total_steps").get<std::uint64_t>();
        c.state.rewards = read_vector(field(j, "rewards"), "rewards");
        std::istringstream rng(field(j, "rng").get<std::string>());
        rng >> c.state.rng;
        if (!rng) {
            throw ConfigError("checkpoint generator state is malformed");
        }
        const auto &f = field(j, "freeze");
        c.state.freeze.frozen = f.at("frozen").get<bool>();
        c.state.freeze.count = f.at("count").get<int>();
        c.state.freeze.best = f.at("best").get<int>();
        c.state.freeze.best_actor = read_vector(f.at("best_actor"), "best_actor");
        c.state.freeze.best_critic = read_vector(f.at("best_critic"), "best_critic");
        if (c.state.rewards.size() != c.state.episode) {
            throw ConfigError("checkpoint reward history does not match its episode count");
        }
        return c;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::string &path, const Checkpoint &ckpt) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + tmp);
        }
        out << checkpoint_to_text(ckpt);
        if (!out.flush()) {
            throw IoError("write failed for " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot move checkpoint into place at " + path + ": " + ec.message());
    }
}

Checkpoint load_checkpoint(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read checkpoint " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return checkpoint_from_text(ss.str());
}

std::pair<std::unique_ptr<Network>, std::unique_ptr<Network>> restore_models(const Checkpoint &ckpt) {
    Rng scratch(0);
    auto models = build_models(ckpt.config, EnvSpec::lookup(ckpt.config.env), scratch);
    if (models.first->parameter_count() != ckpt.actor.size() ||
        models.second->parameter_count() != ckpt.critic.size()) {
        throw ConfigError("checkpoint parameter vectors do not match its model");
    }
    models.first->set_parameters(ckpt.actor);
    models.second->set_parameters(ckpt.critic);
    return models;
}

} // namespace svqc
