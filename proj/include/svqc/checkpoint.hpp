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

#ifndef SVQC_CHECKPOINT_HPP
#define SVQC_CHECKPOINT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "svqc/config.hpp"
#include "svqc/ppo.hpp"

namespace svqc {

inline constexpr int kCheckpointVersion = 1;

/// A training run frozen at an episode boundary.
struct Checkpoint {
    ExperimentConfig config; // trainer.seed holds the run seed
    std::vector<double> actor;
    std::vector<double> critic;
    TrainerState state;
};

/// Captures a trainer. The trajectory buffer must be empty, which holds
/// between episodes.
Checkpoint capture(const ExperimentConfig &config, const Trainer &trainer);

/// Versioned JSON; every double is written as a hex float.
std::string checkpoint_to_text(const Checkpoint &ckpt);
/// ConfigError on malformed or unsupported documents.
Checkpoint checkpoint_from_text(const std::string &text);

/// Writes to `path` through a temporary file and rename. IoError on failure.
void save_checkpoint(const std::string &path, const Checkpoint &ckpt);
Checkpoint load_checkpoint(const std::string &path);

/// Actor and critic rebuilt from a checkpoint.
std::pair<std::unique_ptr<Network>, std::unique_ptr<Network>> restore_models(const Checkpoint &ckpt);

} // namespace svqc

#endif
