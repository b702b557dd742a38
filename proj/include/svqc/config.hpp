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

#ifndef SVQC_CONFIG_HPP
#define SVQC_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "svqc/env.hpp"
#include "svqc/network.hpp"
#include "svqc/ppo.hpp"
#include "svqc/quantum.hpp"

namespace svqc {

struct ModelSpec {
    ModelKind kind = ModelKind::Svqc;

    // svqc
    CircuitSpec circuit;
    std::size_t reuse = 1;
    GradientMode gradient = GradientMode::Analytic;
    AngleInit angle_init = AngleInit::Uniform;

    // fcn
    std::vector<std::size_t> hidden{16, 32, 64, 32};
    Activation activation = Activation::Tanh;

    bool operator==(const ModelSpec &) const = default;
};

struct ExperimentConfig {
    std::string preset; // name of the preset this was built from, empty if none
    std::string env = "cartpole-v1";
    ModelSpec model;
    TrainerConfig trainer;
    NoiseModel noise; // applied at evaluation time
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::string bridge; // command for bridge:<id> environments

    void validate() const;
    bool operator==(const ExperimentConfig &) const = default;
};

std::vector<std::string> preset_names();
/// ConfigError for an unknown name.
ExperimentConfig preset(std::string_view name);

/// JSON text with sorted keys. Numbers use shortest round-trip form.
std::string config_to_text(const ExperimentConfig &config);
/// Accepts a full document or {"preset": name, ...overrides}.
ExperimentConfig config_from_text(const std::string &text);
ExperimentConfig load_config(const std::string &path);

/// FNV-1a 64 over the canonical text of everything that affects results
/// (environment, model, trainer, noise), as 16 hex digits.
std::string fingerprint(const ExperimentConfig &config);

std::string circuit_to_text(const CircuitSpec &spec);
CircuitSpec circuit_from_text(const std::string &text);

/// Fresh actor (k outputs) and critic (1 output) for `config` on `env_spec`.
std::pair<std::unique_ptr<Network>, std::unique_ptr<Network>> build_models(const ExperimentConfig &config,
                                                                           const EnvSpec &env_spec, Rng &rng);

/// Exact text for a double: hex float, or "inf"/"-inf"/"nan".
std::string hex_double(double v);
/// Parses hex or decimal text written by hex_double or by hand.
double parse_double(const std::string &text);

} // namespace svqc

#endif
