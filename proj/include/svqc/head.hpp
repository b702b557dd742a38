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

// Classical post-processing of circuit outputs: output reuse, the affine
// scaling layer and the softmax policy.

#ifndef SVQC_HEAD_HPP
#define SVQC_HEAD_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "svqc/quantum.hpp"

namespace svqc {

/// y concatenated `reuse` times. ConfigError when reuse == 0.
std::vector<double> reuse_expand(std::span<const double> y, std::size_t reuse);

/// Affine layer over reused outputs: logits = bias + weights * reuse_expand(y).
struct HeadParams {
    std::size_t n_outputs = 0; // k actions, or 1 for a value head
    std::size_t n_inputs = 0;  // effective qubit count
    std::size_t reuse = 1;
    std::vector<double> weights; // row-major n_outputs x (n_inputs * reuse)
    std::vector<double> bias;    // n_outputs

    HeadParams() = default;
    HeadParams(std::size_t outputs, std::size_t inputs, std::size_t reuse);

    std::size_t columns() const { return n_inputs * reuse; }
    std::size_t parameter_count() const { return weights.size() + bias.size(); }
    void validate() const;

    /// Summed-copy weights W# (n_outputs x n_inputs): W#(p, q) = sum_j W(p, j*n + q).
    std::vector<double> folded_weights() const;
    /// Per-copy weights that reproduce W#; each copy carries W# / reuse.
    static HeadParams split(std::span<const double> folded, std::span<const double> bias,
                            std::size_t n_outputs, std::size_t n_inputs, std::size_t reuse);

    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
    void initialize(Rng &rng);

    bool operator==(const HeadParams &) const = default;
};

std::vector<double> scale_outputs(std::span<const double> y_expanded, const HeadParams &params);

/// Max-shifted softmax.
std::vector<double> softmax(std::span<const double> logits);

struct PolicyOutput {
    std::vector<double> logits;
    std::vector<double> probs;
    double value = 0.0;
};

struct HeadGradients {
    std::vector<double> d_weights;
    std::vector<double> d_bias;
    std::vector<double> d_inputs; // gradient on the un-reused per-qubit outputs
};

/// Scaling layer with a forward cache so the backward pass can be checked
/// against its own forward call.
class LinearHead {
  public:
    explicit LinearHead(HeadParams params) : params_(std::move(params)) { params_.validate(); }

    const HeadParams &params() const { return params_; }
    HeadParams &params() { return params_; }

    std::vector<double> forward(std::span<const double> y);
    /// Gradients given d(loss)/d(logits). StateError if forward was never called.
    HeadGradients backward(std::span<const double> upstream) const;

  private:
    HeadParams params_;
    std::optional<std::vector<double>> cached_input_;
};

} // namespace svqc

#endif
