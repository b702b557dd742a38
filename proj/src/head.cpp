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

#include "svqc/head.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svqc/error.hpp"

namespace svqc {

std::vector<double> reuse_expand(std::span<const double> y, std::size_t reuse) {
    if (reuse == 0) {
        throw ConfigError("reuse count must be >= 1");
    }
    std::vector<double> out;
    out.reserve(y.size() * reuse);
    for (std::size_t j = 0; j < reuse; ++j) {
        out.insert(out.end(), y.begin(), y.end());
    }
    return out;
}

HeadParams::HeadParams(std::size_t outputs, std::size_t inputs, std::size_t reuse_count)
    : n_outputs(outputs), n_inputs(inputs), reuse(reuse_count),
      weights(outputs * inputs * reuse_count, 0.0), bias(outputs, 0.0) {}

void HeadParams::validate() const {
    if (reuse == 0) {
        throw ConfigError("reuse count must be >= 1");
    }
    if (n_outputs == 0 || n_inputs == 0) {
        throw ConfigError("scaling head needs at least one input and one output");
    }
    if (weights.size() != n_outputs * columns()) {
        throw ConfigError("weight matrix has " + std::to_string(weights.size()) + " entries, expected " +
                          std::to_string(n_outputs * columns()));
    }
    if (bias.size() != n_outputs) {
        throw ConfigError("bias length differs from output count");
    }
}

std::vector<double> HeadParams::folded_weights() const {
    std::vector<double> folded(n_outputs * n_inputs, 0.0);
    for (std::size_t p = 0; p < n_outputs; ++p) {
        for (std::size_t j = 0; j < reuse; ++j) {
            for (std::size_t q = 0; q < n_inputs; ++q) {
                folded[p * n_inputs + q] += weights[p * columns() + j * n_inputs + q];
            }
        }
    }
    return folded;
}

HeadParams HeadParams::split(std::span<const double> folded, std::span<const double> bias,
                             std::size_t n_outputs, std::size_t n_inputs, std::size_t reuse) {
    HeadParams params(n_outputs, n_inputs, reuse);
    if (folded.size() != n_outputs * n_inputs || bias.size() != n_outputs) {
        throw ConfigError("folded weights do not match the requested head shape");
    }
    // Equal shares, with the last copy taking the remainder so that summing
    // the copies in order gives back `folded` exactly.
    for (std::size_t p = 0; p < n_outputs; ++p) {
        for (std::size_t q = 0; q < n_inputs; ++q) {
            const double target = folded[p * n_inputs + q];
            const double share = target / static_cast<double>(reuse);
            double sum = 0.0;
            for (std::size_t j = 0; j + 1 < reuse; ++j) {
                params.weights[p * params.columns() + j * n_inputs + q] = share;
                sum += share;
            }
            params.weights[p * params.columns() + (reuse - 1) * n_inputs + q] = target - sum;
        }
    }
    params.bias.assign(bias.begin(), bias.end());
    return params;
}

void HeadParams::initialize(Rng &rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(columns()));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    for (auto &w : weights) {
        w = uniform(rng);
    }
    for (auto &b : bias) {
        b = uniform(rng);
    }
}

std::vector<double> scale_outputs(std::span<const double> y_expanded, const HeadParams &params) {
    if (y_expanded.size() != params.columns()) {
        throw ConfigError("scaling layer expects " + std::to_string(params.columns()) + " inputs, got " +
                          std::to_string(y_expanded.size()));
    }
    std::vector<double> logits(params.bias);
    const std::size_t cols = params.columns();
    for (std::size_t p = 0; p < params.n_outputs; ++p) {
        const double *row = params.weights.data() + p * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            acc += row[c] * y_expanded[c];
        }
        logits[p] += acc;
    }
    return logits;
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> probs(logits.begin(), logits.end());
    if (probs.empty()) {
        return probs;
    }
    const double top = *std::max_element(probs.begin(), probs.end());
    double total = 0.0;
    for (auto &p : probs) {
        p = std::exp(p - top);
        total += p;
    }
    for (auto &p : probs) {
        p /= total;
    }
    return probs;
}

std::vector<double> LinearHead::forward(std::span<const double> y) {
    if (y.size() != params_.n_inputs) {
        throw ConfigError("scaling head expects " + std::to_string(params_.n_inputs) + " qubit outputs, got " +
                          std::to_string(y.size()));
    }
    cached_input_ = reuse_expand(y, params_.reuse);
    return scale_outputs(*cached_input_, params_);
}

HeadGradients LinearHead::backward(std::span<const double> upstream) const {
    if (!cached_input_) {
        throw StateError("backward called before forward");
    }
    if (upstream.size() != params_.n_outputs) {
        throw ConfigError("upstream gradient length differs from head output count");
    }
    const auto &x = *cached_input_;
    const std::size_t cols = params_.columns();
    HeadGradients g;
    g.d_weights.assign(params_.weights.size(), 0.0);
    g.d_bias.assign(upstream.begin(), upstream.end());
    g.d_inputs.assign(params_.n_inputs, 0.0);
    for (std::size_t p = 0; p < params_.n_outputs; ++p) {
        for (std::size_t c = 0; c < cols; ++c) {
            g.d_weights[p * cols + c] = upstream[p] * x[c];
            g.d_inputs[c % params_.n_inputs] += upstream[p] * params_.weights[p * cols + c];
        }
    }
    return g;
}

} // namespace svqc
