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

#include "svqc/dense.hpp"

#include <cmath>
#include <string>

#include "svqc/error.hpp"

namespace svqc {

namespace {

double activate(Activation a, double v) {
    switch (a) {
    case Activation::Tanh:
        return std::tanh(v);
    case Activation::Relu:
        return v > 0.0 ? v : 0.0;
    case Activation::Linear:
        return v;
    }
    return v;
}

double activate_grad(Activation a, double pre) {
    switch (a) {
    case Activation::Tanh: {
        const double t = std::tanh(pre);
        return 1.0 - t * t;
    }
    case Activation::Relu:
        return pre > 0.0 ? 1.0 : 0.0;
    case Activation::Linear:
        return 1.0;
    }
    return 1.0;
}

} // namespace

std::size_t dense_parameter_count(std::span<const std::size_t> sizes) {
    std::size_t total = 0;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        total += (sizes[i] + 1) * sizes[i + 1];
    }
    return total;
}

DenseNet::DenseNet(std::vector<std::size_t> sizes, Activation activation)
    : sizes_(std::move(sizes)), activation_(activation) {
    if (sizes_.size() < 2) {
        throw ConfigError("dense network needs an input and an output size");
    }
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
        if (sizes_[i] == 0 || sizes_[i + 1] == 0) {
            throw ConfigError("dense layer sizes must be positive");
        }
        Layer layer;
        layer.in = sizes_[i];
        layer.out = sizes_[i + 1];
        layer.weights.assign(layer.in * layer.out, 0.0);
        layer.bias.assign(layer.out, 0.0);
        layers_.push_back(std::move(layer));
    }
}

std::size_t DenseNet::parameter_count() const { return dense_parameter_count(sizes_); }

void DenseNet::initialize(Rng &rng) {
    for (auto &layer : layers_) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        std::uniform_real_distribution<double> uniform(-bound, bound);
        for (auto &w : layer.weights) {
            w = uniform(rng);
        }
        for (auto &b : layer.bias) {
            b = uniform(rng);
        }
    }
}

std::vector<double> DenseNet::forward(std::span<const double> x) const {
    Cache scratch;
    return forward(x, scratch);
}

std::vector<double> DenseNet::forward(std::span<const double> x, Cache &cache) const {
    if (x.size() != sizes_.front()) {
        throw ConfigError("dense network expects input of length " + std::to_string(sizes_.front()) +
                          ", got " + std::to_string(x.size()));
    }
    cache.inputs.clear();
    cache.pre.clear();
    std::vector<double> h(x.begin(), x.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto &layer = layers_[l];
        std::vector<double> z(layer.bias);
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double *row = layer.weights.data() + o * layer.in;
            double acc = 0.0;
            for (std::size_t i = 0; i < layer.in; ++i) {
                acc += row[i] * h[i];
            }
            z[o] += acc;
        }
        cache.inputs.push_back(std::move(h));
        const bool last = l + 1 == layers_.size();
        h.resize(z.size());
        for (std::size_t o = 0; o < z.size(); ++o) {
            h[o] = last ? z[o] : activate(activation_, z[o]);
        }
        cache.pre.push_back(std::move(z));
    }
    return h;
}

std::vector<double> DenseNet::backward(const Cache &cache, std::span<const double> upstream,
                                       std::span<double> grad) const {
    if (cache.empty()) {
        throw StateError("backward called before forward");
    }
    if (upstream.size() != sizes_.back()) {
        throw ConfigError("upstream gradient length differs from network output size");
    }
    if (grad.size() != parameter_count()) {
        throw ConfigError("gradient buffer has the wrong length");
    }
    // Offsets of each layer inside the flat layout.
    std::vector<std::size_t> offset(layers_.size());
    std::size_t at = 0;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        offset[l] = at;
        at += layers_[l].weights.size() + layers_[l].bias.size();
    }
    std::vector<double> delta(upstream.begin(), upstream.end());
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const auto &layer = layers_[l];
        if (l + 1 != layers_.size()) {
            for (std::size_t o = 0; o < layer.out; ++o) {
                delta[o] *= activate_grad(activation_, cache.pre[l][o]);
            }
        }
        const auto &in = cache.inputs[l];
        double *gw = grad.data() + offset[l];
        double *gb = gw + layer.weights.size();
        std::vector<double> next(layer.in, 0.0);
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double d = delta[o];
            gb[o] += d;
            if (d == 0.0) {
                continue;
            }
            const double *row = layer.weights.data() + o * layer.in;
            double *grow = gw + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) {
                grow[i] += d * in[i];
                next[i] += d * row[i];
            }
        }
        delta = std::move(next);
    }
    return delta;
}

std::vector<double> DenseNet::flat() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto &layer : layers_) {
        out.insert(out.end(), layer.weights.begin(), layer.weights.end());
        out.insert(out.end(), layer.bias.begin(), layer.bias.end());
    }
    return out;
}

void DenseNet::assign(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw ConfigError("flat parameter vector has the wrong length");
    }
    std::size_t at = 0;
    for (auto &layer : layers_) {
        for (auto &w : layer.weights) {
            w = flat[at++];
        }
        for (auto &b : layer.bias) {
            b = flat[at++];
        }
    }
}

} // namespace svqc
