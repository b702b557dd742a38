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

#include "svqc/network.hpp"

#include <algorithm>
#include <numbers>

#include "svqc/error.hpp"

namespace svqc {

const char *to_string(ModelKind kind) { return kind == ModelKind::Svqc ? "svqc" : "fcn"; }

SvqcNetwork::SvqcNetwork(CircuitSpec spec, std::vector<double> angles, HeadParams head, GradientMode mode)
    : circuit_(std::move(spec)), angles_(std::move(angles)), head_(std::move(head)), mode_(mode) {
    if (angles_.size() != circuit_.parameter_count()) {
        throw ConfigError("circuit needs " + std::to_string(circuit_.parameter_count()) + " angles, got " +
                          std::to_string(angles_.size()));
    }
    head_.validate();
    if (head_.n_inputs != circuit_.output_count()) {
        throw ConfigError("scaling head reads " + std::to_string(head_.n_inputs) + " qubits, circuit has " +
                          std::to_string(circuit_.output_count()));
    }
}

SvqcNetwork SvqcNetwork::create(const CircuitSpec &spec, std::size_t n_outputs, std::size_t reuse, Rng &rng,
                                GradientMode mode, AngleInit init) {
    Circuit circuit(spec);
    std::uniform_real_distribution<double> turn(0.0, 2.0 * std::numbers::pi);
    std::vector<double> angles(circuit.parameter_count(), 0.0);
    if (init == AngleInit::Uniform) {
        for (auto &a : angles) {
            a = turn(rng);
        }
    }
    HeadParams head(n_outputs, circuit.output_count(), reuse);
    head.initialize(rng);
    return SvqcNetwork(spec, std::move(angles), std::move(head), mode);
}

std::vector<double> SvqcNetwork::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    flat.insert(flat.end(), angles_.begin(), angles_.end());
    flat.insert(flat.end(), head_.weights.begin(), head_.weights.end());
    flat.insert(flat.end(), head_.bias.begin(), head_.bias.end());
    return flat;
}

void SvqcNetwork::set_parameters(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw ConfigError("flat parameter vector has the wrong length");
    }
    auto it = flat.begin();
    std::copy_n(it, angles_.size(), angles_.begin());
    it += static_cast<std::ptrdiff_t>(angles_.size());
    std::copy_n(it, head_.weights.size(), head_.weights.begin());
    it += static_cast<std::ptrdiff_t>(head_.weights.size());
    std::copy_n(it, head_.bias.size(), head_.bias.begin());
}

std::vector<double> SvqcNetwork::forward(std::span<const double> x) const {
    const auto y = circuit_.run(x, angles_);
    return scale_outputs(reuse_expand(y, head_.reuse), head_);
}

std::vector<double> SvqcNetwork::forward(std::span<const double> x, const NoiseModel &noise, Rng &rng) const {
    const auto y = circuit_.run(x, angles_, noise, rng);
    return scale_outputs(reuse_expand(y, head_.reuse), head_);
}

std::vector<double> SvqcNetwork::accumulate_gradient(std::span<const double> x, std::span<const double> upstream,
                                                     std::span<double> grad) const {
    if (grad.size() != parameter_count()) {
        throw ConfigError("gradient buffer has the wrong length");
    }
    const auto jac = circuit_.jacobian(x, angles_, mode_);
    LinearHead head(head_);
    auto out = head.forward(jac.outputs);
    const auto hg = head.backward(upstream);

    const std::size_t n_angles = angles_.size();
    for (std::size_t o = 0; o < jac.n_outputs; ++o) {
        const double dy = hg.d_inputs[o];
        if (dy == 0.0) {
            continue;
        }
        for (std::size_t p = 0; p < n_angles; ++p) {
            grad[p] += dy * jac.at(o, p);
        }
    }
    double *gw = grad.data() + n_angles;
    for (std::size_t i = 0; i < hg.d_weights.size(); ++i) {
        gw[i] += hg.d_weights[i];
    }
    double *gb = gw + hg.d_weights.size();
    for (std::size_t i = 0; i < hg.d_bias.size(); ++i) {
        gb[i] += hg.d_bias[i];
    }
    return out;
}

FcnNetwork FcnNetwork::create(std::vector<std::size_t> sizes, Activation activation, Rng &rng) {
    DenseNet net(std::move(sizes), activation);
    net.initialize(rng);
    return FcnNetwork(std::move(net));
}

std::vector<double> FcnNetwork::accumulate_gradient(std::span<const double> x, std::span<const double> upstream,
                                                    std::span<double> grad) const {
    DenseNet::Cache cache;
    auto out = net_.forward(x, cache);
    net_.backward(cache, upstream, grad);
    return out;
}

std::size_t param_count(const Network &model) { return model.parameter_count(); }

} // namespace svqc
