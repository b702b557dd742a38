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

#ifndef SVQC_DENSE_HPP
#define SVQC_DENSE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "svqc/quantum.hpp"

namespace svqc {

enum class Activation { Tanh, Relu, Linear };

/// Fully-connected network; hidden layers use `activation`, the last layer is linear.
class DenseNet {
  public:
    struct Layer {
        std::size_t in = 0, out = 0;
        std::vector<double> weights; // row-major out x in
        std::vector<double> bias;
        bool operator==(const Layer &) const = default;
    };

    /// Activations of one forward pass, consumed by backward().
    struct Cache {
        std::vector<std::vector<double>> inputs; // input to each layer
        std::vector<std::vector<double>> pre;    // pre-activation of each layer
        bool empty() const { return inputs.empty(); }
    };

    DenseNet() = default;
    /// sizes = {d, h1, ..., k}; at least two entries.
    DenseNet(std::vector<std::size_t> sizes, Activation activation);

    const std::vector<std::size_t> &sizes() const { return sizes_; }
    Activation activation() const { return activation_; }
    std::vector<Layer> &layers() { return layers_; }
    const std::vector<Layer> &layers() const { return layers_; }
    std::size_t parameter_count() const;

    void initialize(Rng &rng);

    std::vector<double> forward(std::span<const double> x) const;
    std::vector<double> forward(std::span<const double> x, Cache &cache) const;
    /// Accumulates d<upstream, output>/d(params) into `grad` (flat layer order:
    /// weights then bias of each layer). Returns d/d(input). StateError on an
    /// empty cache.
    std::vector<double> backward(const Cache &cache, std::span<const double> upstream,
                                 std::span<double> grad) const;

    /// Flat parameter vector in the same layout as backward()'s gradient.
    std::vector<double> flat() const;
    void assign(std::span<const double> flat);

    bool operator==(const DenseNet &) const = default;

  private:
    std::vector<std::size_t> sizes_;
    Activation activation_ = Activation::Tanh;
    std::vector<Layer> layers_;
};

/// Sum over layers of (in + 1) * out.
std::size_t dense_parameter_count(std::span<const std::size_t> sizes);

} // namespace svqc

#endif
