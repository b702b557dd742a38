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

// Trainable function approximators seen by the PPO trainer. Both the
// circuit-backed model and the dense baseline expose one flat parameter
// vector and a vector-Jacobian product, so the trainer treats them alike.

#ifndef SVQC_NETWORK_HPP
#define SVQC_NETWORK_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "svqc/dense.hpp"
#include "svqc/head.hpp"
#include "svqc/quantum.hpp"

namespace svqc {

enum class ModelKind { Svqc, Fcn };

/// Starting point of the trainable circuit angles.
enum class AngleInit {
    Uniform, // uniform in [0, 2pi)
    Zero,    // every trainable rotation starts as the identity
};

const char *to_string(ModelKind kind);

class Network {
  public:
    virtual ~Network() = default;

    virtual ModelKind kind() const = 0;
    virtual std::size_t input_dim() const = 0;
    virtual std::size_t output_dim() const = 0;
    virtual std::size_t parameter_count() const = 0;

    virtual std::vector<double> parameters() const = 0;
    virtual void set_parameters(std::span<const double> flat) = 0;

    virtual std::vector<double> forward(std::span<const double> x) const = 0;
    /// Forward pass with measurement noise; classical models ignore the noise.
    virtual std::vector<double> forward(std::span<const double> x, const NoiseModel &noise,
                                        Rng &rng) const {
        (void)noise;
        (void)rng;
        return forward(x);
    }
    /// grad += d<upstream, forward(x)>/d(parameters). Returns forward(x).
    virtual std::vector<double> accumulate_gradient(std::span<const double> x,
                                                    std::span<const double> upstream,
                                                    std::span<double> grad) const = 0;

    virtual std::unique_ptr<Network> clone() const = 0;
};

/// Circuit followed by output reuse and an affine head.
/// Flat layout: [circuit angles | head weights | head bias].
class SvqcNetwork final : public Network {
  public:
    SvqcNetwork(CircuitSpec spec, std::vector<double> angles, HeadParams head,
                GradientMode mode = GradientMode::Analytic);

    /// Angles per `init`, head uniform(+-1/sqrt(fan_in)).
    static SvqcNetwork create(const CircuitSpec &spec, std::size_t n_outputs, std::size_t reuse,
                              Rng &rng, GradientMode mode = GradientMode::Analytic,
                              AngleInit init = AngleInit::Uniform);

    ModelKind kind() const override { return ModelKind::Svqc; }
    std::size_t input_dim() const override { return circuit_.feature_count(); }
    std::size_t output_dim() const override { return head_.n_outputs; }
    std::size_t parameter_count() const override {
        return angles_.size() + head_.parameter_count();
    }
    std::size_t angle_count() const { return angles_.size(); }
    std::size_t scaling_parameter_count() const { return head_.parameter_count(); }

    std::vector<double> parameters() const override;
    void set_parameters(std::span<const double> flat) override;

    std::vector<double> forward(std::span<const double> x) const override;
    std::vector<double> forward(std::span<const double> x, const NoiseModel &noise,
                                Rng &rng) const override;
    std::vector<double> accumulate_gradient(std::span<const double> x, std::span<const double> upstream,
                                            std::span<double> grad) const override;
    std::unique_ptr<Network> clone() const override { return std::make_unique<SvqcNetwork>(*this); }

    const Circuit &circuit() const { return circuit_; }
    const std::vector<double> &angles() const { return angles_; }
    const HeadParams &head() const { return head_; }
    GradientMode gradient_mode() const { return mode_; }
    void set_gradient_mode(GradientMode mode) { mode_ = mode; }

  private:
    Circuit circuit_;
    std::vector<double> angles_;
    HeadParams head_;
    GradientMode mode_;
};

class FcnNetwork final : public Network {
  public:
    explicit FcnNetwork(DenseNet net) : net_(std::move(net)) {}
    static FcnNetwork create(std::vector<std::size_t> sizes, Activation activation, Rng &rng);

    ModelKind kind() const override { return ModelKind::Fcn; }
    std::size_t input_dim() const override { return net_.sizes().front(); }
    std::size_t output_dim() const override { return net_.sizes().back(); }
    std::size_t parameter_count() const override { return net_.parameter_count(); }

    std::vector<double> parameters() const override { return net_.flat(); }
    void set_parameters(std::span<const double> flat) override { net_.assign(flat); }

    std::vector<double> forward(std::span<const double> x) const override { return net_.forward(x); }
    std::vector<double> accumulate_gradient(std::span<const double> x, std::span<const double> upstream,
                                            std::span<double> grad) const override;
    std::unique_ptr<Network> clone() const override { return std::make_unique<FcnNetwork>(*this); }

    const DenseNet &net() const { return net_; }

  private:
    DenseNet net_;
};

/// Trainable scalar count of a model.
std::size_t param_count(const Network &model);

} // namespace svqc

#endif
