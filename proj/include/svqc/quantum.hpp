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

// Product-state simulation of single-qubit variational circuits.
//
// Every qubit evolves independently (there are no entangling gates), so a
// circuit on n qubits is n independent 2-amplitude simulations. Rotations
// follow R_a(phi) = exp(-i phi sigma_a / 2); only Pauli-Z expectations are
// observable, so global phases are dropped freely.

#ifndef SVQC_QUANTUM_HPP
#define SVQC_QUANTUM_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace svqc {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

struct QubitState {
    Complex amp0{1.0, 0.0};
    Complex amp1{0.0, 0.0};

    static QubitState zero() { return {}; }
    static QubitState one() { return {Complex{0.0, 0.0}, Complex{1.0, 0.0}}; }
    double norm_squared() const { return std::norm(amp0) + std::norm(amp1); }
};

enum class GateKind { H, Rx, Ry, Rz };

enum class AngleSource {
    Constant,  // angle = Gate::value
    Feature,   // angle = encoding angle Gate::index (see FeatureMap)
    Parameter, // angle = trainable angle Gate::index
};

struct Gate {
    GateKind kind = GateKind::H;
    AngleSource source = AngleSource::Constant;
    std::size_t index = 0;
    double value = 0.0;

    static Gate h() { return {}; }
    static Gate constant(GateKind k, double angle) { return {k, AngleSource::Constant, 0, angle}; }
    static Gate feature(GateKind k, std::size_t slot) { return {k, AngleSource::Feature, slot, 0.0}; }
    static Gate parameter(GateKind k, std::size_t slot) { return {k, AngleSource::Parameter, slot, 0.0}; }

    bool operator==(const Gate &) const = default;
};

/// Row-major 2x2 complex matrix.
struct Matrix2 {
    Complex m00, m01, m10, m11;
};

Matrix2 gate_matrix(GateKind kind, double angle);
/// d/dphi of gate_matrix(kind, phi). Zero for H.
Matrix2 gate_matrix_derivative(GateKind kind, double angle);

QubitState apply_matrix(const Matrix2 &m, const QubitState &state);

/// Applies a single gate. Throws InvalidInputError when the angle is not finite.
QubitState apply_gate(const QubitState &state, GateKind kind, double angle = 0.0);

double expectation_z(const QubitState &state);

/// Affine map from the feature vector to encoding angles:
/// angle_j = offsets_j + sum_i weights(j, i) * x_i.
struct FeatureMap {
    std::size_t n_angles = 0;
    std::size_t n_features = 0;
    std::vector<double> weights; // row-major n_angles x n_features
    std::vector<double> offsets; // n_angles

    static FeatureMap identity(std::size_t d);
    bool is_identity() const;
    std::vector<double> apply(std::span<const double> features) const;

    bool operator==(const FeatureMap &) const = default;
};

enum class Replication { Temporal, Spatial };

/// A per-qubit gate program together with its replication layout.
///
/// `qubits` holds one block per logical qubit. Parameter indices inside the
/// blocks are block-local; replica j (a deeper layer under temporal
/// replication, an extra set of qubits under spatial replication) reads
/// parameter `index + j * block_parameters()`.
struct CircuitSpec {
    std::size_t n_features = 0;
    std::vector<std::vector<Gate>> qubits;
    Replication replication = Replication::Spatial;
    std::size_t repeats = 1;
    FeatureMap feature_map;

    std::size_t block_parameters() const;
    std::size_t parameter_count() const { return block_parameters() * repeats; }
    std::size_t output_count() const {
        return replication == Replication::Spatial ? qubits.size() * repeats : qubits.size();
    }
    /// Throws ConfigError describing the first violated invariant.
    void validate() const;

    /// |0>-H-Ry(x_q)-Rz(x_q)-Ry(theta_q) on each of d qubits, identity feature map.
    static CircuitSpec standard(std::size_t d, std::size_t repeats = 1,
                                Replication replication = Replication::Spatial);

    bool operator==(const CircuitSpec &) const = default;
};

struct NoiseModel {
    double p_readout = 0.0;
    double p_gate = 0.0;
    std::optional<std::uint64_t> shots; // nullopt: exact expectations

    bool is_identity() const { return p_readout == 0.0 && p_gate == 0.0 && !shots; }
    void validate() const;

    bool operator==(const NoiseModel &) const = default;
};

/// Estimate of <Z> from `shots` projective measurements: (n0 - n1) / shots.
double sample_expectation(const QubitState &state, std::uint64_t shots, Rng &rng);

/// Noisy measurement of one qubit that went through `gate_count` gates.
///
/// Gate noise is single-qubit depolarizing after every gate, which shrinks
/// the Bloch vector by (1 - p_gate) per gate and commutes with the
/// rotations. Readout flips each measured bit with probability p_readout.
/// With exact shots the expectation of that process is returned.
double noisy_expectation(const QubitState &state, std::size_t gate_count, const NoiseModel &model,
                         Rng &rng);

/// Outputs and d(outputs)/d(angles), row-major output_count x parameter_count.
struct CircuitJacobian {
    std::vector<double> outputs;
    std::vector<double> d_angles;
    std::size_t n_outputs = 0;
    std::size_t n_parameters = 0;

    double at(std::size_t output, std::size_t parameter) const {
        return d_angles[output * n_parameters + parameter];
    }
};

enum class GradientMode { Analytic, Shift };

/// A CircuitSpec expanded into its physical per-qubit programs.
class Circuit {
  public:
    explicit Circuit(CircuitSpec spec);

    const CircuitSpec &spec() const { return spec_; }
    std::size_t output_count() const { return program_.size(); }
    std::size_t parameter_count() const { return n_parameters_; }
    std::size_t feature_count() const { return spec_.n_features; }
    std::size_t gate_count(std::size_t output) const { return program_[output].size(); }

    std::vector<QubitState> states(std::span<const double> features,
                                   std::span<const double> angles) const;
    std::vector<double> run(std::span<const double> features, std::span<const double> angles) const;
    std::vector<double> run(std::span<const double> features, std::span<const double> angles,
                            const NoiseModel &noise, Rng &rng) const;

    /// Forward-mode differentiation through the 2x2 products.
    CircuitJacobian jacobian(std::span<const double> features, std::span<const double> angles) const;
    /// Parameter-shift rule, one pair of evaluations per gate occurrence.
    CircuitJacobian shift_jacobian(std::span<const double> features,
                                   std::span<const double> angles) const;
    CircuitJacobian jacobian(std::span<const double> features, std::span<const double> angles,
                             GradientMode mode) const {
        return mode == GradientMode::Analytic ? jacobian(features, angles)
                                              : shift_jacobian(features, angles);
    }
    /// d(outputs)/d(angle `parameter`) by parameter shift. ConfigError if no
    /// gate reads that parameter.
    std::vector<double> parameter_shift(std::span<const double> features,
                                        std::span<const double> angles, std::size_t parameter) const;

  private:
    void check_inputs(std::span<const double> features, std::span<const double> angles) const;
    double angle_of(const Gate &g, std::span<const double> encoded,
                    std::span<const double> angles) const;
    QubitState evolve(std::size_t output, std::span<const double> encoded,
                      std::span<const double> angles, std::size_t shifted_gate, double shift) const;

    CircuitSpec spec_;
    std::size_t n_parameters_ = 0;
    std::vector<std::vector<Gate>> program_; // physical qubits, global parameter indices
};

std::vector<double> run_circuit(const CircuitSpec &spec, std::span<const double> features,
                                std::span<const double> angles);

/// d<Z>_o/d theta_q for every output o, by the parameter-shift rule.
std::vector<double> grad_angles(const CircuitSpec &spec, std::span<const double> features,
                                std::span<const double> angles, std::size_t q);

} // namespace svqc

#endif
