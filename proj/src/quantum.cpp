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

#include "svqc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "svqc/error.hpp"

namespace svqc {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_finite(double angle) {
    if (!std::isfinite(angle)) {
        throw InvalidInputError("gate angle is not finite");
    }
}

} // namespace

Matrix2 gate_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
    case GateKind::H: {
        const double r = std::numbers::sqrt2 / 2.0;
        return {r, r, r, -r};
    }
    case GateKind::Rx:
        return {c, -kI * s, -kI * s, c};
    case GateKind::Ry:
        return {c, -s, s, c};
    case GateKind::Rz:
        return {Complex{c, -s}, 0.0, 0.0, Complex{c, s}};
    }
    return {1.0, 0.0, 0.0, 1.0};
}

Matrix2 gate_matrix_derivative(GateKind kind, double angle) {
    const double c = 0.5 * std::cos(angle / 2.0);
    const double s = 0.5 * std::sin(angle / 2.0);
    switch (kind) {
    case GateKind::H:
        return {0.0, 0.0, 0.0, 0.0};
    case GateKind::Rx:
        return {-s, -kI * c, -kI * c, -s};
    case GateKind::Ry:
        return {-s, -c, c, -s};
    case GateKind::Rz:
        return {Complex{-s, -c}, 0.0, 0.0, Complex{-s, c}};
    }
    return {0.0, 0.0, 0.0, 0.0};
}

QubitState apply_matrix(const Matrix2 &m, const QubitState &state) {
    return {m.m00 * state.amp0 + m.m01 * state.amp1, m.m10 * state.amp0 + m.m11 * state.amp1};
}

QubitState apply_gate(const QubitState &state, GateKind kind, double angle) {
    require_finite(angle);
    return apply_matrix(gate_matrix(kind, angle), state);
}

double expectation_z(const QubitState &state) {
    return std::norm(state.amp0) - std::norm(state.amp1);
}

// ---------------------------------------------------------------------------
// FeatureMap

FeatureMap FeatureMap::identity(std::size_t d) {
    FeatureMap map;
    map.n_angles = d;
    map.n_features = d;
    map.weights.assign(d * d, 0.0);
    map.offsets.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        map.weights[i * d + i] = 1.0;
    }
    return map;
}

bool FeatureMap::is_identity() const { return *this == identity(n_features); }

std::vector<double> FeatureMap::apply(std::span<const double> features) const {
    if (features.size() != n_features) {
        throw ConfigError("feature vector has length " + std::to_string(features.size()) +
                          ", feature map expects " + std::to_string(n_features));
    }
    std::vector<double> angles(offsets);
    for (std::size_t j = 0; j < n_angles; ++j) {
        for (std::size_t i = 0; i < n_features; ++i) {
            angles[j] += weights[j * n_features + i] * features[i];
        }
    }
    return angles;
}

// ---------------------------------------------------------------------------
// CircuitSpec

std::size_t CircuitSpec::block_parameters() const {
    std::size_t count = 0;
    for (const auto &block : qubits) {
        for (const auto &g : block) {
            if (g.source == AngleSource::Parameter) {
                count = std::max(count, g.index + 1);
            }
        }
    }
    return count;
}

void CircuitSpec::validate() const {
    if (qubits.empty()) {
        throw ConfigError("circuit has no qubits");
    }
    if (repeats < 1) {
        throw ConfigError("replication count must be >= 1");
    }
    if (feature_map.n_features != n_features) {
        throw ConfigError("feature map input size " + std::to_string(feature_map.n_features) +
                          " differs from state dimension " + std::to_string(n_features));
    }
    if (feature_map.weights.size() != feature_map.n_angles * feature_map.n_features ||
        feature_map.offsets.size() != feature_map.n_angles) {
        throw ConfigError("feature map storage does not match its shape");
    }
    for (std::size_t q = 0; q < qubits.size(); ++q) {
        for (const auto &g : qubits[q]) {
            if (g.kind == GateKind::H && g.source != AngleSource::Constant) {
                throw ConfigError("H gate on qubit " + std::to_string(q) + " cannot take an angle source");
            }
            if (g.source == AngleSource::Feature && g.index >= feature_map.n_angles) {
                throw ConfigError("qubit " + std::to_string(q) + " reads encoding angle " +
                                  std::to_string(g.index) + " but only " +
                                  std::to_string(feature_map.n_angles) + " exist");
            }
            if (g.source == AngleSource::Constant && !std::isfinite(g.value)) {
                throw ConfigError("constant gate angle on qubit " + std::to_string(q) + " is not finite");
            }
        }
    }
}

CircuitSpec CircuitSpec::standard(std::size_t d, std::size_t repeats, Replication replication) {
    CircuitSpec spec;
    spec.n_features = d;
    spec.replication = replication;
    spec.repeats = repeats;
    spec.feature_map = FeatureMap::identity(d);
    spec.qubits.reserve(d);
    for (std::size_t q = 0; q < d; ++q) {
        spec.qubits.push_back({Gate::h(), Gate::feature(GateKind::Ry, q), Gate::feature(GateKind::Rz, q),
                               Gate::parameter(GateKind::Ry, q)});
    }
    return spec;
}

void NoiseModel::validate() const {
    if (!(p_readout >= 0.0 && p_readout <= 0.5)) {
        throw ConfigError("readout flip probability must lie in [0, 0.5]");
    }
    if (!(p_gate >= 0.0 && p_gate <= 1.0)) {
        throw ConfigError("gate error probability must lie in [0, 1]");
    }
    if (shots && *shots == 0) {
        throw ConfigError("shot count must be positive");
    }
}

// ---------------------------------------------------------------------------
// Measurement

namespace {

double count_estimate(std::uint64_t shots, double p_one, Rng &rng) {
    p_one = std::clamp(p_one, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> ones(shots, p_one);
    const auto n1 = static_cast<double>(ones(rng));
    const auto n = static_cast<double>(shots);
    return (n - 2.0 * n1) / n;
}

} // namespace

double sample_expectation(const QubitState &state, std::uint64_t shots, Rng &rng) {
    if (shots == 0) {
        throw InvalidInputError("shot count must be positive");
    }
    return count_estimate(shots, std::norm(state.amp1) / state.norm_squared(), rng);
}

double noisy_expectation(const QubitState &state, std::size_t gate_count, const NoiseModel &model,
                         Rng &rng) {
    const double shrink = std::pow(1.0 - model.p_gate, static_cast<double>(gate_count));
    const double z = shrink * expectation_z(state);
    // Probability that the reported bit is 1 after depolarizing and readout flips.
    const double p_one = 0.5 * (1.0 - z);
    const double p_reported = p_one * (1.0 - model.p_readout) + (1.0 - p_one) * model.p_readout;
    if (!model.shots) {
        return 1.0 - 2.0 * p_reported;
    }
    if (*model.shots == 0) {
        throw InvalidInputError("shot count must be positive");
    }
    return count_estimate(*model.shots, p_reported, rng);
}

// ---------------------------------------------------------------------------
// Circuit

Circuit::Circuit(CircuitSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const std::size_t block = spec_.block_parameters();
    n_parameters_ = spec_.parameter_count();
    auto shifted = [block](Gate g, std::size_t replica) {
        if (g.source == AngleSource::Parameter) {
            g.index += replica * block;
        }
        return g;
    };
    if (spec_.replication == Replication::Spatial) {
        for (std::size_t r = 0; r < spec_.repeats; ++r) {
            for (const auto &qubit : spec_.qubits) {
                std::vector<Gate> program;
                for (const auto &g : qubit) {
                    program.push_back(shifted(g, r));
                }
                program_.push_back(std::move(program));
            }
        }
    } else {
        for (const auto &qubit : spec_.qubits) {
            std::vector<Gate> program;
            for (std::size_t r = 0; r < spec_.repeats; ++r) {
                for (const auto &g : qubit) {
                    program.push_back(shifted(g, r));
                }
            }
            program_.push_back(std::move(program));
        }
    }
}

void Circuit::check_inputs(std::span<const double> features, std::span<const double> angles) const {
    if (features.size() != spec_.n_features) {
        throw ConfigError("circuit expects " + std::to_string(spec_.n_features) + " features, got " +
                          std::to_string(features.size()));
    }
    if (angles.size() != n_parameters_) {
        throw ConfigError("circuit expects " + std::to_string(n_parameters_) + " angles, got " +
                          std::to_string(angles.size()));
    }
}

double Circuit::angle_of(const Gate &g, std::span<const double> encoded,
                         std::span<const double> angles) const {
    switch (g.source) {
    case AngleSource::Constant:
        return g.value;
    case AngleSource::Feature:
        return encoded[g.index];
    case AngleSource::Parameter:
        return angles[g.index];
    }
    return 0.0;
}

QubitState Circuit::evolve(std::size_t output, std::span<const double> encoded,
                           std::span<const double> angles, std::size_t shifted_gate, double shift) const {
    QubitState state;
    const auto &program = program_[output];
    for (std::size_t i = 0; i < program.size(); ++i) {
        double angle = angle_of(program[i], encoded, angles);
        if (i == shifted_gate) {
            angle += shift;
        }
        state = apply_gate(state, program[i].kind, angle);
    }
    return state;
}

std::vector<QubitState> Circuit::states(std::span<const double> features,
                                        std::span<const double> angles) const {
    check_inputs(features, angles);
    const auto encoded = spec_.feature_map.apply(features);
    std::vector<QubitState> out;
    out.reserve(program_.size());
    for (std::size_t o = 0; o < program_.size(); ++o) {
        out.push_back(evolve(o, encoded, angles, program_[o].size(), 0.0));
    }
    return out;
}

std::vector<double> Circuit::run(std::span<const double> features, std::span<const double> angles) const {
    const auto qs = states(features, angles);
    std::vector<double> out(qs.size());
    std::transform(qs.begin(), qs.end(), out.begin(), expectation_z);
    return out;
}

std::vector<double> Circuit::run(std::span<const double> features, std::span<const double> angles,
                                 const NoiseModel &noise, Rng &rng) const {
    if (noise.is_identity()) {
        return run(features, angles);
    }
    const auto qs = states(features, angles);
    std::vector<double> out(qs.size());
    for (std::size_t o = 0; o < qs.size(); ++o) {
        out[o] = noisy_expectation(qs[o], program_[o].size(), noise, rng);
    }
    return out;
}

CircuitJacobian Circuit::jacobian(std::span<const double> features, std::span<const double> angles) const {
    check_inputs(features, angles);
    const auto encoded = spec_.feature_map.apply(features);
    CircuitJacobian jac;
    jac.n_outputs = program_.size();
    jac.n_parameters = n_parameters_;
    jac.outputs.resize(jac.n_outputs);
    jac.d_angles.assign(jac.n_outputs * jac.n_parameters, 0.0);

    std::vector<std::size_t> local;   // distinct parameters read by this qubit
    std::vector<QubitState> tangents; // d psi / d theta_local[k]
    for (std::size_t o = 0; o < program_.size(); ++o) {
        const auto &program = program_[o];
        local.clear();
        for (const auto &g : program) {
            if (g.source == AngleSource::Parameter &&
                std::find(local.begin(), local.end(), g.index) == local.end()) {
                local.push_back(g.index);
            }
        }
        tangents.assign(local.size(), QubitState{0.0, 0.0});
        QubitState psi;
        for (const auto &g : program) {
            const double angle = angle_of(g, encoded, angles);
            require_finite(angle);
            const Matrix2 m = gate_matrix(g.kind, angle);
            for (std::size_t k = 0; k < local.size(); ++k) {
                QubitState t = apply_matrix(m, tangents[k]);
                if (g.source == AngleSource::Parameter && g.index == local[k]) {
                    const QubitState dm = apply_matrix(gate_matrix_derivative(g.kind, angle), psi);
                    t.amp0 += dm.amp0;
                    t.amp1 += dm.amp1;
                }
                tangents[k] = t;
            }
            psi = apply_matrix(m, psi);
        }
        jac.outputs[o] = expectation_z(psi);
        for (std::size_t k = 0; k < local.size(); ++k) {
            const double d = 2.0 * (std::real(std::conj(psi.amp0) * tangents[k].amp0) -
                                    std::real(std::conj(psi.amp1) * tangents[k].amp1));
            jac.d_angles[o * jac.n_parameters + local[k]] = d;
        }
    }
    return jac;
}

CircuitJacobian Circuit::shift_jacobian(std::span<const double> features,
                                        std::span<const double> angles) const {
    check_inputs(features, angles);
    const auto encoded = spec_.feature_map.apply(features);
    constexpr double kShift = std::numbers::pi / 2.0;
    CircuitJacobian jac;
    jac.n_outputs = program_.size();
    jac.n_parameters = n_parameters_;
    jac.outputs.resize(jac.n_outputs);
    jac.d_angles.assign(jac.n_outputs * jac.n_parameters, 0.0);
    for (std::size_t o = 0; o < program_.size(); ++o) {
        const auto &program = program_[o];
        jac.outputs[o] = expectation_z(evolve(o, encoded, angles, program.size(), 0.0));
        for (std::size_t i = 0; i < program.size(); ++i) {
            if (program[i].source != AngleSource::Parameter) {
                continue;
            }
            const double plus = expectation_z(evolve(o, encoded, angles, i, kShift));
            const double minus = expectation_z(evolve(o, encoded, angles, i, -kShift));
            jac.d_angles[o * jac.n_parameters + program[i].index] += 0.5 * (plus - minus);
        }
    }
    return jac;
}

std::vector<double> Circuit::parameter_shift(std::span<const double> features,
                                             std::span<const double> angles, std::size_t parameter) const {
    check_inputs(features, angles);
    if (parameter >= n_parameters_) {
        throw ConfigError("parameter index " + std::to_string(parameter) + " out of range");
    }
    const auto encoded = spec_.feature_map.apply(features);
    constexpr double kShift = std::numbers::pi / 2.0;
    std::vector<double> grad(program_.size(), 0.0);
    bool found = false;
    for (std::size_t o = 0; o < program_.size(); ++o) {
        const auto &program = program_[o];
        for (std::size_t i = 0; i < program.size(); ++i) {
            if (program[i].source != AngleSource::Parameter || program[i].index != parameter) {
                continue;
            }
            found = true;
            const double plus = expectation_z(evolve(o, encoded, angles, i, kShift));
            const double minus = expectation_z(evolve(o, encoded, angles, i, -kShift));
            grad[o] += 0.5 * (plus - minus);
        }
    }
    if (!found) {
        throw ConfigError("no rotation gate reads parameter " + std::to_string(parameter));
    }
    return grad;
}

std::vector<double> run_circuit(const CircuitSpec &spec, std::span<const double> features,
                                std::span<const double> angles) {
    return Circuit(spec).run(features, angles);
}

std::vector<double> grad_angles(const CircuitSpec &spec, std::span<const double> features,
                                std::span<const double> angles, std::size_t q) {
    return Circuit(spec).parameter_shift(features, angles, q);
}

} // namespace svqc
