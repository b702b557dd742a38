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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "svqc/error.hpp"

using namespace svqc;

namespace {

constexpr double kPi = std::numbers::pi;

/// Random product circuit: 1-4 qubits, 1-6 gates each, mixed angle sources.
CircuitSpec random_spec(Rng &rng, std::size_t d) {
    std::uniform_int_distribution<int> kinds(0, 3), sources(0, 2), len(1, 6);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    CircuitSpec spec;
    spec.n_features = d;
    spec.feature_map = FeatureMap::identity(d);
    std::size_t next_param = 0;
    for (std::size_t q = 0; q < d; ++q) {
        std::vector<Gate> gates;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            const auto kind = static_cast<GateKind>(kinds(rng));
            if (kind == GateKind::H) {
                gates.push_back(Gate::h());
                continue;
            }
            switch (sources(rng)) {
            case 0:
                gates.push_back(Gate::constant(kind, angle(rng)));
                break;
            case 1:
                gates.push_back(Gate::feature(kind, q));
                break;
            default:
                gates.push_back(Gate::parameter(kind, next_param++));
            }
        }
        spec.qubits.push_back(gates);
    }
    // Every spec gets at least one trainable gate.
    spec.qubits.back().push_back(Gate::parameter(GateKind::Ry, next_param++));
    return spec;
}

/// Oracle: evaluate one physical qubit of `spec` by explicit matrix products.
double oracle_output(const CircuitSpec &spec, std::size_t qubit, const std::vector<double> &x,
                     const std::vector<double> &theta) {
    std::vector<oracle::M2> mats;
    for (const auto &g : spec.qubits[qubit]) {
        double a = 0.0;
        if (g.source == AngleSource::Constant)
            a = g.value;
        else if (g.source == AngleSource::Feature)
            a = x[g.index];
        else
            a = theta[g.index];
        switch (g.kind) {
        case GateKind::H:
            mats.push_back(oracle::hadamard());
            break;
        case GateKind::Rx:
            mats.push_back(oracle::rx(a));
            break;
        case GateKind::Ry:
            mats.push_back(oracle::ry(a));
            break;
        case GateKind::Rz:
            mats.push_back(oracle::rz(a));
            break;
        }
    }
    return oracle::z_of(mats);
}

std::vector<double> random_vector(Rng &rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto &e : v) e = u(rng);
    return v;
}

} // namespace

TEST(QuantumGates, HadamardOnZero) {
    const auto s = apply_gate(QubitState::zero(), GateKind::H);
    EXPECT_NEAR(s.amp0.real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.amp1.real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(expectation_z(s), 0.0, 1e-15);
}

TEST(QuantumGates, RyHalfTurnFlips) {
    const auto s = apply_gate(QubitState::zero(), GateKind::Ry, kPi);
    EXPECT_NEAR(std::abs(s.amp0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amp1), 1.0, 1e-15);
}

TEST(QuantumGates, RzKeepsPopulations) {
    for (double phi : {-3.0, -0.5, 0.0, 0.7, 2.9, 10.0}) {
        const auto s = apply_gate(QubitState::zero(), GateKind::Rz, phi);
        EXPECT_NEAR(std::norm(s.amp0), 1.0, 1e-15);
    }
}

TEST(QuantumGates, ExpectationOfBasisStates) {
    EXPECT_EQ(expectation_z(QubitState::zero()), 1.0);
    EXPECT_EQ(expectation_z(QubitState::one()), -1.0);
}

TEST(QuantumGates, NonFiniteAngleRejected) {
    EXPECT_THROW(apply_gate(QubitState::zero(), GateKind::Rx, std::numeric_limits<double>::quiet_NaN()),
                 InvalidInputError);
    EXPECT_THROW(apply_gate(QubitState::zero(), GateKind::Rz, std::numeric_limits<double>::infinity()),
                 InvalidInputError);
}

TEST(QuantumGates, EveryGateIsUnitary) {
    Rng rng(3);
    std::uniform_real_distribution<double> u(-20, 20);
    for (int trial = 0; trial < 200; ++trial) {
        for (auto kind : {GateKind::H, GateKind::Rx, GateKind::Ry, GateKind::Rz}) {
            const Matrix2 m = gate_matrix(kind, u(rng));
            // M^dagger M = I
            const Complex a = std::conj(m.m00) * m.m00 + std::conj(m.m10) * m.m10;
            const Complex b = std::conj(m.m00) * m.m01 + std::conj(m.m10) * m.m11;
            const Complex d = std::conj(m.m01) * m.m01 + std::conj(m.m11) * m.m11;
            EXPECT_NEAR(std::abs(a - 1.0), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(b), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(d - 1.0), 0.0, 1e-12);
        }
    }
}

TEST(QuantumGates, NormPreservedOverLongSequences) {
    Rng rng(11);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> angle(-10, 10);
    for (int trial = 0; trial < 100; ++trial) {
        QubitState s;
        for (int i = 0; i < 200; ++i) {
            s = apply_gate(s, static_cast<GateKind>(kind(rng)), angle(rng));
            ASSERT_LT(std::abs(s.norm_squared() - 1.0), 1e-12);
            const double z = expectation_z(s);
            ASSERT_LE(z, 1.0 + 1e-12);
            ASSERT_GE(z, -1.0 - 1e-12);
        }
    }
}

TEST(Circuit, StandardCircuitAtZeroFeatures) {
    const auto spec = CircuitSpec::standard(4);
    const std::vector<double> x(4, 0.0);
    for (double z : run_circuit(spec, x, std::vector<double>(4, 0.0))) {
        EXPECT_NEAR(z, 0.0, 1e-15);
    }
    for (double z : run_circuit(spec, x, std::vector<double>(4, kPi / 2))) {
        EXPECT_NEAR(z, oracle::standard_qubit(0.0, kPi / 2), 1e-15);
        EXPECT_NEAR(z, -1.0, 1e-12);
    }
}

TEST(Circuit, StandardCircuitMatchesMatrixProductOracle) {
    Rng rng(5);
    const auto spec = CircuitSpec::standard(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = random_vector(rng, 4, -3, 3);
        const auto theta = random_vector(rng, 4, 0, 2 * kPi);
        const auto out = run_circuit(spec, x, theta);
        for (std::size_t q = 0; q < 4; ++q) {
            EXPECT_NEAR(out[q], oracle::standard_qubit(x[q], theta[q]), 1e-12);
        }
    }
}

TEST(Circuit, RandomCircuitsMatchOracle) {
    Rng rng(17);
    std::uniform_int_distribution<std::size_t> dims(1, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto spec = random_spec(rng, dims(rng));
        const auto x = random_vector(rng, spec.n_features, -4, 4);
        const auto theta = random_vector(rng, spec.parameter_count(), -kPi, kPi);
        const auto out = run_circuit(spec, x, theta);
        ASSERT_EQ(out.size(), spec.n_features);
        for (std::size_t q = 0; q < out.size(); ++q) {
            ASSERT_NEAR(out[q], oracle_output(spec, q, x, theta), 1e-12);
        }
    }
}

TEST(Circuit, DimensionMismatchIsConfigError) {
    const auto spec = CircuitSpec::standard(4);
    EXPECT_THROW(run_circuit(spec, std::vector<double>(3), std::vector<double>(4)), ConfigError);
    EXPECT_THROW(run_circuit(spec, std::vector<double>(4), std::vector<double>(5)), ConfigError);
}

TEST(Circuit, ValidationCatchesBadIndices) {
    auto spec = CircuitSpec::standard(2);
    spec.qubits[1][1].index = 7;
    EXPECT_THROW(spec.validate(), ConfigError);
    auto spec2 = CircuitSpec::standard(2);
    spec2.repeats = 0;
    EXPECT_THROW(spec2.validate(), ConfigError);
}

TEST(Circuit, ReplicationOfOneIsIdentical) {
    Rng rng(23);
    auto temporal = CircuitSpec::standard(6, 1, Replication::Temporal);
    auto spatial = CircuitSpec::standard(6, 1, Replication::Spatial);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_vector(rng, 6, -2, 2);
        const auto theta = random_vector(rng, 6, 0, 2 * kPi);
        EXPECT_EQ(run_circuit(temporal, x, theta), run_circuit(spatial, x, theta));
    }
}

TEST(Circuit, SpatialReplicationLayout) {
    const auto spec = CircuitSpec::standard(8, 3, Replication::Spatial);
    Circuit c(spec);
    EXPECT_EQ(c.output_count(), 24u);
    EXPECT_EQ(c.parameter_count(), 24u);
    Rng rng(2);
    const auto x = random_vector(rng, 8, -1, 1);
    const auto theta = random_vector(rng, 24, 0, 2 * kPi);
    const auto out = c.run(x, theta);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t q = 0; q < 8; ++q) {
            EXPECT_NEAR(out[r * 8 + q], oracle::standard_qubit(x[q], theta[r * 8 + q]), 1e-12);
        }
    }
}

TEST(Circuit, TemporalReplicationLayout) {
    const auto spec = CircuitSpec::standard(2, 3, Replication::Temporal);
    Circuit c(spec);
    EXPECT_EQ(c.output_count(), 2u);
    EXPECT_EQ(c.parameter_count(), 6u);
    const std::vector<double> x{0.3, -0.8};
    const std::vector<double> theta{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const auto out = c.run(x, theta);
    for (std::size_t q = 0; q < 2; ++q) {
        std::vector<oracle::M2> mats;
        for (std::size_t r = 0; r < 3; ++r) {
            for (const auto &m : {oracle::hadamard(), oracle::ry(x[q]), oracle::rz(x[q]), oracle::ry(theta[r * 2 + q])}) {
                mats.push_back(m);
            }
        }
        EXPECT_NEAR(out[q], oracle::z_of(mats), 1e-12);
    }
}

TEST(Circuit, AffineFeatureMap) {
    // One qubit, H-Rz-Ry-Rz encoding three mixed angles, Rx trainable.
    CircuitSpec spec;
    spec.n_features = 4;
    spec.feature_map.n_angles = 3;
    spec.feature_map.n_features = 4;
    spec.feature_map.weights = {0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 0};
    spec.feature_map.offsets = {0.0, 0.1, 0.0};
    spec.qubits = {{Gate::h(), Gate::feature(GateKind::Rz, 0), Gate::feature(GateKind::Ry, 1),
                    Gate::feature(GateKind::Rz, 2), Gate::parameter(GateKind::Rx, 0)}};
    const std::vector<double> x{0.2, -0.4, 0.05, 0.3};
    const std::vector<double> theta{1.1};
    const double expected = oracle::z_of({oracle::hadamard(), oracle::rz(x[2] + x[3]), oracle::ry(x[1] + 0.1),
                                          oracle::rz(x[0]), oracle::rx(theta[0])});
    EXPECT_NEAR(run_circuit(spec, x, theta)[0], expected, 1e-12);
}

// --- derivatives ---------------------------------------------------------

TEST(Gradients, StandardCircuitDerivativeAtOrigin) {
    // Frozen with the finite-difference oracle: d<Z>/dtheta at x = 0, theta = 0 is -1.
    const double fd = oracle::central_difference(
        [](const std::vector<double> &t) { return oracle::standard_qubit(0.0, t[0]); }, {0.0}, 0);
    EXPECT_NEAR(fd, -1.0, 1e-9);
    const auto spec = CircuitSpec::standard(1);
    EXPECT_NEAR(grad_angles(spec, std::vector<double>{0.0}, std::vector<double>{0.0}, 0)[0], -1.0, 1e-12);
    Circuit c(spec);
    EXPECT_NEAR(c.jacobian(std::vector<double>{0.0}, std::vector<double>{0.0}).at(0, 0), -1.0, 1e-12);
}

TEST(Gradients, TrailingRzHasZeroDerivative) {
    CircuitSpec spec;
    spec.n_features = 1;
    spec.feature_map = FeatureMap::identity(1);
    spec.qubits = {{Gate::h(), Gate::feature(GateKind::Ry, 0), Gate::parameter(GateKind::Rz, 0)}};
    const std::vector<double> x{0.4}, theta{0.9};
    EXPECT_NEAR(grad_angles(spec, x, theta, 0)[0], 0.0, 1e-15);
    EXPECT_NEAR(Circuit(spec).jacobian(x, theta).at(0, 0), 0.0, 1e-15);
}

TEST(Gradients, NonParameterIndexIsConfigError) {
    const auto spec = CircuitSpec::standard(2);
    const std::vector<double> x{0.1, 0.2}, theta{0.3, 0.4};
    EXPECT_THROW(grad_angles(spec, x, theta, 2), ConfigError);
    CircuitSpec gap = spec;
    gap.qubits[1][3].index = 2; // parameter 1 is now unused
    EXPECT_THROW(grad_angles(gap, x, std::vector<double>{0.3, 0.4, 0.5}, 1), ConfigError);
}

TEST(Gradients, ShiftAnalyticAndFiniteDifferenceAgree) {
    Rng rng(41);
    std::uniform_int_distribution<std::size_t> dims(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto spec = random_spec(rng, dims(rng));
        Circuit c(spec);
        const auto x = random_vector(rng, spec.n_features, -3, 3);
        const auto theta = random_vector(rng, spec.parameter_count(), -kPi, kPi);
        const auto analytic = c.jacobian(x, theta);
        const auto shift = c.shift_jacobian(x, theta);
        for (std::size_t p = 0; p < c.parameter_count(); ++p) {
            for (std::size_t o = 0; o < c.output_count(); ++o) {
                const double fd = oracle::central_difference(
                    [&](const std::vector<double> &t) { return oracle_output(spec, o, x, t); }, theta, p);
                ASSERT_NEAR(shift.at(o, p), fd, 1e-6);
                ASSERT_NEAR(analytic.at(o, p), fd, 1e-6);
                ASSERT_NEAR(analytic.at(o, p), shift.at(o, p), 1e-12);
            }
        }
    }
}

TEST(Gradients, SharedParameterAcrossGates) {
    CircuitSpec spec;
    spec.n_features = 1;
    spec.feature_map = FeatureMap::identity(1);
    spec.qubits = {{Gate::h(), Gate::parameter(GateKind::Ry, 0), Gate::feature(GateKind::Rz, 0),
                    Gate::parameter(GateKind::Rx, 0)}};
    const std::vector<double> x{0.7}, theta{0.45};
    const double fd = oracle::central_difference(
        [&](const std::vector<double> &t) {
            return oracle::z_of({oracle::hadamard(), oracle::ry(t[0]), oracle::rz(x[0]), oracle::rx(t[0])});
        },
        theta, 0);
    Circuit c(spec);
    EXPECT_NEAR(c.jacobian(x, theta).at(0, 0), fd, 1e-8);
    EXPECT_NEAR(c.parameter_shift(x, theta, 0)[0], fd, 1e-8);
}

// --- measurement ---------------------------------------------------------

TEST(Sampling, BasisStateIsDeterministic) {
    Rng rng(1);
    for (std::uint64_t shots : {1ull, 7ull, 1024ull}) {
        EXPECT_EQ(sample_expectation(QubitState::zero(), shots, rng), 1.0);
        EXPECT_EQ(sample_expectation(QubitState::one(), shots, rng), -1.0);
    }
}

TEST(Sampling, SingleShotIsPlusMinusOne) {
    Rng rng(9);
    const auto plus = apply_gate(QubitState::zero(), GateKind::H);
    for (int i = 0; i < 100; ++i) {
        const double e = sample_expectation(plus, 1, rng);
        EXPECT_TRUE(e == 1.0 || e == -1.0);
    }
}

TEST(Sampling, ZeroShotsRejected) {
    Rng rng(1);
    EXPECT_THROW(sample_expectation(QubitState::zero(), 0, rng), InvalidInputError);
    NoiseModel bad;
    bad.shots = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Sampling, MillionShotsNearZeroForPlusState) {
    // sigma = 1/sqrt(1e6) = 1e-3, so 0.005 is a 5 sigma band.
    const auto plus = apply_gate(QubitState::zero(), GateKind::H);
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        inside += std::abs(sample_expectation(plus, 1'000'000, rng)) < 0.005;
    }
    EXPECT_GE(inside, 99);
}

TEST(Noise, IdentityModelIsExact) {
    NoiseModel none;
    EXPECT_TRUE(none.is_identity());
    Rng rng(4);
    const auto s = apply_gate(apply_gate(QubitState::zero(), GateKind::H), GateKind::Ry, 0.3);
    EXPECT_DOUBLE_EQ(noisy_expectation(s, 2, none, rng), expectation_z(s));
}

TEST(Noise, ZeroReadoutMatchesPlainSampling) {
    const auto s = apply_gate(QubitState::zero(), GateKind::Ry, 1.2);
    NoiseModel model;
    model.shots = 256;
    Rng a(77), b(77);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(noisy_expectation(s, 1, model, a), sample_expectation(s, 256, b));
    }
}

TEST(Noise, HalfReadoutErrorErasesSignal) {
    NoiseModel model;
    model.p_readout = 0.5;
    Rng rng(5);
    EXPECT_NEAR(noisy_expectation(QubitState::zero(), 1, model, rng), 0.0, 1e-15);
    model.shots = 100000;
    double sum = 0.0;
    for (int i = 0; i < 100; ++i) sum += noisy_expectation(QubitState::one(), 1, model, rng);
    // mean of 100 estimates, each with sigma 1/sqrt(1e5)
    EXPECT_NEAR(sum / 100, 0.0, 4 * std::sqrt(1.0 / 1e7));
}

TEST(Noise, DepolarizingShrinksPerGate) {
    NoiseModel model;
    model.p_gate = 0.01;
    Rng rng(1);
    EXPECT_NEAR(noisy_expectation(QubitState::zero(), 3, model, rng), std::pow(0.99, 3), 1e-15);
}

namespace {

// Mean of `reps` estimates and the standard error implied by a binomial
// estimator of the given exact mean.
std::pair<double, double> mean_and_sigma(const std::function<double()> &draw, double exact, std::uint64_t shots,
                                         int reps) {
    double sum = 0.0;
    for (int i = 0; i < reps; ++i) sum += draw();
    const double sigma = std::sqrt((1.0 - exact * exact) / static_cast<double>(shots) / reps);
    return {sum / reps, sigma};
}

} // namespace

TEST(Sampling, EstimatorIsUnbiased) {
    Rng rng(2026);
    for (double angle : {0.3, 1.1, 2.0, 2.9}) {
        const auto s = apply_gate(QubitState::zero(), GateKind::Ry, angle);
        const double exact = oracle::z_of({oracle::ry(angle)});
        const auto [mean, sigma] =
            mean_and_sigma([&] { return sample_expectation(s, 1024, rng); }, exact, 1024, 10000);
        EXPECT_LT(std::abs(mean - exact), 4 * sigma) << "angle " << angle;
    }
}

TEST(Noise, ReadoutErrorScalesMean) {
    constexpr double p = 0.0116;
    NoiseModel model;
    model.p_readout = p;
    model.shots = 1024;
    Rng rng(6);
    for (double angle : {0.0, 0.7, 1.9, 3.0}) {
        const auto s = apply_gate(apply_gate(QubitState::zero(), GateKind::H), GateKind::Ry, angle);
        const double exact = oracle::z_of({oracle::hadamard(), oracle::ry(angle)});
        const double flipped = (1 - 2 * p) * exact;
        const auto [mean, sigma] =
            mean_and_sigma([&] { return noisy_expectation(s, 2, model, rng); }, flipped, 1024, 10000);
        EXPECT_LT(std::abs(mean - flipped), 3 * sigma) << "angle " << angle;
    }
}
