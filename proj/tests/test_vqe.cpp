// Copyright 2026 The qobs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qobs/vqe.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qobs/error.hpp"

using namespace qobs;

namespace {

double min_eigenvalue(const PauliSum &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(oracle::dense(h));
    return solver.eigenvalues().minCoeff();
}

} // namespace

TEST(Ansatz, ParameterCounts) {
    EXPECT_EQ(Ansatz::single_ry().parameter_count(), 1U);
    EXPECT_EQ(Ansatz::ladder(2, 1).parameter_count(), 4U);
    EXPECT_EQ(Ansatz::ladder(3, 2).parameter_count(), 9U);
    EXPECT_EQ(Ansatz::ladder(4, 0).parameter_count(), 4U);
}

TEST(Ansatz, SingleRyReproducesReferenceState) {
    const double theta[] = {-3.700868};
    const auto s = prepare(prepare_ansatz(Ansatz::single_ry(), theta));
    const auto ref = StateVector::from_amplitudes({0.2759, 0.9611});
    // Equal up to the global sign; the reference amplitudes carry four digits.
    EXPECT_NEAR(std::abs(inner_product(s, ref)) / ref.norm(), 1.0, 1e-7);
    EXPECT_LT(s[0].real(), 0.0);

    const double zero[] = {0.0};
    const auto z = prepare(prepare_ansatz(Ansatz::single_ry(), zero));
    EXPECT_DOUBLE_EQ(z[0].real(), 1.0);
}

TEST(Ansatz, LadderAtZeroIsAllZeros) {
    const std::vector<double> params(6, 0.0);
    const auto s = prepare(prepare_ansatz(Ansatz::ladder(3, 1), params));
    EXPECT_DOUBLE_EQ(s[0].real(), 1.0);
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
}

TEST(Ansatz, LadderStatesAreReal) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> params(Ansatz::ladder(3, 2).parameter_count());
    for (auto &p : params) {
        p = u(rng);
    }
    const auto s = prepare(prepare_ansatz(Ansatz::ladder(3, 2), params));
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        EXPECT_NEAR(s[i].imag(), 0.0, 1e-15);
    }
}

TEST(Ansatz, Errors) {
    const double two[] = {0.1, 0.2};
    EXPECT_THROW((void)prepare_ansatz(Ansatz::single_ry(), two), SizeMismatch);
    EXPECT_THROW((void)prepare_ansatz(Ansatz{2, SingleRY{}}, std::span<const double>(two, 1)),
                 InvalidArgument);
}

TEST(Energy, Examples) {
    const auto yy = parse_pauli_sum("0.5 Y0 Y1");
    // RY(pi/2) on both qubits then CNOT reaches an eigenstate with <YY> = -1.
    const double singlet[] = {std::numbers::pi / 2, 0.0, 0.0, std::numbers::pi};
    const double e = energy(yy, Ansatz::ladder(2, 1), singlet, ExactEnergy{});
    EXPECT_GE(e, -0.5 - 1e-12);

    const double pi[] = {std::numbers::pi};
    EXPECT_NEAR(energy(parse_pauli_sum("1.0 Z0"), Ansatz::single_ry(), pi, ExactEnergy{}), -1.0,
                1e-15);
    EXPECT_THROW((void)energy(yy, Ansatz::single_ry(), pi, ExactEnergy{}), SizeMismatch);
}

TEST(Energy, VariationalBound) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const auto h = oracle::random_pauli_sum(n, 6, rng);
        const auto ansatz = Ansatz::ladder(n, 2);
        std::vector<double> params(ansatz.parameter_count());
        for (auto &p : params) {
            p = u(rng);
        }
        EXPECT_GE(energy(h, ansatz, params, ExactEnergy{}), min_eigenvalue(h) - 1e-9);
    }
}

TEST(Energy, SampledModeIsUnbiasedAndSeeded) {
    const auto h = parse_pauli_sum("0.3 Z0\n-0.7 X0");
    const double theta[] = {1.1};
    const double exact = energy(h, Ansatz::single_ry(), theta, ExactEnergy{});
    const double a = energy(h, Ansatz::single_ry(), theta, SampledEnergy{20000, 4});
    const double b = energy(h, Ansatz::single_ry(), theta, SampledEnergy{20000, 4});
    EXPECT_EQ(a, b);
    // Independent per-term estimates: sigma <= sqrt(0.3^2 + 0.7^2) / sqrt(shots).
    EXPECT_NEAR(a, exact, 5 * std::sqrt(0.58 / 20000));
}

TEST(Minimize, SingleRyOnZ) {
    const auto h = parse_pauli_sum("1.0 Z0");
    const auto r = minimize(h, Ansatz::single_ry(), ExactEnergy{}, {}, 3);
    EXPECT_NEAR(r.energy, -1.0, 1e-6);
    EXPECT_TRUE(r.converged);
    const double wrapped = std::remainder(r.best_params[0] - std::numbers::pi, 2 * std::numbers::pi);
    EXPECT_NEAR(wrapped, 0.0, 2e-3);
}

TEST(Minimize, SingleRyOnRotatedAxis) {
    // E(t) = a cos t + b sin t has minimum -sqrt(a^2 + b^2).
    const auto h = parse_pauli_sum("0.6 Z0\n-0.8 X0");
    const auto r = minimize(h, Ansatz::single_ry(), ExactEnergy{}, {}, 4);
    EXPECT_NEAR(r.energy, -1.0, 1e-6);
}

TEST(Minimize, ToyYYHamiltonians) {
    for (const char *text : {"0.5 Y0 Y1", "-0.5 Y0 Y1"}) {
        const auto h = parse_pauli_sum(text);
        const auto r = minimize(h, Ansatz::ladder(2, 1), ExactEnergy{}, {}, 5);
        EXPECT_NEAR(r.energy, -0.5, 1e-3) << text;
        EXPECT_NEAR(min_eigenvalue(h), -0.5, 1e-12);
        EXPECT_NEAR(energy(h, Ansatz::ladder(2, 1), r.best_params, ExactEnergy{}), r.energy,
                    1e-15);
    }
}

TEST(Minimize, SampledToyHamiltonian) {
    const auto h = parse_pauli_sum("0.5 Y0 Y1");
    const std::uint64_t shots = 10000;
    const auto r = minimize(h, Ansatz::ladder(2, 1), SampledEnergy{shots, 0}, {}, 6);
    // Worst-case single-term shot spread: 0.5 / sqrt(shots).
    const double sigma = 0.5 / std::sqrt(static_cast<double>(shots));
    EXPECT_NEAR(r.energy, -0.5, 3 * sigma);
    EXPECT_NEAR(energy(h, Ansatz::ladder(2, 1), r.best_params, ExactEnergy{}), -0.5, 3 * sigma);
}

TEST(Minimize, DeterministicPerSeedAndSeedsDiffer) {
    const auto h = parse_pauli_sum("0.5 Y0 Y1\n0.2 Z0");
    const auto a = minimize(h, Ansatz::ladder(2, 1), ExactEnergy{}, {}, 7);
    const auto b = minimize(h, Ansatz::ladder(2, 1), ExactEnergy{}, {}, 7);
    const auto c = minimize(h, Ansatz::ladder(2, 1), ExactEnergy{}, {}, 8);
    EXPECT_EQ(a.best_params, b.best_params);
    EXPECT_EQ(a.energy, b.energy);
    EXPECT_NE(a.best_params, c.best_params);
}

TEST(Minimize, BudgetExhaustionReportsBestSoFar) {
    OptimizerConfig tight;
    tight.restarts = 1;
    tight.max_evaluations = 8;
    const auto h = parse_pauli_sum("0.5 Y0 Y1");
    const auto r = minimize(h, Ansatz::ladder(2, 1), ExactEnergy{}, tight, 9);
    EXPECT_FALSE(r.converged);
    EXPECT_LE(r.evaluations, 8 + 4); // a shrink step may finish its sweep
    EXPECT_EQ(r.best_params.size(), 4U);
    EXPECT_NEAR(energy(h, Ansatz::ladder(2, 1), r.best_params, ExactEnergy{}), r.energy, 1e-15);
}

TEST(Minimize, RejectsBadConfig) {
    OptimizerConfig bad;
    bad.restarts = 0;
    EXPECT_THROW((void)minimize(parse_pauli_sum("1.0 Z0"), Ansatz::single_ry(), ExactEnergy{},
                                bad, 0),
                 InvalidArgument);
}
