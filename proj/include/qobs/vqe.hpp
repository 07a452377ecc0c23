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
#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "qobs/pauli.hpp"
#include "qobs/simulator.hpp"

namespace qobs {

struct SingleRY {};

/// RY on every qubit, then `depth` rounds of (CNOT ladder q -> q+1, RY layer).
struct RYCnotLadder {
    int depth = 1;
};

struct Ansatz {
    std::size_t n_qubits = 1;
    std::variant<SingleRY, RYCnotLadder> layout = SingleRY{};

    static Ansatz single_ry() { return {1, SingleRY{}}; }
    static Ansatz ladder(std::size_t n_qubits, int depth) {
        return {n_qubits, RYCnotLadder{depth}};
    }

    [[nodiscard]] std::size_t parameter_count() const;
};

[[nodiscard]] Circuit prepare_ansatz(const Ansatz &ansatz, std::span<const double> params);

struct ExactEnergy {};
struct SampledEnergy {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};
using EnergyMode = std::variant<ExactEnergy, SampledEnergy>;

/// <psi(params)|H|psi(params)>, exactly or through per-term Hadamard tests.
[[nodiscard]] double energy(const PauliSum &hamiltonian, const Ansatz &ansatz,
                            std::span<const double> params, const EnergyMode &mode);

struct OptimizerConfig {
    int restarts = 4;
    /// Evaluation cap for each restart.
    int max_evaluations = 2000;
    double initial_step = 0.5;
    double diameter_tolerance = 1e-6;
    double energy_tolerance = 1e-8;
    int stall_iterations = 20;
};

struct VqeResult {
    std::vector<double> best_params;
    double energy = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/**
 * Nelder-Mead simplex descent from `restarts` random starting points drawn
 * uniformly in [-pi, pi). Deterministic for a fixed seed. In sampled mode
 * every evaluation of one run reuses the same sampling seed.
 */
[[nodiscard]] VqeResult minimize(const PauliSum &hamiltonian, const Ansatz &ansatz,
                                 const EnergyMode &mode, const OptimizerConfig &config,
                                 std::uint64_t seed);

} // namespace qobs
