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
/**
 * @file lcu.hpp
 * Block encoding of O = sum_i beta_i U_i (beta_i > 0) through a prepare
 * circuit V_P and a select operator V_S, with W = V_P^dag V_S V_P.
 *
 * Joint register layout: ancillas occupy qubits [0, n_ancilla), the system
 * register follows at [n_ancilla, n_ancilla + n_system). Ancilla pattern i is
 * read with qubit 0 as its least-significant bit.
 */
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qobs/pauli.hpp"
#include "qobs/simulator.hpp"

namespace qobs {

/// Largest LCU term count accepted by build_block().
inline constexpr std::size_t kMaxLcuTerms = std::size_t{1} << 20;

/// ceil(log2 k); zero for a single term.
[[nodiscard]] std::size_t ancilla_count(std::size_t k);

/**
 * @brief Prepare circuit with V_P|0> = sum_i sqrt(beta_i / Lambda) |i>.
 *
 * Walks i = 1..k-1 in binary order. Moving from |i-1> to |i> exactly one
 * qubit turns on: it receives R_Y(2 theta) controlled by the qubits set in
 * |i-1>, then the qubits that turn off are cleared by CNOTs controlled by the
 * qubits set in |i>. theta = acos(a_{i-1} / sqrt(1 - sum_{j<i-1} a_j^2)).
 */
[[nodiscard]] Circuit synthesize_vp(std::span<const double> betas);

struct SelectEntry {
    std::uint64_t pattern;
    SignedPauli unitary;
};

struct LcuBlock {
    LcuForm form;
    std::size_t n_ancilla = 0;
    std::size_t n_system = 0;
    Circuit vp{0};
    std::vector<SelectEntry> vs;

    [[nodiscard]] std::size_t width() const noexcept { return n_ancilla + n_system; }
    /// V_S on the joint register; unused ancilla patterns act as identity.
    [[nodiscard]] Circuit select_circuit() const;
    /// W = V_P^dag V_S V_P on the joint register.
    [[nodiscard]] Circuit w_circuit() const;
};

[[nodiscard]] LcuBlock build_block(const LcuForm &form);

/// Joint state |0>^na (x) psi.
[[nodiscard]] StateVector with_ancillas(const StateVector &psi, std::size_t n_ancilla);

/// W |0>^na |psi> = (1/Lambda)|0>^na O|psi> + |Psi_perp>.
[[nodiscard]] StateVector apply_w(const LcuBlock &block, const StateVector &psi);

struct PostSelection {
    double probability;
    StateVector system;
};

/// Projects the low `ancilla_count` qubits onto |0...0>; throws below 1e-14.
[[nodiscard]] PostSelection post_select(const StateVector &joint, std::size_t ancilla_count);

} // namespace qobs
