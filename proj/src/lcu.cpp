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
#include "qobs/lcu.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qobs/error.hpp"

namespace qobs {

std::size_t ancilla_count(std::size_t k) {
    if (k == 0) {
        throw InvalidArgument("LCU needs at least one term");
    }
    return static_cast<std::size_t>(std::bit_width(k - 1));
}

Circuit synthesize_vp(std::span<const double> betas) {
    const std::size_t k = betas.size();
    if (k == 0) {
        throw InvalidArgument("synthesize_vp: empty coefficient list");
    }
    double lambda = 0.0;
    for (double b : betas) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw InvalidArgument("synthesize_vp: coefficients must be positive and finite");
        }
        lambda += b;
    }
    Circuit circuit(ancilla_count(k));
    double used = 0.0; // sum of a_j^2 already placed
    for (std::uint64_t i = 1; i < k; ++i) {
        const std::uint64_t prev = i - 1;
        const double a = std::sqrt(betas[prev] / lambda);
        const double rest = std::sqrt(std::max(0.0, 1.0 - used));
        const double theta = std::acos(std::clamp(a / rest, -1.0, 1.0));
        used += a * a;

        const auto target = static_cast<std::size_t>(std::countr_zero(~prev));
        std::vector<std::size_t> on_prev;
        std::vector<std::size_t> on_next;
        for (std::size_t q = 0; q < circuit.num_qubits(); ++q) {
            if ((prev >> q) & 1U) {
                on_prev.push_back(q);
            }
            if ((i >> q) & 1U) {
                on_next.push_back(q);
            }
        }
        circuit.add(Gate::ry(target, 2.0 * theta).controlled(on_prev));
        for (std::size_t q = 0; q < target; ++q) { // bits that turn off
            circuit.add(Gate::x(q).controlled(on_next));
        }
    }
    return circuit;
}

Circuit LcuBlock::select_circuit() const {
    Circuit c(width());
    std::vector<std::size_t> ancillas(n_ancilla);
    for (std::size_t q = 0; q < n_ancilla; ++q) {
        ancillas[q] = q;
    }
    for (const auto &entry : vs) {
        if (entry.unitary.factors.empty() && entry.unitary.sign > 0) {
            continue;
        }
        std::vector<std::size_t> zeros;
        for (std::size_t q = 0; q < n_ancilla; ++q) {
            if (((entry.pattern >> q) & 1U) == 0) {
                zeros.push_back(q);
            }
        }
        for (auto q : zeros) {
            c.x(q);
        }
        c.add(entry.unitary.as_gate(n_ancilla).controlled(ancillas));
        for (auto q : zeros) {
            c.x(q);
        }
    }
    return c;
}

Circuit LcuBlock::w_circuit() const {
    Circuit w(width());
    w.append(vp);
    w.append(select_circuit());
    w.append(vp.inverse());
    return w;
}

LcuBlock build_block(const LcuForm &form) {
    const std::size_t k = form.size();
    if (k > kMaxLcuTerms) {
        throw ResourceError("LCU with " + std::to_string(k) + " terms exceeds the guard of " +
                            std::to_string(kMaxLcuTerms));
    }
    if (form.unitaries.size() != k) {
        throw SizeMismatch("LCU form has " + std::to_string(k) + " coefficients but " +
                           std::to_string(form.unitaries.size()) + " unitaries");
    }
    LcuBlock block;
    block.form = form;
    block.n_ancilla = ancilla_count(k);
    block.n_system = form.n_qubits;
    block.vp = synthesize_vp(form.betas);
    for (std::size_t i = 0; i < k; ++i) {
        block.vs.push_back({i, form.unitaries[i]});
    }
    return block;
}

StateVector with_ancillas(const StateVector &psi, std::size_t n_ancilla) {
    StateVector joint = new_state(psi.num_qubits() + n_ancilla);
    joint[0] = 0.0;
    for (std::uint64_t s = 0; s < psi.dimension(); ++s) {
        joint[s << n_ancilla] = psi[s];
    }
    return joint;
}

StateVector apply_w(const LcuBlock &block, const StateVector &psi) {
    if (psi.num_qubits() != block.n_system) {
        throw SizeMismatch("LCU block acts on " + std::to_string(block.n_system) +
                           " system qubits, state has " + std::to_string(psi.num_qubits()));
    }
    StateVector joint = with_ancillas(psi, block.n_ancilla);
    run_circuit(joint, block.w_circuit());
    return joint;
}

PostSelection post_select(const StateVector &joint, std::size_t ancilla_count) {
    if (ancilla_count >= joint.num_qubits()) {
        throw SizeMismatch("post_select: " + std::to_string(ancilla_count) +
                           " ancillas leave no system qubits in a " +
                           std::to_string(joint.num_qubits()) + "-qubit state");
    }
    StateVector system(joint.num_qubits() - ancilla_count);
    double probability = 0.0;
    for (std::uint64_t s = 0; s < system.dimension(); ++s) {
        system[s] = joint[s << ancilla_count];
        probability += std::norm(system[s]);
    }
    if (probability < 1e-14) {
        throw DegeneratePostSelection("ancilla |0...0> branch has probability " +
                                      std::to_string(probability));
    }
    system.normalize();
    return {probability, std::move(system)};
}

} // namespace qobs
