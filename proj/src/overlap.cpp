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
#include "qobs/overlap.hpp"

#include <bit>
#include <cmath>

#include "qobs/error.hpp"

namespace qobs {

namespace {

void require_width(const PauliSum &op, const Circuit &prep) {
    if (op.num_qubits() != prep.num_qubits()) {
        throw SizeMismatch("operator acts on " + std::to_string(op.num_qubits()) +
                           " qubits but the state preparation has " +
                           std::to_string(prep.num_qubits()));
    }
}

void require_same_width(const Circuit &a, const Circuit &b) {
    if (a.num_qubits() != b.num_qubits() || a.num_qubits() == 0) {
        throw SizeMismatch("overlap registers differ: " + std::to_string(a.num_qubits()) + " vs " +
                           std::to_string(b.num_qubits()) + " qubits");
    }
}

double binomial_variance(double value, std::uint64_t shots) {
    if (shots == 0) {
        return 0.0;
    }
    return std::max(0.0, 1.0 - value * value) / static_cast<double>(shots);
}

/// Exact (shots == 0) or empirical distribution over all basis states.
std::vector<double> readout_weights(const StateVector &state, std::uint64_t shots,
                                    std::uint64_t seed) {
    auto probs = probabilities(state);
    if (shots == 0) {
        return probs;
    }
    Rng rng = make_rng(seed);
    const auto counts = multinomial(probs, shots, rng);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return probs;
}

double ancilla_value(const StateVector &state, std::uint64_t shots, std::uint64_t seed) {
    const std::size_t anc[] = {0};
    if (shots == 0) {
        const auto dist = marginal_distribution(state, anc);
        return htest_value(dist[0], dist[1]);
    }
    const auto counts = sample_qubits(state, anc, shots, seed);
    return (static_cast<double>(counts[0]) - static_cast<double>(counts[1])) /
           static_cast<double>(shots);
}

} // namespace

// ---------------------------------------------------------------------------
// Hadamard test

Circuit hadamard_test_circuit(const Circuit &u, const Circuit &prep_psi, Part part) {
    const std::size_t n = prep_psi.num_qubits();
    if (u.num_qubits() != n) {
        throw SizeMismatch("unitary acts on " + std::to_string(u.num_qubits()) +
                           " qubits, state register has " + std::to_string(n));
    }
    Circuit c(n + 1);
    c.append(prep_psi.embedded(1, n + 1));
    c.h(0);
    for (const auto &g : u.ops()) {
        c.add(g.shifted(1).controlled({0}));
    }
    if (part == Part::Im) {
        c.add(Gate::sdg(0));
    }
    c.h(0);
    return c;
}

Circuit hadamard_test_circuit(const SignedPauli &u, const Circuit &prep_psi, Part part) {
    const std::size_t n = prep_psi.num_qubits();
    for (const auto &f : u.factors) {
        if (f.qubit >= n) {
            throw SizeMismatch("unitary " + u.label() + " exceeds the " + std::to_string(n) +
                               "-qubit state register");
        }
    }
    Circuit body(n);
    body.add(u.as_gate());
    return hadamard_test_circuit(body, prep_psi, part);
}

double htest_value(double p0, double p1) noexcept { return p0 - p1; }

OverlapEstimate hadamard_test(const Circuit &u, const Circuit &prep_psi, std::uint64_t shots,
                              std::uint64_t seed, Part part) {
    const StateVector state = prepare(hadamard_test_circuit(u, prep_psi, part));
    OverlapEstimate est;
    est.value = ancilla_value(state, shots, seed);
    est.variance_bound = binomial_variance(est.value, shots);
    est.shots = shots;
    est.protocol = part == Part::Re ? Protocol::HTestRe : Protocol::HTestIm;
    return est;
}

OverlapEstimate hadamard_test(const SignedPauli &u, const Circuit &prep_psi, std::uint64_t shots,
                              std::uint64_t seed, Part part) {
    const StateVector state = prepare(hadamard_test_circuit(u, prep_psi, part));
    OverlapEstimate est;
    est.value = ancilla_value(state, shots, seed);
    est.variance_bound = binomial_variance(est.value, shots);
    est.shots = shots;
    est.protocol = part == Part::Re ? Protocol::HTestRe : Protocol::HTestIm;
    return est;
}

double combine_terms(double identity_offset, std::span<const double> coefficients,
                     std::span<const double> values) {
    if (coefficients.size() != values.size()) {
        throw SizeMismatch("combine_terms: " + std::to_string(coefficients.size()) +
                           " coefficients but " + std::to_string(values.size()) + " values");
    }
    double acc = identity_offset;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += coefficients[i] * values[i];
    }
    return acc;
}

double estimate_htest(const PauliSum &op, const Circuit &prep_psi, std::uint64_t shots_per_term,
                      std::uint64_t seed) {
    require_width(op, prep_psi);
    std::vector<double> coefficients;
    std::vector<double> values;
    std::uint64_t stream = 0;
    for (const auto &t : op.terms()) {
        if (t.is_identity()) {
            continue;
        }
        const SignedPauli u{1.0, t.factor_list()};
        coefficients.push_back(t.coefficient);
        values.push_back(
            hadamard_test(u, prep_psi, shots_per_term, derive_seed(seed, stream++), Part::Re)
                .value);
    }
    return combine_terms(op.identity_coefficient(), coefficients, values);
}

// ---------------------------------------------------------------------------
// SWAP family

Circuit swap_test_circuit(std::size_t n, bool reduced) {
    Circuit c(2 * n + 1);
    if (reduced) {
        for (std::size_t i = 0; i < n; ++i) {
            c.cnot(1 + i, 1 + n + i);
            c.h(1 + i);
            c.toffoli(1 + i, 1 + n + i, 0);
        }
        return c;
    }
    c.h(0);
    for (std::size_t i = 0; i < n; ++i) {
        c.cswap(0, 1 + i, 1 + n + i);
    }
    c.h(0);
    return c;
}

namespace {

StateVector swap_test_state(const Circuit &prep_a, const Circuit &prep_b, bool reduced) {
    require_same_width(prep_a, prep_b);
    const std::size_t n = prep_a.num_qubits();
    Circuit c(2 * n + 1);
    c.append(prep_a.embedded(1, 2 * n + 1));
    c.append(prep_b.embedded(1 + n, 2 * n + 1));
    c.append(swap_test_circuit(n, reduced));
    return prepare(c);
}

} // namespace

std::vector<double> swap_test_distribution(const Circuit &prep_a, const Circuit &prep_b,
                                           bool reduced) {
    const std::size_t anc[] = {0};
    return marginal_distribution(swap_test_state(prep_a, prep_b, reduced), anc);
}

OverlapEstimate swap_test(const Circuit &prep_a, const Circuit &prep_b, std::uint64_t shots,
                          std::uint64_t seed, bool reduced) {
    const StateVector state = swap_test_state(prep_a, prep_b, reduced);
    OverlapEstimate est;
    est.value = ancilla_value(state, shots, seed); // p0 - p1 = 2 p0 - 1
    est.variance_bound = binomial_variance(est.value, shots);
    est.shots = shots;
    est.protocol = Protocol::Swap;
    return est;
}

Circuit dswap_circuit(std::size_t n) {
    Circuit c(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        c.cnot(i, n + i);
        c.h(i);
    }
    return c;
}

bool dswap_odd(std::uint64_t a_bits, std::uint64_t b_bits) noexcept {
    return (std::popcount(a_bits & b_bits) & 1) != 0;
}

OverlapEstimate destructive_swap_test(const Circuit &prep_a, const Circuit &prep_b,
                                      std::uint64_t shots, std::uint64_t seed) {
    require_same_width(prep_a, prep_b);
    const std::size_t n = prep_a.num_qubits();
    Circuit c(2 * n);
    c.append(prep_a.embedded(0, 2 * n));
    c.append(prep_b.embedded(n, 2 * n));
    c.append(dswap_circuit(n));
    const auto weights = readout_weights(prepare(c), shots, seed);

    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    double odd = 0.0;
    for (std::uint64_t idx = 0; idx < weights.size(); ++idx) {
        if (dswap_odd(idx & mask, (idx >> n) & mask)) {
            odd += weights[idx];
        }
    }
    OverlapEstimate est;
    est.value = 1.0 - 2.0 * odd;
    est.variance_bound = binomial_variance(est.value, shots);
    est.shots = shots;
    est.protocol = Protocol::DSwap;
    return est;
}

// ---------------------------------------------------------------------------
// LCU estimator

std::string to_string(SignPolicy policy) {
    switch (policy) {
    case SignPolicy::Oracle:
        return "oracle";
    case SignPolicy::AssumePositive:
        return "assume-positive";
    case SignPolicy::HTestSign:
        return "htest-sign";
    }
    return "?";
}

SignPolicy parse_sign_policy(const std::string &text) {
    if (text == "oracle") {
        return SignPolicy::Oracle;
    }
    if (text == "assume-positive") {
        return SignPolicy::AssumePositive;
    }
    if (text == "htest-sign") {
        return SignPolicy::HTestSign;
    }
    throw InvalidArgument("unknown sign policy '" + text +
                          "' (expected oracle, assume-positive or htest-sign)");
}

LcuLayout lcu_layout(const LcuBlock &block, LcuVariant variant) {
    LcuLayout l{};
    l.n_ancilla = block.n_ancilla;
    l.n_system = block.n_system;
    l.copy1 = block.n_ancilla;
    l.copy2 = block.n_ancilla + block.n_system;
    l.readout = block.n_ancilla + 2 * block.n_system;
    l.width = l.readout + (variant == LcuVariant::Swap ? 1 : 0);
    return l;
}

Circuit lcu_estimator_circuit(const LcuBlock &block, const Circuit &prep_psi, LcuVariant variant) {
    if (prep_psi.num_qubits() != block.n_system) {
        throw SizeMismatch("operator acts on " + std::to_string(block.n_system) +
                           " qubits but the state preparation has " +
                           std::to_string(prep_psi.num_qubits()));
    }
    const LcuLayout l = lcu_layout(block, variant);
    const std::size_t n = l.n_system;
    Circuit c(l.width);
    c.append(prep_psi.embedded(l.copy1, l.width));
    c.append(prep_psi.embedded(l.copy2, l.width));
    c.append(block.w_circuit().embedded(0, l.width));
    if (variant == LcuVariant::Swap) {
        c.h(l.readout);
        for (std::size_t i = 0; i < n; ++i) {
            c.cswap(l.readout, l.copy1 + i, l.copy2 + i);
        }
        c.h(l.readout);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            c.cnot(l.copy1 + i, l.copy2 + i);
            c.h(l.copy1 + i);
        }
    }
    return c;
}

LcuEstimate estimate_lcu(const PauliSum &op, const Circuit &prep_psi, std::uint64_t shots,
                         std::uint64_t seed, LcuVariant variant, SignPolicy sign_policy) {
    require_width(op, prep_psi);
    const LcuForm form = lcu_normal_form(op, true);
    const LcuBlock block = build_block(form);
    const LcuLayout l = lcu_layout(block, variant);
    if (l.width > kMaxQubits) {
        throw ResourceError("LCU estimator needs " + std::to_string(l.width) +
                            " qubits, cap is " + std::to_string(kMaxQubits));
    }
    const StateVector state = prepare(lcu_estimator_circuit(block, prep_psi, variant));
    const auto weights = readout_weights(state, shots, seed);

    const std::uint64_t anc_mask = (std::uint64_t{1} << l.n_ancilla) - 1;
    const std::uint64_t sys_mask = (std::uint64_t{1} << l.n_system) - 1;
    double p0 = 0.0;
    double pair0 = 0.0;
    for (std::uint64_t idx = 0; idx < weights.size(); ++idx) {
        if ((idx & anc_mask) != 0 || weights[idx] == 0.0) {
            continue;
        }
        p0 += weights[idx];
        const bool event = variant == LcuVariant::Swap
                               ? ((idx >> l.readout) & 1U) != 0
                               : dswap_odd((idx >> l.copy1) & sys_mask, (idx >> l.copy2) & sys_mask);
        if (event) {
            pair0 += weights[idx];
        }
    }

    LcuEstimate est;
    est.lambda = form.lambda;
    est.identity_offset = form.identity_offset;
    est.shots = shots;
    est.post_selection_probability = p0;
    if (p0 <= kLowPostSelection) {
        est.post_selection_low = true;
        est.variance_bound = form.lambda * form.lambda;
    } else {
        const double cond = pair0 / p0;
        est.conditional_pair_probability = cond;
        est.radicand = p0 * (1.0 - 2.0 * cond);
        est.radicand_clamped = est.radicand < 0.0;
        est.magnitude = form.lambda * std::sqrt(std::max(0.0, est.radicand));
        if (shots > 0) {
            const double n = static_cast<double>(shots);
            const double var_p0 = p0 * (1.0 - p0) / n;
            const double var_overlap = 4.0 * cond * (1.0 - cond) / (p0 * n);
            const double var_r =
                (1.0 - 2.0 * cond) * (1.0 - 2.0 * cond) * var_p0 + p0 * p0 * var_overlap;
            // |sqrt(a) - sqrt(b)| <= sqrt(|a - b|)
            est.variance_bound = form.lambda * form.lambda * std::sqrt(var_r);
        }
    }

    double reference = 1.0;
    switch (sign_policy) {
    case SignPolicy::Oracle:
        reference = expectation_exact(form.encoded_operator(), prepare(prep_psi));
        break;
    case SignPolicy::AssumePositive:
        break;
    case SignPolicy::HTestSign:
        reference = estimate_htest(form.encoded_operator(), prep_psi, shots,
                                   derive_seed(seed, 0x5167ULL));
        break;
    }
    est.sign = reference < 0.0 ? -1 : 1;
    est.signed_value = form.identity_offset + est.sign * est.magnitude;
    const double root = std::sqrt(std::abs(est.radicand));
    est.unclamped_value =
        form.identity_offset + est.sign * form.lambda * (est.radicand < 0.0 ? -root : root);
    return est;
}

} // namespace qobs
