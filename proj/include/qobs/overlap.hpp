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
 * @file overlap.hpp
 * Hadamard test, SWAP test and destructive SWAP test, plus the LCU-based
 * expectation estimator built on the latter two.
 *
 * Every protocol runs in exact-probability mode when shots == 0 and in
 * shot-sampled mode otherwise. Sampled runs are deterministic in `seed`.
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qobs/lcu.hpp"
#include "qobs/pauli.hpp"
#include "qobs/simulator.hpp"

namespace qobs {

enum class Protocol { HTestRe, HTestIm, Swap, DSwap };

enum class Part { Re, Im };

struct OverlapEstimate {
    double value = 0.0;
    /// Binomial variance of `value` at this shot count; 0 in exact mode.
    double variance_bound = 0.0;
    std::uint64_t shots = 0;
    Protocol protocol = Protocol::HTestRe;
};

// ---------------------------------------------------------------------------
// Hadamard test

/**
 * H(anc) . c-U(anc -> system) . [S^dag(anc) for Im] . H(anc).
 * Ancilla is qubit 0; the prepared system occupies qubits 1..n.
 *
 * The Im variant uses S^dag: with S the readout p(0) - p(1) would equal
 * -Im<psi|U|psi>.
 */
[[nodiscard]] Circuit hadamard_test_circuit(const SignedPauli &u, const Circuit &prep_psi,
                                            Part part);

/// Same protocol for an arbitrary unitary given as a circuit on the system
/// register; every gate picks up the ancilla control.
[[nodiscard]] Circuit hadamard_test_circuit(const Circuit &u, const Circuit &prep_psi, Part part);

[[nodiscard]] OverlapEstimate hadamard_test(const Circuit &u, const Circuit &prep_psi,
                                            std::uint64_t shots, std::uint64_t seed,
                                            Part part = Part::Re);

[[nodiscard]] OverlapEstimate hadamard_test(const SignedPauli &u, const Circuit &prep_psi,
                                            std::uint64_t shots, std::uint64_t seed,
                                            Part part = Part::Re);

/// p(0) - p(1) of a single ancilla readout.
[[nodiscard]] double htest_value(double p0, double p1) noexcept;

/// identity_offset + sum_i coefficients[i] * values[i].
[[nodiscard]] double combine_terms(double identity_offset, std::span<const double> coefficients,
                                   std::span<const double> values);

/**
 * Per-term Hadamard tests on a Hermitian sum. The identity coefficient is
 * added analytically; term i samples with seed derive_seed(seed, i).
 */
[[nodiscard]] double estimate_htest(const PauliSum &op, const Circuit &prep_psi,
                                    std::uint64_t shots_per_term, std::uint64_t seed);

// ---------------------------------------------------------------------------
// SWAP family

/**
 * SWAP test on registers a = qubits [1, n], b = [n+1, 2n], ancilla = qubit 0.
 * `reduced` selects the ancilla-parity form CNOT(a_i->b_i), H(a_i),
 * Toffoli(a_i, b_i -> anc) instead of H . c-SWAP . H.
 */
[[nodiscard]] Circuit swap_test_circuit(std::size_t n, bool reduced);

/// Ancilla distribution (p0, p1) of the SWAP test in exact mode.
[[nodiscard]] std::vector<double> swap_test_distribution(const Circuit &prep_a,
                                                         const Circuit &prep_b, bool reduced);

/// value = 2 p(anc = 0) - 1, estimating |<a|b>|^2.
[[nodiscard]] OverlapEstimate swap_test(const Circuit &prep_a, const Circuit &prep_b,
                                        std::uint64_t shots, std::uint64_t seed,
                                        bool reduced = false);

/// CNOT(a_i -> b_i) then H(a_i) for each pair; a = [0, n), b = [n, 2n).
[[nodiscard]] Circuit dswap_circuit(std::size_t n);

/// True when an odd number of pairs (a_i, b_i) read (1, 1).
[[nodiscard]] bool dswap_odd(std::uint64_t a_bits, std::uint64_t b_bits) noexcept;

/// value = 1 - 2 P(odd), estimating |<a|b>|^2.
[[nodiscard]] OverlapEstimate destructive_swap_test(const Circuit &prep_a, const Circuit &prep_b,
                                                    std::uint64_t shots, std::uint64_t seed);

// ---------------------------------------------------------------------------
// LCU estimator

enum class LcuVariant { Swap, DSwap };

/// How the sign lost by the SWAP-type overlap is restored.
enum class SignPolicy { Oracle, AssumePositive, HTestSign };

[[nodiscard]] std::string to_string(SignPolicy policy);
[[nodiscard]] SignPolicy parse_sign_policy(const std::string &text);

struct LcuEstimate {
    /// Lambda * sqrt(P0 * max(0, 1 - 2 P_pair|0)).
    double magnitude = 0.0;
    /// identity_offset + sign * magnitude.
    double signed_value = 0.0;
    /// identity_offset + sign * Lambda * sgn(r) sqrt(|r|) for radicand r.
    /// Equals signed_value when r >= 0; below zero it keeps the shot noise
    /// that the clamp would otherwise fold onto the offset.
    double unclamped_value = 0.0;
    int sign = 1;
    double lambda = 0.0;
    double identity_offset = 0.0;
    /// P(LCU ancillas all 0).
    double post_selection_probability = 0.0;
    /// P(readout event | LCU ancillas all 0).
    double conditional_pair_probability = 0.0;
    /// Unclamped P0 * (1 - 2 P_pair|0).
    double radicand = 0.0;
    bool radicand_clamped = false;
    bool post_selection_low = false;
    double variance_bound = 0.0;
    std::uint64_t shots = 0;
};

/// Joint circuit layout used by estimate_lcu().
struct LcuLayout {
    std::size_t n_ancilla;
    std::size_t n_system;
    std::size_t copy1;     // first qubit of the register carrying O|psi>
    std::size_t copy2;     // first qubit of the reference copy of psi
    std::size_t readout;   // SWAP-test ancilla (Swap variant only)
    std::size_t width;
};

[[nodiscard]] LcuLayout lcu_layout(const LcuBlock &block, LcuVariant variant);

/// Full circuit: psi on both copies, W on (ancillas, copy1), overlap protocol.
[[nodiscard]] Circuit lcu_estimator_circuit(const LcuBlock &block, const Circuit &prep_psi,
                                            LcuVariant variant);

/// Post-selection probability below which the estimate is flagged.
inline constexpr double kLowPostSelection = 1e-9;

[[nodiscard]] LcuEstimate estimate_lcu(const PauliSum &op, const Circuit &prep_psi,
                                       std::uint64_t shots, std::uint64_t seed,
                                       LcuVariant variant,
                                       SignPolicy sign_policy = SignPolicy::Oracle);

} // namespace qobs
