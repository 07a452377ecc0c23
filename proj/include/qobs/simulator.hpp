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
 * @file simulator.hpp
 * Exact statevector engine.
 *
 * Qubit 0 is the least-significant bit of the amplitude index throughout the
 * library. Controlled gates act directly on the statevector; nothing is
 * decomposed into a hardware gate set.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qobs {

using Complex = std::complex<double>;

/// Default upper bound on register width accepted by new_state().
inline constexpr std::size_t kMaxQubits = 24;

enum class PauliAxis : std::uint8_t { I, X, Y, Z };

[[nodiscard]] char axis_letter(PauliAxis axis) noexcept;

struct PauliFactor {
    std::size_t qubit;
    PauliAxis axis;

    friend bool operator==(const PauliFactor &, const PauliFactor &) = default;
    friend auto operator<=>(const PauliFactor &, const PauliFactor &) = default;
};

/**
 * @brief Bit masks describing a Pauli string P = i^{|y|} X^x Z^z.
 *
 * P|b> = phase(b) |b ^ flip>, phase(b) = i^{popcount(y)} (-1)^{popcount(b & z)}.
 */
struct PauliMasks {
    std::uint64_t flip = 0;  // X or Y positions
    std::uint64_t phase = 0; // Z or Y positions
    unsigned y_count = 0;

    [[nodiscard]] Complex phase_of(std::uint64_t basis) const noexcept;
};

[[nodiscard]] PauliMasks pauli_masks(std::span<const PauliFactor> factors,
                                     std::size_t offset = 0);

class StateVector {
  public:
    /// |0...0> on n_qubits; no size cap (use new_state() for the checked path).
    explicit StateVector(std::size_t n_qubits);

    /// Takes ownership of amplitudes; length must be a power of two >= 2.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }

    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] Complex &operator[](std::size_t i) { return amps_[i]; }

    [[nodiscard]] double norm() const noexcept;
    void normalize();

  private:
    std::size_t n_qubits_;
    std::vector<Complex> amps_;
};

enum class GateKind : std::uint8_t { X, Y, Z, H, S, Sdg, RY, RZ, Swap, PauliString };

/**
 * @brief A (multi-)controlled gate. Controls fire on |1>.
 *
 * Parameterized gates are validated at construction: angles must be finite,
 * Pauli-string signs must be +-1, and target/control sets must be disjoint.
 * A PauliString gate may have no targets, in which case it applies its sign
 * as a phase on the controlled subspace.
 */
class Gate {
  public:
    static Gate x(std::size_t target);
    static Gate y(std::size_t target);
    static Gate z(std::size_t target);
    static Gate h(std::size_t target);
    static Gate s(std::size_t target);
    static Gate sdg(std::size_t target);
    static Gate ry(std::size_t target, double angle);
    static Gate rz(std::size_t target, double angle);
    static Gate swap(std::size_t a, std::size_t b);
    static Gate pauli_string(std::span<const PauliFactor> factors, double sign = 1.0);

    /// Copy of this gate with additional controls.
    [[nodiscard]] Gate controlled(std::vector<std::size_t> controls) const;
    [[nodiscard]] Gate inverse() const;
    /// Copy with every qubit index increased by offset.
    [[nodiscard]] Gate shifted(std::size_t offset) const;

    [[nodiscard]] GateKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<std::size_t> &targets() const noexcept { return targets_; }
    [[nodiscard]] const std::vector<std::size_t> &controls() const noexcept { return controls_; }
    [[nodiscard]] double angle() const noexcept { return angle_; }
    [[nodiscard]] double sign() const noexcept { return sign_; }
    [[nodiscard]] const std::vector<PauliAxis> &axes() const noexcept { return axes_; }

    /// Largest qubit index referenced, or -1 for a bare phase gate.
    [[nodiscard]] long max_qubit() const noexcept;

    /// One line `GATE(params) targets | controls`.
    [[nodiscard]] std::string to_string() const;

  private:
    Gate(GateKind kind, std::vector<std::size_t> targets);
    void check_disjoint() const;

    GateKind kind_;
    std::vector<std::size_t> targets_;
    std::vector<std::size_t> controls_;
    double angle_ = 0.0;
    double sign_ = 1.0;
    std::vector<PauliAxis> axes_;
};

class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

    Circuit &add(Gate gate);
    Circuit &append(const Circuit &other);

    Circuit &x(std::size_t t) { return add(Gate::x(t)); }
    Circuit &h(std::size_t t) { return add(Gate::h(t)); }
    Circuit &ry(std::size_t t, double angle) { return add(Gate::ry(t, angle)); }
    Circuit &cnot(std::size_t control, std::size_t target) {
        return add(Gate::x(target).controlled({control}));
    }
    Circuit &toffoli(std::size_t c0, std::size_t c1, std::size_t target) {
        return add(Gate::x(target).controlled({c0, c1}));
    }
    Circuit &cswap(std::size_t control, std::size_t a, std::size_t b) {
        return add(Gate::swap(a, b).controlled({control}));
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<Gate> &ops() const noexcept { return ops_; }
    [[nodiscard]] bool empty() const noexcept { return ops_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return ops_.size(); }

    [[nodiscard]] Circuit inverse() const;
    /// Embed into a register of width new_width, shifting indices by offset.
    [[nodiscard]] Circuit embedded(std::size_t offset, std::size_t new_width) const;

    [[nodiscard]] std::string dump() const;

  private:
    std::size_t n_qubits_;
    std::vector<Gate> ops_;
};

/// Checked allocation of |0...0>.
[[nodiscard]] StateVector new_state(std::size_t n_qubits, std::size_t cap = kMaxQubits);

void apply(StateVector &state, const Gate &gate);
void run_circuit(StateVector &state, const Circuit &circuit);

/// Fresh |0...0> with circuit applied.
[[nodiscard]] StateVector prepare(const Circuit &circuit);

[[nodiscard]] std::vector<double> probabilities(const StateVector &state);

/// Probability that `qubits` read `outcome` (bit per listed qubit).
[[nodiscard]] double marginal_probability(const StateVector &state,
                                          std::span<const std::size_t> qubits,
                                          std::span<const int> outcome);

/// Joint distribution of `qubits`; entry j has bit m of j = value of qubits[m].
[[nodiscard]] std::vector<double> marginal_distribution(const StateVector &state,
                                                        std::span<const std::size_t> qubits);

[[nodiscard]] Complex inner_product(const StateVector &a, const StateVector &b);

/// |<a|b>|^2, i.e. phase-insensitive equality measure for normalized states.
[[nodiscard]] double fidelity(const StateVector &a, const StateVector &b);

// ---------------------------------------------------------------------------
// Sampling

using Rng = std::mt19937_64;

/// splitmix64 finalizer; derives independent sub-stream seeds.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;
[[nodiscard]] Rng make_rng(std::uint64_t seed);

/// Multinomial draw of `shots` outcomes from a probability vector.
[[nodiscard]] std::vector<std::uint64_t> multinomial(std::span<const double> probs,
                                                     std::uint64_t shots, Rng &rng);

/// Shot counts keyed by bitstring (qubit n-1 leftmost). Only non-zero entries.
[[nodiscard]] std::map<std::string, std::uint64_t> sample(const StateVector &state,
                                                          std::uint64_t shots,
                                                          std::uint64_t seed);

/// Shot counts for a measurement of `qubits`, indexed like marginal_distribution().
[[nodiscard]] std::vector<std::uint64_t> sample_qubits(const StateVector &state,
                                                       std::span<const std::size_t> qubits,
                                                       std::uint64_t shots,
                                                       std::uint64_t seed);

[[nodiscard]] std::string bitstring(std::uint64_t index, std::size_t n_qubits);

/**
 * @brief Circuit preparing a real-amplitude state from |0...0>.
 *
 * Binary tree of (pattern-)controlled R_Y rotations, most significant qubit
 * first. Amplitudes need not be normalized; length must be a power of two.
 */
[[nodiscard]] Circuit real_state_preparation(std::span<const double> amplitudes);

} // namespace qobs
