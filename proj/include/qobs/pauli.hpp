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
 * @file pauli.hpp
 * Weighted Pauli-string sums with real coefficients.
 *
 * Operator file format: UTF-8 text, one term per line, `#` starts a comment.
 * A line is a decimal coefficient followed by zero or more factors written as
 * `<AXIS><index>` (AXIS in I, X, Y, Z), separated by whitespace. A bare `I`
 * denotes the identity term.
 *
 *     # Q2, Gray code
 *     -0.18144 I
 *     0.18144 Z0
 *     0.28394 X0
 */
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qobs/simulator.hpp"

namespace qobs {

struct PauliTerm {
    double coefficient = 0.0;
    /// qubit -> axis; absent qubits carry the identity.
    std::map<std::size_t, PauliAxis> factors;

    [[nodiscard]] bool is_identity() const noexcept { return factors.empty(); }
    [[nodiscard]] std::vector<PauliFactor> factor_list() const;
    /// e.g. "X0 Z1", or "I" for the identity.
    [[nodiscard]] std::string label() const;
};

/**
 * @brief Canonical Pauli sum: terms merged, zero terms dropped, ordered
 * lexicographically by (qubit, axis) factor sequence with axes ranked
 * Z < X < Y. The identity term, when present, comes first.
 */
class PauliSum {
  public:
    PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms);

    /// Width inferred as max index + 1 (at least 1).
    static PauliSum from_terms(std::vector<PauliTerm> terms);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept { return terms_; }
    [[nodiscard]] double identity_coefficient() const noexcept;

    /// Same operator acting on a wider register.
    [[nodiscard]] PauliSum widened(std::size_t n_qubits) const;

    friend PauliSum operator+(const PauliSum &a, const PauliSum &b);
    friend PauliSum operator*(double scale, const PauliSum &op);
    friend bool operator==(const PauliSum &a, const PauliSum &b);

  private:
    std::size_t n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// Parses the operator file format. `n_qubits` overrides the inferred width.
[[nodiscard]] PauliSum parse_pauli_sum(std::string_view text,
                                       std::optional<std::size_t> n_qubits = std::nullopt);
[[nodiscard]] PauliSum load_pauli_sum(const std::filesystem::path &path,
                                      std::optional<std::size_t> n_qubits = std::nullopt);
/// Inverse of parse_pauli_sum (17 significant digits).
[[nodiscard]] std::string format_pauli_sum(const PauliSum &op);

/// Largest width to_matrix() will expand.
inline constexpr std::size_t kMaxDenseQubits = 10;

[[nodiscard]] Eigen::MatrixXcd to_matrix(const PauliSum &op);

/// O|psi> without normalization, computed term by term.
[[nodiscard]] std::vector<Complex> apply_operator(const PauliSum &op, const StateVector &state);

/// <psi|O|psi>; the imaginary residue of a Hermitian sum is discarded.
[[nodiscard]] double expectation_exact(const PauliSum &op, const StateVector &state);

[[nodiscard]] bool is_hermitian(const PauliSum &op);

/// A Pauli string with a +-1 sign folded in, e.g. -X0.
struct SignedPauli {
    double sign = 1.0;
    std::vector<PauliFactor> factors;

    [[nodiscard]] Gate as_gate(std::size_t offset = 0) const;
    [[nodiscard]] std::string label() const;
};

/**
 * @brief O = identity_offset * I + sum_i beta_i U_i with every beta_i > 0.
 */
struct LcuForm {
    std::size_t n_qubits = 0;
    double lambda = 0.0;
    std::vector<double> betas;
    std::vector<SignedPauli> unitaries;
    double identity_offset = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return betas.size(); }
    /// Re-expands to a PauliSum; equals the source operator.
    [[nodiscard]] PauliSum reconstruct() const;
    /// The block-encoded part sum_i beta_i U_i (no identity offset).
    [[nodiscard]] PauliSum encoded_operator() const;
};

/**
 * With drop_identity the identity coefficient moves to identity_offset;
 * otherwise the identity becomes one of the unitaries. Throws InvalidArgument
 * when nothing is left to block-encode.
 */
[[nodiscard]] LcuForm lcu_normal_form(const PauliSum &op, bool drop_identity);

} // namespace qobs
