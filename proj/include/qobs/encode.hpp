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

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "qobs/pauli.hpp"
#include "qobs/simulator.hpp"

namespace qobs {

/// Harmonic-oscillator label |n, l>.
struct BasisLabel {
    int n = 0;
    int l = 0;
};

/// Real symmetric one-body matrix O_ij = <phi_i|O|phi_j>.
class OneBodyMatrix {
  public:
    explicit OneBodyMatrix(Eigen::MatrixXd entries, std::vector<BasisLabel> labels = {});

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }
    [[nodiscard]] const Eigen::MatrixXd &entries() const noexcept { return entries_; }
    [[nodiscard]] const std::vector<BasisLabel> &labels() const noexcept { return labels_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
        return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

  private:
    Eigen::MatrixXd entries_;
    std::vector<BasisLabel> labels_;
};

/// Matrix file: first line k, then k lines of k decimals. `#` comments allowed.
[[nodiscard]] OneBodyMatrix parse_one_body_matrix(std::string_view text);
[[nodiscard]] OneBodyMatrix load_one_body_matrix(const std::filesystem::path &path);

enum class Encoding { GrayCode, JordanWigner };

[[nodiscard]] constexpr std::uint64_t gray_code(std::uint64_t i) noexcept { return i ^ (i >> 1); }

/// Qubits needed for k modes: ceil(log2 k) (at least 1) for GC, k for JW.
[[nodiscard]] std::size_t encoded_qubits(Encoding encoding, std::size_t k);

/// Basis index of mode i in the encoded register.
[[nodiscard]] std::uint64_t encoded_index(Encoding encoding, std::size_t mode);

/**
 * @brief One-body operator under Jordan-Wigner (one qubit per mode).
 *
 * Diagonal O_ii -> (O_ii/2)(I - Z_i); off-diagonal O_ij -> (O_ij/2)(X_i X_j + Y_i Y_j).
 * By default the Z-strings between i and j are omitted, which is exact on the
 * one-particle sector only; strict_jw inserts them.
 */
[[nodiscard]] PauliSum jw_encode(const OneBodyMatrix &m, bool strict_jw = false);

/**
 * @brief Dense Gray-code encoding: mode i lives on basis state gray(i) and the
 * padded 2^n x 2^n matrix is expanded over all 4^n Pauli strings.
 */
[[nodiscard]] PauliSum gray_encode(const OneBodyMatrix &m);

/// Matrix of `op` between one-hot basis states e_i (bit i set), k = op width <= 10.
[[nodiscard]] Eigen::MatrixXcd one_hot_restrict(const PauliSum &op);

/// Inverse of the Gray relabelling: out(i, j) = dense(gray(i), gray(j)) for i, j < k.
[[nodiscard]] Eigen::MatrixXcd gray_decode(const Eigen::MatrixXcd &dense, std::size_t k);

/// Encoded statevector for mode amplitudes (normalized on the way).
[[nodiscard]] StateVector encode_state(Encoding encoding, std::span<const double> mode_amplitudes);

} // namespace qobs
