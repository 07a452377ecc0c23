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

#include "qobs/encode.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "qobs/error.hpp"

using namespace qobs;

namespace {

std::filesystem::path data(const char *name) { return std::filesystem::path(QOBS_DATA_DIR) / name; }

OneBodyMatrix q2_matrix() {
    Eigen::MatrixXd m(2, 2);
    m << 0.0, 0.28394, 0.28394, -0.36288;
    return OneBodyMatrix(m, {{0, 0}, {0, 2}});
}

Eigen::MatrixXd random_symmetric(std::size_t k, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto K = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd m(K, K);
    for (Eigen::Index i = 0; i < K; ++i) {
        for (Eigen::Index j = i; j < K; ++j) {
            m(i, j) = m(j, i) = u(rng);
        }
    }
    return m;
}

} // namespace

TEST(OneBodyMatrix, RejectsAsymmetricOrNonSquare) {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 2, 0;
    EXPECT_THROW(OneBodyMatrix{m}, InvalidArgument);
    EXPECT_THROW(OneBodyMatrix{Eigen::MatrixXd::Zero(2, 3)}, InvalidArgument);
    EXPECT_THROW((OneBodyMatrix{Eigen::MatrixXd::Identity(2, 2), {{0, 0}}}), SizeMismatch);
}

TEST(OneBodyMatrix, ParsesShippedFile) {
    const auto m = load_one_body_matrix(data("q2_matrix.txt"));
    ASSERT_EQ(m.size(), 2U);
    EXPECT_DOUBLE_EQ(m(0, 1), 0.28394);
    EXPECT_DOUBLE_EQ(m(1, 1), -0.36288);
}

TEST(OneBodyMatrix, ParseErrors) {
    EXPECT_THROW((void)parse_one_body_matrix(""), ParseError);
    EXPECT_THROW((void)parse_one_body_matrix("2\n1 0\n0"), ParseError);
    EXPECT_THROW((void)parse_one_body_matrix("2\n1 0\n0 x"), ParseError);
    EXPECT_THROW((void)parse_one_body_matrix("1.5\n1"), ParseError);
    EXPECT_THROW((void)parse_one_body_matrix("2\n1 5\n0 1"), InvalidArgument);
}

TEST(EncodedQubits, Counts) {
    EXPECT_EQ(encoded_qubits(Encoding::GrayCode, 1), 1U);
    EXPECT_EQ(encoded_qubits(Encoding::GrayCode, 2), 1U);
    EXPECT_EQ(encoded_qubits(Encoding::GrayCode, 3), 2U);
    EXPECT_EQ(encoded_qubits(Encoding::GrayCode, 4), 2U);
    EXPECT_EQ(encoded_qubits(Encoding::GrayCode, 5), 3U);
    EXPECT_EQ(encoded_qubits(Encoding::JordanWigner, 4), 4U);
    EXPECT_EQ(gray_code(2), 3U);
    EXPECT_EQ(gray_code(3), 2U);
}

TEST(JordanWigner, BasisTwoMatrix) {
    const auto op = jw_encode(q2_matrix());
    const auto expected = load_pauli_sum(data("q2_jw.ops"));
    EXPECT_LT(oracle::max_coefficient_gap(op, expected), 1e-5);
}

TEST(JordanWigner, IdentityIsNumberOperator) {
    const auto op = jw_encode(OneBodyMatrix(Eigen::MatrixXd::Identity(2, 2)));
    EXPECT_EQ(op, parse_pauli_sum("1.0 I\n-0.5 Z0\n-0.5 Z1"));
}

TEST(JordanWigner, BasisFourReencodesItsOwnRestriction) {
    const auto q4 = load_pauli_sum(data("q4_jw.ops"));
    const Eigen::MatrixXcd restricted = one_hot_restrict(q4);
    EXPECT_LT(restricted.imag().cwiseAbs().maxCoeff(), 1e-15);
    const auto op = jw_encode(OneBodyMatrix(restricted.real()));
    EXPECT_LT(oracle::max_coefficient_gap(op, q4), 1e-5);
}

TEST(JordanWigner, StrictModeAddsInteriorStrings) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 2) = m(2, 0) = 1.0;
    const auto loose = jw_encode(OneBodyMatrix(m));
    const auto strict = jw_encode(OneBodyMatrix(m), true);
    EXPECT_EQ(loose, parse_pauli_sum("0.5 X0 X2\n0.5 Y0 Y2", 3));
    EXPECT_EQ(strict, parse_pauli_sum("0.5 X0 Z1 X2\n0.5 Y0 Z1 Y2", 3));
    // Both agree on the one-particle sector, where Z1 reads +1.
    EXPECT_TRUE(one_hot_restrict(loose).isApprox(one_hot_restrict(strict)));
}

TEST(JordanWigner, StrictModeMatchesFermionicHopping) {
    // Build a_i^dag a_j + h.c. from explicit Jordan-Wigner ladder matrices and
    // compare with the strict encoding on the full Fock space.
    std::mt19937_64 rng(8);
    const std::size_t k = 4;
    const Eigen::MatrixXd m = random_symmetric(k, rng);
    const auto dim = Eigen::Index{1} << k;
    auto annihilate = [&](std::size_t mode) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
        for (Eigen::Index b = 0; b < dim; ++b) {
            if (((b >> mode) & 1) == 0) {
                continue;
            }
            int parity = 0;
            for (std::size_t q = 0; q < mode; ++q) {
                parity += (b >> q) & 1;
            }
            a(b ^ (Eigen::Index{1} << mode), b) = (parity % 2) ? -1.0 : 1.0;
        }
        return a;
    };
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            expected += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                        annihilate(i).adjoint() * annihilate(j);
        }
    }
    const auto op = jw_encode(OneBodyMatrix(m), true);
    EXPECT_LT((to_matrix(op) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(JordanWigner, RoundTripOnRandomMatrices) {
    std::mt19937_64 rng(9);
    for (std::size_t k = 1; k <= 6; ++k) {
        const Eigen::MatrixXd m = random_symmetric(k, rng);
        const Eigen::MatrixXcd back = one_hot_restrict(jw_encode(OneBodyMatrix(m)));
        EXPECT_LT((back - m.cast<Complex>()).cwiseAbs().maxCoeff(), 1e-10) << "k=" << k;
    }
}

TEST(GrayCode, BasisTwoMatrix) {
    const auto op = gray_encode(q2_matrix());
    const auto expected = load_pauli_sum(data("q2_gc.ops"));
    EXPECT_LT(oracle::max_coefficient_gap(op, expected), 1e-5);
    EXPECT_EQ(op.terms().size(), 3U);
}

TEST(GrayCode, DiagonalMultipleOfIdentity) {
    const auto op = gray_encode(OneBodyMatrix(2.5 * Eigen::MatrixXd::Identity(2, 2)));
    EXPECT_EQ(op, parse_pauli_sum("2.5 I"));
}

TEST(GrayCode, BasisFourDecodeReencode) {
    // The shipped four-mode GC operator must be a faithful dense expansion of
    // a real symmetric matrix in Gray order.
    const auto q4 = load_pauli_sum(data("q4_gc.ops"));
    const Eigen::MatrixXcd decoded = gray_decode(to_matrix(q4), 4);
    EXPECT_LT(decoded.imag().cwiseAbs().maxCoeff(), 1e-15);
    const auto op = gray_encode(OneBodyMatrix(decoded.real()));
    EXPECT_LT(oracle::max_coefficient_gap(op, q4), 1e-12);
}

TEST(GrayCode, RoundTripOnRandomMatrices) {
    std::mt19937_64 rng(10);
    for (std::size_t k = 1; k <= 9; ++k) {
        const Eigen::MatrixXd m = random_symmetric(k, rng);
        const auto op = gray_encode(OneBodyMatrix(m));
        EXPECT_EQ(op.num_qubits(), encoded_qubits(Encoding::GrayCode, k));
        const Eigen::MatrixXcd dense = to_matrix(op);
        EXPECT_LT((gray_decode(dense, k) - m.cast<Complex>()).cwiseAbs().maxCoeff(), 1e-10);
        // Unused codes stay empty.
        std::vector<bool> used(static_cast<std::size_t>(dense.rows()), false);
        for (std::size_t i = 0; i < k; ++i) {
            used[gray_code(i)] = true;
        }
        for (Eigen::Index r = 0; r < dense.rows(); ++r) {
            for (Eigen::Index c = 0; c < dense.cols(); ++c) {
                if (!used[static_cast<std::size_t>(r)] || !used[static_cast<std::size_t>(c)]) {
                    EXPECT_LT(std::abs(dense(r, c)), 1e-12);
                }
            }
        }
    }
}

TEST(GrayCode, DecodeRejectsTooManyModes) {
    EXPECT_THROW((void)gray_decode(Eigen::MatrixXcd::Identity(2, 2), 3), SizeMismatch);
}

TEST(OneHot, BasisTwoJwAgreesWithGcDecode) {
    const auto jw = one_hot_restrict(load_pauli_sum(data("q2_jw.ops")));
    const auto gc = gray_decode(to_matrix(load_pauli_sum(data("q2_gc.ops"))), 2);
    EXPECT_LT((jw - gc).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(OneHot, IdentityOnly) {
    const auto m = one_hot_restrict(parse_pauli_sum("1.0 I", 3));
    EXPECT_TRUE(m.isApprox(Eigen::MatrixXcd::Identity(3, 3)));
}

TEST(OneHot, AgreesWithDenseSubmatrix) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const auto op = oracle::random_pauli_sum(n, 8, rng);
        const auto full = oracle::dense(op);
        const auto m = one_hot_restrict(op);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_LT(std::abs(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                   full(Eigen::Index{1} << i, Eigen::Index{1} << j)),
                          1e-12);
            }
        }
    }
}

TEST(EncodeState, Placement) {
    const double amps[] = {0.2759, 0.9611};
    const auto gc = encode_state(Encoding::GrayCode, amps);
    ASSERT_EQ(gc.num_qubits(), 1U);
    EXPECT_NEAR(std::norm(gc[0]) + std::norm(gc[1]), 1.0, 1e-15);
    const auto jw = encode_state(Encoding::JordanWigner, amps);
    ASSERT_EQ(jw.num_qubits(), 2U);
    EXPECT_EQ(jw[0], Complex(0.0));
    EXPECT_EQ(jw[3], Complex(0.0));
    EXPECT_NEAR(jw[1].real(), gc[0].real(), 1e-15);
    EXPECT_NEAR(jw[2].real(), gc[1].real(), 1e-15);
}

TEST(CrossEncoding, ExpectationsAgree) {
    std::mt19937_64 rng(12);
    for (std::size_t k = 2; k <= 6; ++k) {
        const Eigen::MatrixXd m = random_symmetric(k, rng);
        const auto amps = oracle::random_real_unit(k, rng);
        const OneBodyMatrix om(m);
        const double gc = expectation_exact(gray_encode(om), encode_state(Encoding::GrayCode, amps));
        const double jw =
            expectation_exact(jw_encode(om), encode_state(Encoding::JordanWigner, amps));
        Eigen::VectorXd a(static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            a(static_cast<Eigen::Index>(i)) = amps[i];
        }
        const double direct = a.dot(m * a);
        EXPECT_NEAR(gc, jw, 1e-10);
        EXPECT_NEAR(gc, direct, 1e-10);
    }
}

TEST(CrossEncoding, BasisTwoQuadrupole) {
    const double amps[] = {0.2759, 0.9611};
    const double gc = expectation_exact(load_pauli_sum(data("q2_gc.ops")),
                                        encode_state(Encoding::GrayCode, amps));
    const double jw = expectation_exact(load_pauli_sum(data("q2_jw.ops")),
                                        encode_state(Encoding::JordanWigner, amps));
    EXPECT_NEAR(gc, -0.1846, 5e-4);
    EXPECT_NEAR(jw, gc, 1e-10);
}

TEST(Hermiticity, PreservedByBothEncodings) {
    std::mt19937_64 rng(13);
    for (std::size_t k = 1; k <= 5; ++k) {
        const OneBodyMatrix m(random_symmetric(k, rng));
        EXPECT_TRUE(is_hermitian(gray_encode(m)));
        EXPECT_TRUE(is_hermitian(jw_encode(m)));
        EXPECT_TRUE(is_hermitian(jw_encode(m, true)));
    }
}
