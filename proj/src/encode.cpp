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

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qobs/error.hpp"

namespace qobs {

OneBodyMatrix::OneBodyMatrix(Eigen::MatrixXd entries, std::vector<BasisLabel> labels)
    : entries_(std::move(entries)), labels_(std::move(labels)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw InvalidArgument("one-body matrix must be square and non-empty");
    }
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidArgument("one-body matrix is not symmetric");
    }
    if (!labels_.empty() && labels_.size() != size()) {
        throw SizeMismatch("one-body matrix has " + std::to_string(size()) + " modes but " +
                           std::to_string(labels_.size()) + " basis labels");
    }
}

OneBodyMatrix parse_one_body_matrix(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<double> values;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream fields(line);
        std::string tok;
        while (fields >> tok) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(tok, &used));
                if (used != tok.size()) {
                    throw std::invalid_argument(tok);
                }
            } catch (const std::exception &) {
                throw ParseError("malformed number '" + tok + "'", line_no);
            }
        }
    }
    if (values.empty()) {
        throw ParseError("matrix file is empty", line_no);
    }
    const double kd = values.front();
    if (kd < 1 || kd != std::floor(kd)) {
        throw ParseError("first entry must be the mode count k", 1);
    }
    const auto k = static_cast<std::size_t>(kd);
    if (values.size() != 1 + k * k) {
        throw ParseError("expected " + std::to_string(k * k) + " matrix entries, found " +
                             std::to_string(values.size() - 1),
                         line_no);
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[1 + i * k + j];
        }
    }
    return OneBodyMatrix(std::move(m));
}

OneBodyMatrix load_one_body_matrix(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot read matrix file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_one_body_matrix(buf.str());
}

std::size_t encoded_qubits(Encoding encoding, std::size_t k) {
    if (k == 0) {
        throw InvalidArgument("mode count must be >= 1");
    }
    if (encoding == Encoding::JordanWigner) {
        return k;
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::bit_width(k - 1)));
}

std::uint64_t encoded_index(Encoding encoding, std::size_t mode) {
    return encoding == Encoding::JordanWigner ? (std::uint64_t{1} << mode) : gray_code(mode);
}

PauliSum jw_encode(const OneBodyMatrix &m, bool strict_jw) {
    const std::size_t k = m.size();
    std::vector<PauliTerm> terms;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = m(i, i);
        terms.push_back({d / 2.0, {}});
        terms.push_back({-d / 2.0, {{i, PauliAxis::Z}}});
        for (std::size_t j = i + 1; j < k; ++j) {
            const double c = m(i, j) / 2.0;
            std::map<std::size_t, PauliAxis> string;
            if (strict_jw) {
                for (std::size_t q = i + 1; q < j; ++q) {
                    string.emplace(q, PauliAxis::Z);
                }
            }
            auto xx = string;
            xx.emplace(i, PauliAxis::X);
            xx.emplace(j, PauliAxis::X);
            auto yy = string;
            yy.emplace(i, PauliAxis::Y);
            yy.emplace(j, PauliAxis::Y);
            terms.push_back({c, std::move(xx)});
            terms.push_back({c, std::move(yy)});
        }
    }
    return PauliSum(k, std::move(terms));
}

PauliSum gray_encode(const OneBodyMatrix &m) {
    const std::size_t k = m.size();
    const std::size_t n = encoded_qubits(Encoding::GrayCode, k);
    if (n > kMaxDenseQubits) {
        throw ResourceError("gray_encode: " + std::to_string(n) + " qubits exceeds dense cap");
    }
    const std::uint64_t dim = std::uint64_t{1} << n;
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                   static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            padded(static_cast<Eigen::Index>(gray_code(i)), static_cast<Eigen::Index>(gray_code(j))) =
                m(i, j);
        }
    }

    // c_P = Tr(P M) / 2^n, Tr(P M) = sum_c phase(c) M[c, c ^ flip].
    std::vector<PauliTerm> terms;
    const std::uint64_t strings = std::uint64_t{1} << (2 * n);
    for (std::uint64_t code = 0; code < strings; ++code) {
        std::map<std::size_t, PauliAxis> factors;
        for (std::size_t q = 0; q < n; ++q) {
            const auto axis = static_cast<PauliAxis>((code >> (2 * q)) & 3U);
            if (axis != PauliAxis::I) {
                factors.emplace(q, axis);
            }
        }
        std::vector<PauliFactor> list;
        for (const auto &[q, a] : factors) {
            list.push_back({q, a});
        }
        const PauliMasks masks = pauli_masks(list);
        Complex trace{0.0, 0.0};
        for (std::uint64_t c = 0; c < dim; ++c) {
            trace += masks.phase_of(c) * padded(static_cast<Eigen::Index>(c),
                                                static_cast<Eigen::Index>(c ^ masks.flip));
        }
        const double coeff = trace.real() / static_cast<double>(dim);
        if (std::abs(coeff) >= 1e-12) {
            terms.push_back({coeff, std::move(factors)});
        }
    }
    return PauliSum(n, std::move(terms));
}

Eigen::MatrixXcd one_hot_restrict(const PauliSum &op) {
    const std::size_t k = op.num_qubits();
    if (k > kMaxDenseQubits) {
        throw ResourceError("one_hot_restrict: " + std::to_string(k) + " qubits exceeds cap of " +
                            std::to_string(kMaxDenseQubits));
    }
    const auto K = static_cast<Eigen::Index>(k);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(K, K);
    for (const auto &t : op.terms()) {
        const auto factors = t.factor_list();
        const PauliMasks masks = pauli_masks(factors);
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint64_t col = std::uint64_t{1} << j;
            const std::uint64_t row = col ^ masks.flip;
            if (!std::has_single_bit(row)) {
                continue;
            }
            const auto i = static_cast<Eigen::Index>(std::countr_zero(row));
            out(i, static_cast<Eigen::Index>(j)) += t.coefficient * masks.phase_of(col);
        }
    }
    return out;
}

Eigen::MatrixXcd gray_decode(const Eigen::MatrixXcd &dense, std::size_t k) {
    const auto K = static_cast<Eigen::Index>(k);
    if (k == 0 || (std::uint64_t{1} << std::bit_width(k - 1)) > static_cast<std::uint64_t>(dense.rows())) {
        throw SizeMismatch("gray_decode: " + std::to_string(k) + " modes do not fit a " +
                           std::to_string(dense.rows()) + "-dimensional matrix");
    }
    Eigen::MatrixXcd out(K, K);
    for (Eigen::Index i = 0; i < K; ++i) {
        for (Eigen::Index j = 0; j < K; ++j) {
            out(i, j) = dense(static_cast<Eigen::Index>(gray_code(static_cast<std::uint64_t>(i))),
                              static_cast<Eigen::Index>(gray_code(static_cast<std::uint64_t>(j))));
        }
    }
    return out;
}

StateVector encode_state(Encoding encoding, std::span<const double> mode_amplitudes) {
    const std::size_t k = mode_amplitudes.size();
    StateVector s = new_state(encoded_qubits(encoding, k));
    s[0] = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        s[encoded_index(encoding, i)] = mode_amplitudes[i];
    }
    s.normalize();
    return s;
}

} // namespace qobs
