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
#include "qobs/pauli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qobs/error.hpp"

namespace qobs {

namespace {

using FactorMap = std::map<std::size_t, PauliAxis>;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

double parse_coefficient(std::string tok, std::size_t line) {
    // Accept U+2212 MINUS SIGN as '-'.
    if (tok.rfind("\xE2\x88\x92", 0) == 0) {
        tok = "-" + tok.substr(3);
    }
    std::string_view sv = tok;
    if (!sv.empty() && sv.front() == '+') {
        sv.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), value);
    if (ec != std::errc{} || ptr != sv.data() + sv.size() || !std::isfinite(value)) {
        throw ParseError("malformed coefficient '" + tok + "'", line);
    }
    return value;
}

// Canonical axis order inside a qubit: Z before X before Y.
int axis_rank(PauliAxis a) {
    switch (a) {
    case PauliAxis::Z:
        return 0;
    case PauliAxis::X:
        return 1;
    case PauliAxis::Y:
        return 2;
    default:
        return 3;
    }
}

bool canonical_less(const FactorMap &a, const FactorMap &b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(), [](const auto &x, const auto &y) {
            if (x.first != y.first) {
                return x.first < y.first;
            }
            return axis_rank(x.second) < axis_rank(y.second);
        });
}

// Shortest text that parses back to the same double.
std::string format_coefficient(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

std::vector<PauliFactor> PauliTerm::factor_list() const {
    std::vector<PauliFactor> out;
    out.reserve(factors.size());
    for (const auto &[q, a] : factors) {
        out.push_back({q, a});
    }
    return out;
}

std::string PauliTerm::label() const {
    if (factors.empty()) {
        return "I";
    }
    std::string s;
    for (const auto &[q, a] : factors) {
        if (!s.empty()) {
            s += ' ';
        }
        s += axis_letter(a);
        s += std::to_string(q);
    }
    return s;
}

// ---------------------------------------------------------------------------
// PauliSum

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms) : n_qubits_(n_qubits) {
    if (n_qubits == 0) {
        throw InvalidArgument("a Pauli sum needs at least one qubit");
    }
    std::map<FactorMap, double> merged;
    for (auto &t : terms) {
        if (!std::isfinite(t.coefficient)) {
            throw InvalidArgument("non-finite Pauli coefficient");
        }
        FactorMap clean;
        for (const auto &[q, a] : t.factors) {
            if (q >= n_qubits) {
                throw InvalidArgument("term " + t.label() + " acts outside " +
                                      std::to_string(n_qubits) + " qubits");
            }
            if (a != PauliAxis::I) {
                clean.emplace(q, a);
            }
        }
        merged[clean] += t.coefficient;
    }
    for (auto &[factors, c] : merged) {
        if (c != 0.0) {
            terms_.push_back({c, factors});
        }
    }
    std::sort(terms_.begin(), terms_.end(), [](const PauliTerm &a, const PauliTerm &b) {
        return canonical_less(a.factors, b.factors);
    });
}

PauliSum PauliSum::from_terms(std::vector<PauliTerm> terms) {
    std::size_t width = 1;
    for (const auto &t : terms) {
        if (!t.factors.empty()) {
            width = std::max(width, t.factors.rbegin()->first + 1);
        }
    }
    return PauliSum(width, std::move(terms));
}

double PauliSum::identity_coefficient() const noexcept {
    if (!terms_.empty() && terms_.front().is_identity()) {
        return terms_.front().coefficient;
    }
    return 0.0;
}

PauliSum PauliSum::widened(std::size_t n_qubits) const {
    if (n_qubits < n_qubits_) {
        throw SizeMismatch("cannot narrow a " + std::to_string(n_qubits_) + "-qubit operator to " +
                           std::to_string(n_qubits));
    }
    return PauliSum(n_qubits, terms_);
}

PauliSum operator+(const PauliSum &a, const PauliSum &b) {
    std::vector<PauliTerm> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return PauliSum(std::max(a.n_qubits_, b.n_qubits_), std::move(terms));
}

PauliSum operator*(double scale, const PauliSum &op) {
    std::vector<PauliTerm> terms = op.terms_;
    for (auto &t : terms) {
        t.coefficient *= scale;
    }
    return PauliSum(op.n_qubits_, std::move(terms));
}

bool operator==(const PauliSum &a, const PauliSum &b) {
    if (a.n_qubits_ != b.n_qubits_ || a.terms_.size() != b.terms_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].coefficient != b.terms_[i].coefficient ||
            a.terms_[i].factors != b.terms_[i].factors) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Text format

PauliSum parse_pauli_sum(std::string_view text, std::optional<std::size_t> n_qubits) {
    std::vector<PauliTerm> terms;
    std::size_t width = 1;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto tokens = split_ws(line);
        PauliTerm term;
        term.coefficient = parse_coefficient(tokens[0], line_no);
        for (std::size_t k = 1; k < tokens.size(); ++k) {
            const std::string &tok = tokens[k];
            PauliAxis axis{};
            switch (tok[0]) {
            case 'I':
                axis = PauliAxis::I;
                break;
            case 'X':
                axis = PauliAxis::X;
                break;
            case 'Y':
                axis = PauliAxis::Y;
                break;
            case 'Z':
                axis = PauliAxis::Z;
                break;
            default:
                throw ParseError("unknown Pauli factor '" + tok + "'", line_no);
            }
            if (tok.size() == 1) {
                if (axis != PauliAxis::I) {
                    throw ParseError("factor '" + tok + "' is missing its qubit index", line_no);
                }
                continue;
            }
            if (tok[1] == '-') {
                throw ParseError("negative qubit index in '" + tok + "'", line_no);
            }
            std::size_t index = 0;
            const char *first = tok.data() + 1;
            const char *last = tok.data() + tok.size();
            const auto [ptr, ec] = std::from_chars(first, last, index);
            if (ec != std::errc{} || ptr != last) {
                throw ParseError("malformed qubit index in '" + tok + "'", line_no);
            }
            if (index >= 63) {
                throw ParseError("qubit index " + std::to_string(index) + " too large", line_no);
            }
            width = std::max(width, index + 1);
            if (axis == PauliAxis::I) {
                continue;
            }
            if (!term.factors.emplace(index, axis).second) {
                throw ParseError("qubit " + std::to_string(index) + " appears twice in one term",
                                 line_no);
            }
        }
        terms.push_back(std::move(term));
    }
    if (terms.empty()) {
        throw ParseError("operator text contains no terms", line_no);
    }
    if (n_qubits) {
        if (*n_qubits < width) {
            throw SizeMismatch("operator needs " + std::to_string(width) + " qubits, " +
                               std::to_string(*n_qubits) + " requested");
        }
        width = *n_qubits;
    }
    return PauliSum(width, std::move(terms));
}

PauliSum load_pauli_sum(const std::filesystem::path &path, std::optional<std::size_t> n_qubits) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot read operator file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pauli_sum(buf.str(), n_qubits);
}

std::string format_pauli_sum(const PauliSum &op) {
    std::string out;
    for (const auto &t : op.terms()) {
        out += format_coefficient(t.coefficient);
        out += ' ';
        out += t.label();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dense and statevector evaluation

Eigen::MatrixXcd to_matrix(const PauliSum &op) {
    const std::size_t n = op.num_qubits();
    if (n > kMaxDenseQubits) {
        throw ResourceError("to_matrix: " + std::to_string(n) + " qubits exceeds cap of " +
                            std::to_string(kMaxDenseQubits));
    }
    const std::uint64_t dim = std::uint64_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto &t : op.terms()) {
        const auto factors = t.factor_list();
        const PauliMasks masks = pauli_masks(factors);
        for (std::uint64_t b = 0; b < dim; ++b) {
            m(static_cast<Eigen::Index>(b ^ masks.flip), static_cast<Eigen::Index>(b)) +=
                t.coefficient * masks.phase_of(b);
        }
    }
    return m;
}

std::vector<Complex> apply_operator(const PauliSum &op, const StateVector &state) {
    if (op.num_qubits() != state.num_qubits()) {
        throw SizeMismatch("operator acts on " + std::to_string(op.num_qubits()) +
                           " qubits, state has " + std::to_string(state.num_qubits()));
    }
    std::vector<Complex> out(state.dimension(), Complex{0.0, 0.0});
    for (const auto &t : op.terms()) {
        const auto factors = t.factor_list();
        const PauliMasks masks = pauli_masks(factors);
        for (std::uint64_t b = 0; b < out.size(); ++b) {
            out[b ^ masks.flip] += t.coefficient * masks.phase_of(b) * state[b];
        }
    }
    return out;
}

double expectation_exact(const PauliSum &op, const StateVector &state) {
    const auto image = apply_operator(op, state);
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < image.size(); ++i) {
        acc += std::conj(state[i]) * image[i];
    }
    return acc.real();
}

bool is_hermitian(const PauliSum &op) {
    for (const auto &t : op.terms()) {
        if (!std::isfinite(t.coefficient)) {
            return false;
        }
    }
    if (op.num_qubits() > kMaxDenseQubits) {
        return true; // real-weighted Pauli strings are Hermitian term by term
    }
    const Eigen::MatrixXcd m = to_matrix(op);
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12;
}

// ---------------------------------------------------------------------------
// LCU normal form

Gate SignedPauli::as_gate(std::size_t offset) const {
    std::vector<PauliFactor> shifted = factors;
    for (auto &f : shifted) {
        f.qubit += offset;
    }
    return Gate::pauli_string(shifted, sign);
}

std::string SignedPauli::label() const {
    std::string s = sign < 0 ? "-" : "+";
    if (factors.empty()) {
        return s + "I";
    }
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (k > 0) {
            s += ' ';
        }
        s += axis_letter(factors[k].axis);
        s += std::to_string(factors[k].qubit);
    }
    return s;
}

PauliSum LcuForm::encoded_operator() const {
    std::vector<PauliTerm> terms;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        PauliTerm t;
        t.coefficient = unitaries[i].sign * betas[i];
        for (const auto &f : unitaries[i].factors) {
            t.factors.emplace(f.qubit, f.axis);
        }
        terms.push_back(std::move(t));
    }
    return PauliSum(n_qubits, std::move(terms));
}

PauliSum LcuForm::reconstruct() const {
    PauliSum body = encoded_operator();
    if (identity_offset == 0.0) {
        return body;
    }
    return body + PauliSum(n_qubits, {PauliTerm{identity_offset, {}}});
}

LcuForm lcu_normal_form(const PauliSum &op, bool drop_identity) {
    LcuForm form;
    form.n_qubits = op.num_qubits();
    for (const auto &t : op.terms()) {
        if (t.is_identity() && drop_identity) {
            form.identity_offset = t.coefficient;
            continue;
        }
        form.betas.push_back(std::abs(t.coefficient));
        form.unitaries.push_back({t.coefficient < 0 ? -1.0 : 1.0, t.factor_list()});
        form.lambda += std::abs(t.coefficient);
    }
    if (form.betas.empty()) {
        throw InvalidArgument("operator has no non-identity terms to block-encode");
    }
    return form;
}

} // namespace qobs
