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
#include "qobs/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "qobs/error.hpp"

namespace qobs {

namespace {

constexpr Complex kI{0.0, 1.0};

using Matrix2 = std::array<Complex, 4>; // row-major

Matrix2 gate_matrix(const Gate &gate) {
    const double half = gate.angle() / 2.0;
    switch (gate.kind()) {
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
        return {0.0, -kI, kI, 0.0};
    case GateKind::Z:
        return {1.0, 0.0, 0.0, -1.0};
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        return {r, r, r, -r};
    }
    case GateKind::S:
        return {1.0, 0.0, 0.0, kI};
    case GateKind::Sdg:
        return {1.0, 0.0, 0.0, -kI};
    case GateKind::RY:
        return {std::cos(half), -std::sin(half), std::sin(half), std::cos(half)};
    case GateKind::RZ:
        return {std::polar(1.0, -half), 0.0, 0.0, std::polar(1.0, half)};
    default:
        break;
    }
    throw InvalidArgument("gate has no 2x2 matrix");
}

std::uint64_t mask_of(const std::vector<std::size_t> &qubits) {
    std::uint64_t mask = 0;
    for (auto q : qubits) {
        mask |= std::uint64_t{1} << q;
    }
    return mask;
}

const char *kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::X:
        return "X";
    case GateKind::Y:
        return "Y";
    case GateKind::Z:
        return "Z";
    case GateKind::H:
        return "H";
    case GateKind::S:
        return "S";
    case GateKind::Sdg:
        return "SDG";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::Swap:
        return "SWAP";
    case GateKind::PauliString:
        return "PAULI";
    }
    return "?";
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

char axis_letter(PauliAxis axis) noexcept {
    switch (axis) {
    case PauliAxis::X:
        return 'X';
    case PauliAxis::Y:
        return 'Y';
    case PauliAxis::Z:
        return 'Z';
    default:
        return 'I';
    }
}

Complex PauliMasks::phase_of(std::uint64_t basis) const noexcept {
    static constexpr Complex powers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const unsigned parity = static_cast<unsigned>(std::popcount(basis & phase)) & 1U;
    return powers[(y_count + 2 * parity) & 3U];
}

PauliMasks pauli_masks(std::span<const PauliFactor> factors, std::size_t offset) {
    PauliMasks m;
    for (const auto &f : factors) {
        const std::uint64_t bit = std::uint64_t{1} << (f.qubit + offset);
        switch (f.axis) {
        case PauliAxis::X:
            m.flip |= bit;
            break;
        case PauliAxis::Y:
            m.flip |= bit;
            m.phase |= bit;
            ++m.y_count;
            break;
        case PauliAxis::Z:
            m.phase |= bit;
            break;
        case PauliAxis::I:
            break;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::size_t n_qubits)
    : n_qubits_(n_qubits), amps_(std::size_t{1} << n_qubits, Complex{0.0, 0.0}) {
    if (n_qubits == 0) {
        throw InvalidArgument("a state needs at least one qubit");
    }
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw SizeMismatch("amplitude count " + std::to_string(dim) +
                           " is not a power of two >= 2");
    }
    StateVector s(static_cast<std::size_t>(std::countr_zero(dim)));
    s.amps_ = std::move(amplitudes);
    return s;
}

double StateVector::norm() const noexcept {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

void StateVector::normalize() {
    const double n = norm();
    if (n < 1e-300) {
        throw DegeneratePostSelection("cannot normalize a null vector");
    }
    for (auto &a : amps_) {
        a /= n;
    }
}

StateVector new_state(std::size_t n_qubits, std::size_t cap) {
    if (n_qubits < 1) {
        throw InvalidArgument("n_qubits must be >= 1");
    }
    if (n_qubits > cap) {
        throw ResourceError("requested " + std::to_string(n_qubits) + " qubits, cap is " +
                            std::to_string(cap));
    }
    return StateVector(n_qubits);
}

// ---------------------------------------------------------------------------
// Gate

Gate::Gate(GateKind kind, std::vector<std::size_t> targets)
    : kind_(kind), targets_(std::move(targets)) {}

Gate Gate::x(std::size_t t) { return Gate(GateKind::X, {t}); }
Gate Gate::y(std::size_t t) { return Gate(GateKind::Y, {t}); }
Gate Gate::z(std::size_t t) { return Gate(GateKind::Z, {t}); }
Gate Gate::h(std::size_t t) { return Gate(GateKind::H, {t}); }
Gate Gate::s(std::size_t t) { return Gate(GateKind::S, {t}); }
Gate Gate::sdg(std::size_t t) { return Gate(GateKind::Sdg, {t}); }

Gate Gate::ry(std::size_t t, double angle) {
    if (!std::isfinite(angle)) {
        throw InvalidArgument("RY angle must be finite");
    }
    Gate g(GateKind::RY, {t});
    g.angle_ = angle;
    return g;
}

Gate Gate::rz(std::size_t t, double angle) {
    if (!std::isfinite(angle)) {
        throw InvalidArgument("RZ angle must be finite");
    }
    Gate g(GateKind::RZ, {t});
    g.angle_ = angle;
    return g;
}

Gate Gate::swap(std::size_t a, std::size_t b) {
    Gate g(GateKind::Swap, {a, b});
    g.check_disjoint();
    return g;
}

Gate Gate::pauli_string(std::span<const PauliFactor> factors, double sign) {
    if (sign != 1.0 && sign != -1.0) {
        throw InvalidArgument("Pauli-string sign must be +1 or -1");
    }
    Gate g(GateKind::PauliString, {});
    for (const auto &f : factors) {
        if (f.axis == PauliAxis::I) {
            continue;
        }
        g.targets_.push_back(f.qubit);
        g.axes_.push_back(f.axis);
    }
    g.sign_ = sign;
    g.check_disjoint();
    return g;
}

void Gate::check_disjoint() const {
    std::vector<std::size_t> all = targets_;
    all.insert(all.end(), controls_.begin(), controls_.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw InvalidArgument(std::string(kind_name(kind_)) +
                              ": targets and controls must be distinct qubits");
    }
    for (auto q : all) {
        if (q >= 63) {
            throw InvalidArgument("qubit index " + std::to_string(q) + " out of range");
        }
    }
}

Gate Gate::controlled(std::vector<std::size_t> controls) const {
    Gate g = *this;
    g.controls_.insert(g.controls_.end(), controls.begin(), controls.end());
    g.check_disjoint();
    return g;
}

Gate Gate::inverse() const {
    Gate g = *this;
    switch (kind_) {
    case GateKind::S:
        g.kind_ = GateKind::Sdg;
        break;
    case GateKind::Sdg:
        g.kind_ = GateKind::S;
        break;
    case GateKind::RY:
    case GateKind::RZ:
        g.angle_ = -angle_;
        break;
    default:
        break; // self-inverse
    }
    return g;
}

Gate Gate::shifted(std::size_t offset) const {
    Gate g = *this;
    for (auto &q : g.targets_) {
        q += offset;
    }
    for (auto &q : g.controls_) {
        q += offset;
    }
    g.check_disjoint();
    return g;
}

long Gate::max_qubit() const noexcept {
    long m = -1;
    for (auto q : targets_) {
        m = std::max(m, static_cast<long>(q));
    }
    for (auto q : controls_) {
        m = std::max(m, static_cast<long>(q));
    }
    return m;
}

std::string Gate::to_string() const {
    std::ostringstream out;
    out << kind_name(kind_);
    if (kind_ == GateKind::RY || kind_ == GateKind::RZ) {
        out << '(' << format_double(angle_) << ')';
    } else if (kind_ == GateKind::PauliString) {
        out << '(' << (sign_ < 0 ? '-' : '+');
        for (auto a : axes_) {
            out << axis_letter(a);
        }
        out << ')';
    }
    for (auto t : targets_) {
        out << ' ' << t;
    }
    out << " |";
    for (auto c : controls_) {
        out << ' ' << c;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Circuit

Circuit &Circuit::add(Gate gate) {
    if (gate.max_qubit() >= static_cast<long>(n_qubits_)) {
        throw InvalidArgument("gate " + gate.to_string() + " exceeds circuit width " +
                              std::to_string(n_qubits_));
    }
    ops_.push_back(std::move(gate));
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    if (other.n_qubits_ > n_qubits_) {
        throw SizeMismatch("appended circuit is wider than the target circuit");
    }
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit inv(n_qubits_);
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        inv.ops_.push_back(it->inverse());
    }
    return inv;
}

Circuit Circuit::embedded(std::size_t offset, std::size_t new_width) const {
    if (offset + n_qubits_ > new_width) {
        throw SizeMismatch("embedding does not fit into " + std::to_string(new_width) +
                           " qubits");
    }
    Circuit out(new_width);
    for (const auto &g : ops_) {
        out.ops_.push_back(g.shifted(offset));
    }
    return out;
}

std::string Circuit::dump() const {
    std::string out;
    for (const auto &g : ops_) {
        out += g.to_string();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Application

void apply(StateVector &state, const Gate &gate) {
    const std::size_t n = state.num_qubits();
    if (gate.max_qubit() >= static_cast<long>(n)) {
        throw InvalidArgument("gate " + gate.to_string() + " out of range for " +
                              std::to_string(n) + "-qubit state");
    }
    auto amps = state.amplitudes();
    const std::uint64_t dim = amps.size();
    const std::uint64_t cmask = mask_of(gate.controls());

    switch (gate.kind()) {
    case GateKind::Swap: {
        const std::uint64_t a = std::uint64_t{1} << gate.targets()[0];
        const std::uint64_t b = std::uint64_t{1} << gate.targets()[1];
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & cmask) == cmask && (i & a) && !(i & b)) {
                std::swap(amps[i], amps[i ^ a ^ b]);
            }
        }
        return;
    }
    case GateKind::PauliString: {
        std::vector<PauliFactor> factors;
        for (std::size_t k = 0; k < gate.targets().size(); ++k) {
            factors.push_back({gate.targets()[k], gate.axes()[k]});
        }
        const PauliMasks m = pauli_masks(factors);
        const double sign = gate.sign();
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & cmask) != cmask) {
                continue;
            }
            const std::uint64_t j = i ^ m.flip;
            if (j == i) {
                amps[i] *= sign * m.phase_of(i);
            } else if (i < j) {
                const Complex ai = amps[i];
                const Complex aj = amps[j];
                amps[j] = sign * m.phase_of(i) * ai;
                amps[i] = sign * m.phase_of(j) * aj;
            }
        }
        return;
    }
    default:
        break;
    }

    const Matrix2 u = gate_matrix(gate);
    const std::uint64_t tbit = std::uint64_t{1} << gate.targets()[0];
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tbit) || (i & cmask) != cmask) {
            continue;
        }
        const std::uint64_t j = i | tbit;
        const Complex a0 = amps[i];
        const Complex a1 = amps[j];
        amps[i] = u[0] * a0 + u[1] * a1;
        amps[j] = u[2] * a0 + u[3] * a1;
    }
}

void run_circuit(StateVector &state, const Circuit &circuit) {
    if (circuit.num_qubits() > state.num_qubits()) {
        throw SizeMismatch("circuit width " + std::to_string(circuit.num_qubits()) +
                           " exceeds state width " + std::to_string(state.num_qubits()));
    }
    for (const auto &g : circuit.ops()) {
        apply(state, g);
    }
}

StateVector prepare(const Circuit &circuit) {
    StateVector s = new_state(std::max<std::size_t>(circuit.num_qubits(), 1));
    run_circuit(s, circuit);
    return s;
}

std::vector<double> probabilities(const StateVector &state) {
    std::vector<double> p(state.dimension());
    auto amps = state.amplitudes();
    std::transform(amps.begin(), amps.end(), p.begin(), [](Complex a) { return std::norm(a); });
    return p;
}

std::vector<double> marginal_distribution(const StateVector &state,
                                          std::span<const std::size_t> qubits) {
    for (auto q : qubits) {
        if (q >= state.num_qubits()) {
            throw InvalidArgument("qubit " + std::to_string(q) + " out of range");
        }
    }
    std::vector<double> dist(std::size_t{1} << qubits.size(), 0.0);
    auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        std::uint64_t key = 0;
        for (std::size_t m = 0; m < qubits.size(); ++m) {
            key |= ((i >> qubits[m]) & 1U) << m;
        }
        dist[key] += std::norm(amps[i]);
    }
    return dist;
}

double marginal_probability(const StateVector &state, std::span<const std::size_t> qubits,
                            std::span<const int> outcome) {
    if (qubits.size() != outcome.size()) {
        throw SizeMismatch("marginal_probability: " + std::to_string(qubits.size()) +
                           " qubits but " + std::to_string(outcome.size()) + " outcome bits");
    }
    std::uint64_t key = 0;
    for (std::size_t m = 0; m < outcome.size(); ++m) {
        if (outcome[m] != 0 && outcome[m] != 1) {
            throw InvalidArgument("outcome bits must be 0 or 1");
        }
        key |= static_cast<std::uint64_t>(outcome[m]) << m;
    }
    return marginal_distribution(state, qubits)[key];
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw SizeMismatch("inner_product: " + std::to_string(a.num_qubits()) + " vs " +
                           std::to_string(b.num_qubits()) + " qubits");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

double fidelity(const StateVector &a, const StateVector &b) {
    return std::norm(inner_product(a, b));
}

// ---------------------------------------------------------------------------
// Sampling

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(seed ^ mix(stream));
}

Rng make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Rng(seq);
}

std::vector<std::uint64_t> multinomial(std::span<const double> probs, std::uint64_t shots,
                                       Rng &rng) {
    std::vector<std::uint64_t> counts(probs.size(), 0);
    double total = 0.0;
    std::size_t last = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            total += probs[i];
            last = i;
        }
    }
    if (last == probs.size()) {
        throw InvalidArgument("cannot sample from an all-zero distribution");
    }
    std::uint64_t remaining = shots;
    double remaining_mass = total;
    for (std::size_t i = 0; i < last && remaining > 0; ++i) {
        if (probs[i] <= 0.0) {
            continue;
        }
        const double p = std::clamp(probs[i] / remaining_mass, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> draw(remaining, p);
        const std::uint64_t c = draw(rng);
        counts[i] = c;
        remaining -= c;
        remaining_mass -= probs[i];
    }
    counts[last] += remaining;
    return counts;
}

std::string bitstring(std::uint64_t index, std::size_t n_qubits) {
    std::string s(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if ((index >> q) & 1U) {
            s[n_qubits - 1 - q] = '1';
        }
    }
    return s;
}

std::map<std::string, std::uint64_t> sample(const StateVector &state, std::uint64_t shots,
                                            std::uint64_t seed) {
    if (shots == 0) {
        throw InvalidArgument("shots must be >= 1");
    }
    Rng rng = make_rng(seed);
    const auto probs = probabilities(state);
    const auto counts = multinomial(probs, shots, rng);
    std::map<std::string, std::uint64_t> out;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            out.emplace(bitstring(i, state.num_qubits()), counts[i]);
        }
    }
    return out;
}

std::vector<std::uint64_t> sample_qubits(const StateVector &state,
                                         std::span<const std::size_t> qubits,
                                         std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw InvalidArgument("shots must be >= 1");
    }
    Rng rng = make_rng(seed);
    const auto dist = marginal_distribution(state, qubits);
    return multinomial(dist, shots, rng);
}

Circuit real_state_preparation(std::span<const double> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw SizeMismatch("amplitude count " + std::to_string(dim) +
                           " is not a power of two >= 2");
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(dim));
    Circuit circuit(n);

    auto block_norm = [&](std::uint64_t start, std::uint64_t len) {
        double acc = 0.0;
        for (std::uint64_t i = start; i < start + len; ++i) {
            acc += amplitudes[i] * amplitudes[i];
        }
        return std::sqrt(acc);
    };

    for (std::size_t level = 0; level < n; ++level) {
        const std::size_t q = n - 1 - level;
        const std::uint64_t half = std::uint64_t{1} << q;
        for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << level); ++prefix) {
            const std::uint64_t start = prefix << (q + 1);
            double angle = 0.0;
            if (q == 0) {
                angle = 2.0 * std::atan2(amplitudes[start + 1], amplitudes[start]);
            } else {
                angle = 2.0 * std::atan2(block_norm(start + half, half), block_norm(start, half));
            }
            if (angle == 0.0) {
                continue;
            }
            std::vector<std::size_t> controls;
            std::vector<std::size_t> flipped;
            for (std::size_t c = q + 1; c < n; ++c) {
                controls.push_back(c);
                if (((prefix >> (c - q - 1)) & 1U) == 0) {
                    flipped.push_back(c);
                }
            }
            for (auto c : flipped) {
                circuit.x(c);
            }
            circuit.add(Gate::ry(q, angle).controlled(controls));
            for (auto c : flipped) {
                circuit.x(c);
            }
        }
    }
    return circuit;
}

} // namespace qobs
