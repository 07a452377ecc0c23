#pragma once

// Independent dense references used by the tests. Everything here is built
// from explicit 2x2 matrices and Kronecker products so it shares no code
// with the mask-based kernels under test.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <random>
#include <vector>

#include "qobs/pauli.hpp"
#include "qobs/simulator.hpp"

namespace qobs::oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli_2x2(PauliAxis axis) {
    using C = std::complex<double>;
    Mat m(2, 2);
    switch (axis) {
    case PauliAxis::X:
        m << 0, 1, 1, 0;
        break;
    case PauliAxis::Y:
        m << 0, C(0, -1), C(0, 1), 0;
        break;
    case PauliAxis::Z:
        m << 1, 0, 0, -1;
        break;
    default:
        m = Mat::Identity(2, 2);
    }
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Qubit 0 is the least significant bit, so it is the rightmost kron factor.
inline Mat dense_term(const PauliTerm &term, std::size_t n) {
    Mat out = Mat::Identity(1, 1);
    for (std::size_t q = n; q-- > 0;) {
        auto it = term.factors.find(q);
        out = kron(out, pauli_2x2(it == term.factors.end() ? PauliAxis::I : it->second));
    }
    return out;
}

inline Mat dense(const PauliSum &op) {
    const auto n = op.num_qubits();
    Mat out = Mat::Zero(1 << n, 1 << n);
    for (const auto &t : op.terms()) {
        out += t.coefficient * dense_term(t, n);
    }
    return out;
}

inline Vec to_vec(const StateVector &s) {
    Vec v(static_cast<Eigen::Index>(s.dimension()));
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

inline StateVector random_state(std::size_t n, std::mt19937_64 &rng, bool real = false) {
    std::normal_distribution<double> g;
    std::vector<Complex> amps(std::size_t{1} << n);
    for (auto &a : amps) {
        a = real ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng));
    }
    auto s = StateVector::from_amplitudes(std::move(amps));
    s.normalize();
    return s;
}

inline std::vector<double> random_real_unit(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<double> v(dim);
    double nrm = 0.0;
    for (auto &x : v) {
        x = g(rng);
        nrm += x * x;
    }
    for (auto &x : v) {
        x /= std::sqrt(nrm);
    }
    return v;
}

// Random Hermitian Pauli sum with up to max_terms distinct non-identity terms
// plus an optional identity term.
inline PauliSum random_pauli_sum(std::size_t n, std::size_t max_terms, std::mt19937_64 &rng,
                                 bool with_identity = true) {
    std::uniform_int_distribution<int> axis(0, 3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> count(1, max_terms);
    std::vector<PauliTerm> terms;
    const auto k = count(rng);
    while (terms.size() < k) {
        PauliTerm t;
        t.coefficient = coef(rng);
        for (std::size_t q = 0; q < n; ++q) {
            const int a = axis(rng);
            if (a != 0) {
                t.factors[q] = static_cast<PauliAxis>(a);
            }
        }
        if (t.factors.empty()) {
            continue;
        }
        terms.push_back(t);
    }
    if (with_identity) {
        terms.push_back({coef(rng), {}});
    }
    return PauliSum(n, std::move(terms));
}

// Random preparation circuit producing a generic complex state.
inline Circuit random_prep(std::size_t n, std::mt19937_64 &rng, int layers = 3) {
    std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
    Circuit c(n);
    for (int l = 0; l < layers; ++l) {
        for (std::size_t q = 0; q < n; ++q) {
            c.ry(q, angle(rng));
            c.add(Gate::rz(q, angle(rng)));
        }
        for (std::size_t q = 0; q + 1 < n; ++q) {
            c.cnot(q, q + 1);
        }
    }
    return c;
}

// Largest coefficient difference between two sums, matching terms by label;
// a term missing on one side counts with coefficient 0.
inline double max_coefficient_gap(const PauliSum &a, const PauliSum &b) {
    std::map<std::string, double> diff;
    for (const auto &t : a.terms()) {
        diff[t.label()] += t.coefficient;
    }
    for (const auto &t : b.terms()) {
        diff[t.label()] -= t.coefficient;
    }
    double worst = 0.0;
    for (const auto &[label, d] : diff) {
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

// Distance up to a global phase.
inline double phase_distance(const Vec &a, const Vec &b) {
    const std::complex<double> ov = a.dot(b);
    const std::complex<double> ph = std::abs(ov) > 0 ? ov / std::abs(ov) : 1.0;
    return (a * ph - b).norm();
}

} // namespace qobs::oracle
