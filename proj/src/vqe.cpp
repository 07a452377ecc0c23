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
#include "qobs/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qobs/error.hpp"
#include "qobs/overlap.hpp"

namespace qobs {

std::size_t Ansatz::parameter_count() const {
    if (std::holds_alternative<SingleRY>(layout)) {
        return 1;
    }
    const int depth = std::get<RYCnotLadder>(layout).depth;
    return n_qubits * static_cast<std::size_t>(depth + 1);
}

Circuit prepare_ansatz(const Ansatz &ansatz, std::span<const double> params) {
    if (params.size() != ansatz.parameter_count()) {
        throw SizeMismatch("ansatz takes " + std::to_string(ansatz.parameter_count()) +
                           " parameters, got " + std::to_string(params.size()));
    }
    if (std::holds_alternative<SingleRY>(ansatz.layout)) {
        if (ansatz.n_qubits != 1) {
            throw InvalidArgument("SingleRY ansatz is defined on one qubit");
        }
        Circuit c(1);
        c.ry(0, params[0]);
        return c;
    }
    const int depth = std::get<RYCnotLadder>(ansatz.layout).depth;
    if (depth < 0) {
        throw InvalidArgument("ladder depth must be >= 0");
    }
    const std::size_t n = ansatz.n_qubits;
    Circuit c(n);
    std::size_t k = 0;
    for (std::size_t q = 0; q < n; ++q) {
        c.ry(q, params[k++]);
    }
    for (int d = 0; d < depth; ++d) {
        for (std::size_t q = 0; q + 1 < n; ++q) {
            c.cnot(q, q + 1);
        }
        for (std::size_t q = 0; q < n; ++q) {
            c.ry(q, params[k++]);
        }
    }
    return c;
}

double energy(const PauliSum &hamiltonian, const Ansatz &ansatz, std::span<const double> params,
              const EnergyMode &mode) {
    if (hamiltonian.num_qubits() != ansatz.n_qubits) {
        throw SizeMismatch("Hamiltonian acts on " + std::to_string(hamiltonian.num_qubits()) +
                           " qubits, ansatz on " + std::to_string(ansatz.n_qubits));
    }
    const Circuit prep = prepare_ansatz(ansatz, params);
    if (const auto *sampled = std::get_if<SampledEnergy>(&mode)) {
        return estimate_htest(hamiltonian, prep, sampled->shots, sampled->seed);
    }
    return expectation_exact(hamiltonian, prepare(prep));
}

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

struct LocalResult {
    Vertex best;
    int evaluations;
    bool converged;
};

template <class Objective>
LocalResult nelder_mead(Objective &&objective, std::vector<double> start,
                        const OptimizerConfig &config) {
    const std::size_t dim = start.size();
    int evaluations = 0;
    auto eval = [&](const std::vector<double> &x) {
        ++evaluations;
        return objective(x);
    };

    std::vector<Vertex> simplex;
    simplex.push_back({start, eval(start)});
    for (std::size_t i = 0; i < dim; ++i) {
        auto x = start;
        x[i] += config.initial_step;
        simplex.push_back({x, eval(x)});
    }

    auto by_value = [](const Vertex &a, const Vertex &b) { return a.f < b.f; };
    std::vector<double> history;
    bool converged = false;

    while (evaluations < config.max_evaluations) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        history.push_back(simplex.front().f);

        double diameter = 0.0;
        for (std::size_t v = 1; v < simplex.size(); ++v) {
            double d = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                d = std::max(d, std::abs(simplex[v].x[i] - simplex[0].x[i]));
            }
            diameter = std::max(diameter, d);
        }
        const auto stall = static_cast<std::size_t>(config.stall_iterations);
        const bool stalled = history.size() > stall &&
                             std::abs(history[history.size() - 1 - stall] - history.back()) <
                                 config.energy_tolerance;
        if (diameter < config.diameter_tolerance || stalled) {
            converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v < dim; ++v) {
            for (std::size_t i = 0; i < dim; ++i) {
                centroid[i] += simplex[v].x[i] / static_cast<double>(dim);
            }
        }
        auto along = [&](double t) {
            std::vector<double> x(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                x[i] = centroid[i] + t * (simplex.back().x[i] - centroid[i]);
            }
            return x;
        };

        Vertex &worst = simplex.back();
        const Vertex reflected{along(-1.0), 0.0};
        const double fr = eval(reflected.x);
        if (fr < simplex.front().f) {
            const auto expanded = along(-2.0);
            const double fe = eval(expanded);
            worst = fe < fr ? Vertex{expanded, fe} : Vertex{reflected.x, fr};
            continue;
        }
        if (fr < simplex[dim - 1].f) {
            worst = {reflected.x, fr};
            continue;
        }
        const bool outside = fr < worst.f;
        const auto contracted = along(outside ? -0.5 : 0.5);
        const double fc = eval(contracted);
        if (fc < std::min(fr, worst.f)) {
            worst = {contracted, fc};
            continue;
        }
        for (std::size_t v = 1; v < simplex.size(); ++v) { // shrink toward best
            for (std::size_t i = 0; i < dim; ++i) {
                simplex[v].x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
            }
            simplex[v].f = eval(simplex[v].x);
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
    return {simplex.front(), evaluations, converged};
}

} // namespace

VqeResult minimize(const PauliSum &hamiltonian, const Ansatz &ansatz, const EnergyMode &mode,
                   const OptimizerConfig &config, std::uint64_t seed) {
    if (config.restarts < 1 || config.max_evaluations < 1 || !(config.initial_step > 0.0)) {
        throw InvalidArgument("optimizer needs restarts >= 1, max_evaluations >= 1 and a "
                              "positive initial step");
    }
    if (hamiltonian.num_qubits() != ansatz.n_qubits) {
        throw SizeMismatch("Hamiltonian acts on " + std::to_string(hamiltonian.num_qubits()) +
                           " qubits, ansatz on " + std::to_string(ansatz.n_qubits));
    }
    EnergyMode eval_mode = mode;
    if (auto *sampled = std::get_if<SampledEnergy>(&eval_mode)) {
        sampled->seed = derive_seed(seed, 0xe7a1ULL);
    }
    auto objective = [&](const std::vector<double> &x) {
        return energy(hamiltonian, ansatz, x, eval_mode);
    };

    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    VqeResult result;
    bool have = false;
    for (int r = 0; r < config.restarts; ++r) {
        std::vector<double> start(ansatz.parameter_count());
        for (auto &v : start) {
            v = angle(rng);
        }
        const LocalResult local = nelder_mead(objective, std::move(start), config);
        result.evaluations += local.evaluations;
        if (!have || local.best.f < result.energy) {
            result.best_params = local.best.x;
            result.energy = local.best.f;
            result.converged = local.converged;
            have = true;
        }
    }
    return result;
}

} // namespace qobs
