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
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "qobs/encode.hpp"
#include "qobs/error.hpp"
#include "qobs/experiment.hpp"
#include "qobs/lcu.hpp"
#include "qobs/pauli.hpp"

namespace {

struct RunFlags {
    std::string config;
    qobs::ConfigOverrides overrides;
};

int run_command(const RunFlags &flags) {
    qobs::ExperimentConfig config;
    if (!flags.config.empty()) {
        config = qobs::load_config(flags.config);
    }
    qobs::apply_overrides(config, flags.overrides);
    const qobs::EstimateReport report = qobs::run_experiment(config);
    std::cout << "method   " << qobs::to_string(config.method) << '\n'
              << "runs     " << report.runs.size() << '\n'
              << "median   " << report.median << '\n'
              << "mad      " << report.mad << '\n'
              << "time [s] " << report.wall_time_seconds << '\n';
    if (config.method == qobs::Method::HTest && report.median != 0.0 &&
        std::abs(report.median) <= 1.0) {
        const auto hint = qobs::shot_budget_hint(report.median);
        if (config.shots < hint.shots) {
            std::cerr << "warning: " << config.shots << " shots per term may not resolve a value of "
                      << report.median << " (suggest >= " << hint.shots << ")\n";
        }
    }
    if (!config.output_path.empty()) {
        qobs::emit_report(report, config.format, config.output_path);
        std::cout << "report   " << config.output_path.string() << '\n';
    }
    return EXIT_SUCCESS;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Expectation values of non-unitary Pauli-sum operators on a statevector "
                 "simulator (Hadamard test, LCU + SWAP, LCU + destructive SWAP)"};
    app.require_subcommand(1);

    RunFlags run;
    auto *run_cmd = app.add_subcommand("run", "Run an estimation experiment (runs x shots)");
    run_cmd->add_option("-c,--config", run.config, "Experiment config file")->check(CLI::ExistingFile);
    auto &o = run.overrides;
    run_cmd->add_option("--operator", o.operator_path, "Operator file (.ops)");
    run_cmd->add_option("--encoding", o.encoding, "gc | jw");
    run_cmd->add_option("--amplitudes", o.amplitudes, "Mode amplitudes, comma separated");
    run_cmd->add_option("--vqe-hamiltonian", o.vqe_hamiltonian,
                        "Prepare the state by VQE on this Hamiltonian");
    run_cmd->add_option("--method", o.method, "htest | lcu-swap | lcu-dswap | exact");
    run_cmd->add_option("--shots", o.shots, "Shots per run (per term for htest)");
    run_cmd->add_option("--runs", o.runs, "Independent runs");
    run_cmd->add_option("--seed", o.seed, "Base seed");
    run_cmd->add_option("--sign-policy", o.sign_policy, "oracle | assume-positive | htest-sign");
    run_cmd->add_option("--output", o.output, "Report path (empty: no report file)");
    run_cmd->add_option("--format", o.format, "json | csv");
    run_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

    std::string matrix_path;
    std::string encode_encoding = "gc";
    bool strict_jw = false;
    auto *encode_cmd = app.add_subcommand("encode", "Encode a one-body matrix file as a Pauli sum");
    encode_cmd->add_option("matrix", matrix_path, "Matrix file (k, then k rows)")
        ->required()
        ->check(CLI::ExistingFile);
    encode_cmd->add_option("--encoding", encode_encoding, "gc | jw");
    encode_cmd->add_flag("--strict-jw", strict_jw, "Keep Jordan-Wigner Z-strings");

    std::string lcu_operator;
    bool keep_identity = false;
    auto *lcu_cmd = app.add_subcommand("lcu", "Print the LCU block (prepare and select) of an operator");
    lcu_cmd->add_option("operator", lcu_operator, "Operator file")->required()->check(CLI::ExistingFile);
    lcu_cmd->add_flag("--keep-identity", keep_identity, "Block-encode the identity term too");

    double hint_value = 0.0;
    std::uint64_t hint_max = qobs::kDefaultMaxShots;
    auto *hint_cmd = app.add_subcommand("hint", "Suggest a Hadamard-test shot count for a value");
    hint_cmd->add_option("value", hint_value, "Expected value, |v| <= 1")->required();
    hint_cmd->add_option("--max", hint_max, "Maximum shot count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            return run_command(run);
        }
        if (*encode_cmd) {
            const auto m = qobs::load_one_body_matrix(matrix_path);
            const auto encoding = qobs::parse_encoding(encode_encoding);
            const auto op = encoding == qobs::Encoding::GrayCode ? qobs::gray_encode(m)
                                                                 : qobs::jw_encode(m, strict_jw);
            std::cout << qobs::format_pauli_sum(op);
            return EXIT_SUCCESS;
        }
        if (*lcu_cmd) {
            const auto op = qobs::load_pauli_sum(lcu_operator);
            const auto block = qobs::build_block(qobs::lcu_normal_form(op, !keep_identity));
            std::cout << "# lambda " << block.form.lambda << '\n'
                      << "# identity_offset " << block.form.identity_offset << '\n'
                      << "# ancillas " << block.n_ancilla << '\n';
            for (const auto &e : block.vs) {
                std::cout << "# select " << qobs::bitstring(e.pattern, block.n_ancilla) << " -> "
                          << e.unitary.label() << "  beta " << block.form.betas[e.pattern] << '\n';
            }
            std::cout << "# prepare\n" << block.vp.dump() << "# W\n" << block.w_circuit().dump();
            return EXIT_SUCCESS;
        }
        if (*hint_cmd) {
            const auto hint = qobs::shot_budget_hint(hint_value, hint_max);
            if (hint.warning) {
                std::cerr << "warning: " << hint.message << '\n';
            }
            std::cout << hint.shots << '\n';
            return EXIT_SUCCESS;
        }
    } catch (const qobs::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return EXIT_FAILURE;
}
