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
 * @file experiment.hpp
 * Experiment runner: runs x shots protocol, median/MAD statistics and report
 * serialization.
 *
 * Run r draws all of its randomness from seed base_seed + r: the estimator
 * uses it directly and the VQE stage (when the state comes from VQE) uses a
 * derived sub-stream. Results are gathered by run index, so reports do not
 * depend on thread scheduling.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qobs/encode.hpp"
#include "qobs/overlap.hpp"
#include "qobs/vqe.hpp"

namespace qobs {

enum class Method { HTest, LcuSwap, LcuDSwap, Exact };
enum class ReportFormat { Json, Csv };

[[nodiscard]] std::string to_string(Method method);
[[nodiscard]] Method parse_method(const std::string &text);
[[nodiscard]] std::string to_string(Encoding encoding);
[[nodiscard]] Encoding parse_encoding(const std::string &text);
[[nodiscard]] ReportFormat parse_report_format(const std::string &text);

struct VqeSource {
    std::filesystem::path hamiltonian_path;
    Ansatz ansatz = Ansatz::ladder(1, 1);
    OptimizerConfig optimizer;
    /// Shots per Hamiltonian term during minimization; 0 = exact energies.
    std::uint64_t energy_shots = 0;
};

/// Mode amplitudes (one per basis state, before encoding) or a VQE run.
using StateSource = std::variant<std::vector<double>, VqeSource>;

struct ExperimentConfig {
    std::filesystem::path operator_path;
    Encoding encoding = Encoding::GrayCode;
    StateSource state_source;
    Method method = Method::HTest;
    std::uint64_t shots = 100000;
    std::uint64_t runs = 1;
    std::uint64_t base_seed = 0;
    SignPolicy sign_policy = SignPolicy::Oracle;
    std::filesystem::path output_path;
    ReportFormat format = ReportFormat::Json;
    /// Worker threads; 0 = hardware concurrency.
    unsigned threads = 0;
};

/**
 * Parses the key = value config format:
 *
 *     [experiment]
 *     operator = q2_gc.ops
 *     encoding = gc            # gc | jw
 *     method = htest           # htest | lcu-swap | lcu-dswap | exact
 *     shots = 100000
 *     runs = 100
 *     seed = 1
 *     sign_policy = oracle     # oracle | assume-positive | htest-sign
 *     [state]
 *     amplitudes = 0.2759, 0.9611
 *     [vqe]                    # alternative to [state]
 *     hamiltonian = h.ops
 *     ansatz = ladder          # ladder | single-ry
 *     depth = 1
 *     restarts = 4
 *     max_evaluations = 2000
 *     energy_shots = 0
 *     [output]
 *     path = report.json
 *     format = json            # json | csv
 *
 * Relative paths resolve against base_dir.
 */
[[nodiscard]] ExperimentConfig parse_config(std::istream &in,
                                            const std::filesystem::path &base_dir);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path &path);

/// Throws InvalidArgument on runs < 1, or shots < 1 for a sampled method.
void validate(const ExperimentConfig &config);

[[nodiscard]] std::vector<double> parse_amplitudes(const std::string &text);

/// Command-line overrides; unset fields leave the config untouched. An empty
/// output string clears the report path.
struct ConfigOverrides {
    std::optional<std::string> operator_path;
    std::optional<std::string> encoding;
    std::optional<std::string> amplitudes;
    std::optional<std::string> vqe_hamiltonian;
    std::optional<std::string> method;
    std::optional<std::uint64_t> shots;
    std::optional<std::uint64_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> sign_policy;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
};

void apply_overrides(ExperimentConfig &config, const ConfigOverrides &overrides);

[[nodiscard]] nlohmann::json config_to_json(const ExperimentConfig &config);

struct RunRecord {
    std::size_t run = 0;
    std::uint64_t seed = 0;
    /// Per-run estimate, never clamped (LCU runs use the unclamped value).
    double value = 0.0;
    /// LCU only: radicand P0 (1 - 2 P_pair|0) before clamping.
    std::optional<double> raw;
    std::optional<double> vqe_energy;
    std::optional<std::uint64_t> vqe_seed;
    std::vector<double> vqe_params;

    friend bool operator==(const RunRecord &, const RunRecord &) = default;
};

inline constexpr int kReportSchemaVersion = 2;

struct EstimateReport {
    int schema_version = kReportSchemaVersion;
    nlohmann::json config;
    std::vector<RunRecord> runs;
    /// Median of per-run values clamped to [c0 - Lambda, c0 + Lambda], with c0
    /// the identity coefficient and Lambda the one-norm of the other terms.
    double median = 0.0;
    /// Median before clamping.
    double median_unclamped = 0.0;
    double mad = 0.0;
    double wall_time_seconds = 0.0;

    [[nodiscard]] std::vector<double> per_run_values() const;
};

struct Summary {
    double median;
    double mad;
};

/// Median and median absolute deviation; even lengths average the middle pair.
[[nodiscard]] Summary summarize(std::span<const double> values);

/// Resolved state used by every run of an amplitude-sourced experiment.
[[nodiscard]] Circuit amplitude_state_preparation(Encoding encoding,
                                                  std::span<const double> mode_amplitudes,
                                                  std::size_t operator_qubits);

[[nodiscard]] EstimateReport run_experiment(const ExperimentConfig &config);

struct ShotHint {
    std::uint64_t shots;
    bool warning;
    std::string message;
};

inline constexpr std::uint64_t kDefaultMaxShots = 100'000'000;

/**
 * Advisory shot count ceil(10 / |v|) for resolving an expectation value v
 * with the Hadamard test (0.01 -> 1000). v = 0 returns max_shots with a warning.
 */
[[nodiscard]] ShotHint shot_budget_hint(double expected_value,
                                        std::uint64_t max_shots = kDefaultMaxShots);

[[nodiscard]] nlohmann::json report_to_json(const EstimateReport &report);
[[nodiscard]] EstimateReport report_from_json(const nlohmann::json &json);
/// Header `run,seed,value,energy`; energy is empty without VQE.
[[nodiscard]] std::string report_to_csv(const EstimateReport &report);

void emit_report(const EstimateReport &report, ReportFormat format,
                 const std::filesystem::path &path);

} // namespace qobs
