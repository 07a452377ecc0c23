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
#include "qobs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qobs/error.hpp"

namespace qobs {

namespace {

namespace pt = boost::property_tree;

std::string strip_comment(std::string value) {
    if (const auto hash = value.find('#'); hash != std::string::npos) {
        value.resize(hash);
    }
    const auto last = value.find_last_not_of(" \t\r");
    value.resize(last == std::string::npos ? 0 : last + 1);
    return value;
}

std::uint64_t parse_count(const std::string &key, const std::string &text) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!text.empty() && text.front() == '-') {
            throw std::invalid_argument(text);
        }
        v = std::stoull(text, &used);
    } catch (const std::exception &) {
        throw InvalidArgument(key + ": expected a non-negative integer, got '" + text + "'");
    }
    if (used != text.size()) {
        throw InvalidArgument(key + ": expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

double parse_real(const std::string &key, const std::string &text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw InvalidArgument(key + ": expected a number, got '" + text + "'");
    }
    if (used != text.size()) {
        throw InvalidArgument(key + ": expected a number, got '" + text + "'");
    }
    return v;
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &value) {
    std::filesystem::path p(value);
    return p.is_absolute() || base.empty() ? p : base / p;
}

std::string ansatz_name(const Ansatz &a) {
    return std::holds_alternative<SingleRY>(a.layout) ? "single-ry" : "ladder";
}

std::string format_csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// Enumerations

std::string to_string(Method method) {
    switch (method) {
    case Method::HTest:
        return "htest";
    case Method::LcuSwap:
        return "lcu-swap";
    case Method::LcuDSwap:
        return "lcu-dswap";
    case Method::Exact:
        return "exact";
    }
    return "?";
}

Method parse_method(const std::string &text) {
    for (Method m : {Method::HTest, Method::LcuSwap, Method::LcuDSwap, Method::Exact}) {
        if (to_string(m) == text) {
            return m;
        }
    }
    throw InvalidArgument("unknown method '" + text +
                          "' (expected htest, lcu-swap, lcu-dswap or exact)");
}

std::string to_string(Encoding encoding) {
    return encoding == Encoding::GrayCode ? "gc" : "jw";
}

Encoding parse_encoding(const std::string &text) {
    if (text == "gc") {
        return Encoding::GrayCode;
    }
    if (text == "jw") {
        return Encoding::JordanWigner;
    }
    throw InvalidArgument("unknown encoding '" + text + "' (expected gc or jw)");
}

ReportFormat parse_report_format(const std::string &text) {
    if (text == "json") {
        return ReportFormat::Json;
    }
    if (text == "csv") {
        return ReportFormat::Csv;
    }
    throw InvalidArgument("unknown report format '" + text + "' (expected json or csv)");
}

std::vector<double> parse_amplitudes(const std::string &text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(parse_real("amplitudes", tok));
    }
    if (out.empty()) {
        throw InvalidArgument("amplitudes: empty list");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config

ExperimentConfig parse_config(std::istream &in, const std::filesystem::path &base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ParseError(e.message(), e.line());
    }

    static const std::map<std::string, std::set<std::string>> allowed = {
        {"experiment",
         {"operator", "encoding", "method", "shots", "runs", "seed", "sign_policy", "threads"}},
        {"state", {"amplitudes"}},
        {"vqe",
         {"hamiltonian", "ansatz", "depth", "restarts", "max_evaluations", "initial_step",
          "energy_shots"}},
        {"output", {"path", "format"}},
    };
    for (const auto &[section, keys] : tree) {
        const auto it = allowed.find(section);
        if (it == allowed.end() || keys.data().size() > 0) {
            throw InvalidArgument("unknown config section '" + section + "'");
        }
        for (const auto &[key, value] : keys) {
            if (!it->second.contains(key)) {
                throw InvalidArgument("unknown config key '" + section + "." + key + "'");
            }
        }
    }
    auto get = [&](const std::string &key) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'))) {
            return strip_comment(*v);
        }
        return std::nullopt;
    };

    ExperimentConfig c;
    if (auto v = get("experiment.operator")) {
        c.operator_path = resolve(base_dir, *v);
    }
    if (auto v = get("experiment.encoding")) {
        c.encoding = parse_encoding(*v);
    }
    if (auto v = get("experiment.method")) {
        c.method = parse_method(*v);
    }
    if (auto v = get("experiment.shots")) {
        c.shots = parse_count("shots", *v);
    }
    if (auto v = get("experiment.runs")) {
        c.runs = parse_count("runs", *v);
    }
    if (auto v = get("experiment.seed")) {
        c.base_seed = parse_count("seed", *v);
    }
    if (auto v = get("experiment.sign_policy")) {
        c.sign_policy = parse_sign_policy(*v);
    }
    if (auto v = get("experiment.threads")) {
        c.threads = static_cast<unsigned>(parse_count("threads", *v));
    }

    const auto amplitudes = get("state.amplitudes");
    const auto hamiltonian = get("vqe.hamiltonian");
    if (amplitudes && hamiltonian) {
        throw InvalidArgument("config gives both [state] amplitudes and a [vqe] hamiltonian");
    }
    if (amplitudes) {
        c.state_source = parse_amplitudes(*amplitudes);
    } else if (hamiltonian) {
        VqeSource vqe;
        vqe.hamiltonian_path = resolve(base_dir, *hamiltonian);
        int depth = 1;
        if (auto v = get("vqe.depth")) {
            depth = static_cast<int>(parse_count("depth", *v));
        }
        const std::string ansatz = get("vqe.ansatz").value_or("ladder");
        if (ansatz == "single-ry") {
            vqe.ansatz = Ansatz::single_ry();
        } else if (ansatz == "ladder") {
            vqe.ansatz = Ansatz::ladder(0, depth); // width fixed by the operator at run time
        } else {
            throw InvalidArgument("unknown ansatz '" + ansatz + "' (expected ladder or single-ry)");
        }
        if (auto v = get("vqe.restarts")) {
            vqe.optimizer.restarts = static_cast<int>(parse_count("restarts", *v));
        }
        if (auto v = get("vqe.max_evaluations")) {
            vqe.optimizer.max_evaluations = static_cast<int>(parse_count("max_evaluations", *v));
        }
        if (auto v = get("vqe.initial_step")) {
            vqe.optimizer.initial_step = parse_real("initial_step", *v);
        }
        if (auto v = get("vqe.energy_shots")) {
            vqe.energy_shots = parse_count("energy_shots", *v);
        }
        c.state_source = std::move(vqe);
    }

    if (auto v = get("output.path")) {
        c.output_path = resolve(base_dir, *v);
    }
    if (auto v = get("output.format")) {
        c.format = parse_report_format(*v);
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot read config file " + path.string());
    }
    return parse_config(in, path.parent_path());
}

void validate(const ExperimentConfig &config) {
    if (config.operator_path.empty()) {
        throw InvalidArgument("no operator file given");
    }
    if (config.runs < 1) {
        throw InvalidArgument("runs must be >= 1");
    }
    if (config.method != Method::Exact && config.shots < 1) {
        throw InvalidArgument("shots must be >= 1 for method " + to_string(config.method));
    }
    if (const auto *amps = std::get_if<std::vector<double>>(&config.state_source)) {
        if (amps->empty()) {
            throw InvalidArgument("no state given: set [state] amplitudes or a [vqe] hamiltonian");
        }
    } else {
        const auto &vqe = std::get<VqeSource>(config.state_source);
        if (vqe.hamiltonian_path.empty()) {
            throw InvalidArgument("VQE state source needs a Hamiltonian file");
        }
    }
}

nlohmann::json config_to_json(const ExperimentConfig &config) {
    nlohmann::json j;
    j["operator"] = config.operator_path.generic_string();
    j["encoding"] = to_string(config.encoding);
    j["method"] = to_string(config.method);
    j["shots"] = config.shots;
    j["runs"] = config.runs;
    j["base_seed"] = config.base_seed;
    j["sign_policy"] = to_string(config.sign_policy);
    if (const auto *amps = std::get_if<std::vector<double>>(&config.state_source)) {
        j["state"] = {{"amplitudes", *amps}};
    } else {
        const auto &vqe = std::get<VqeSource>(config.state_source);
        nlohmann::json v;
        v["hamiltonian"] = vqe.hamiltonian_path.generic_string();
        v["ansatz"] = ansatz_name(vqe.ansatz);
        if (const auto *ladder = std::get_if<RYCnotLadder>(&vqe.ansatz.layout)) {
            v["depth"] = ladder->depth;
        }
        v["restarts"] = vqe.optimizer.restarts;
        v["max_evaluations"] = vqe.optimizer.max_evaluations;
        v["initial_step"] = vqe.optimizer.initial_step;
        v["energy_shots"] = vqe.energy_shots;
        j["state"] = {{"vqe", v}};
    }
    return j;
}

void apply_overrides(ExperimentConfig &c, const ConfigOverrides &o) {
    if (o.amplitudes && o.vqe_hamiltonian) {
        throw InvalidArgument("amplitudes and a VQE Hamiltonian are mutually exclusive");
    }
    if (o.operator_path) {
        c.operator_path = *o.operator_path;
    }
    if (o.encoding) {
        c.encoding = parse_encoding(*o.encoding);
    }
    if (o.amplitudes) {
        c.state_source = parse_amplitudes(*o.amplitudes);
    }
    if (o.vqe_hamiltonian) {
        VqeSource vqe;
        if (const auto *existing = std::get_if<VqeSource>(&c.state_source)) {
            vqe = *existing;
        }
        vqe.hamiltonian_path = *o.vqe_hamiltonian;
        c.state_source = vqe;
    }
    if (o.method) {
        c.method = parse_method(*o.method);
    }
    if (o.shots) {
        c.shots = *o.shots;
    }
    if (o.runs) {
        c.runs = *o.runs;
    }
    if (o.seed) {
        c.base_seed = *o.seed;
    }
    if (o.sign_policy) {
        c.sign_policy = parse_sign_policy(*o.sign_policy);
    }
    if (o.output) {
        c.output_path = *o.output;
    }
    if (o.format) {
        c.format = parse_report_format(*o.format);
    }
    if (o.threads) {
        c.threads = *o.threads;
    }
}

// ---------------------------------------------------------------------------
// Statistics

Summary summarize(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidArgument("summarize: empty input");
    }
    auto median_of = [](std::vector<double> v) {
        const std::size_t n = v.size();
        const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
        std::nth_element(v.begin(), mid, v.end());
        if (n % 2 == 1) {
            return *mid;
        }
        const double upper = *mid;
        const double lower = *std::max_element(v.begin(), mid);
        return 0.5 * (lower + upper);
    };
    const double median = median_of({values.begin(), values.end()});
    std::vector<double> deviations(values.size());
    std::transform(values.begin(), values.end(), deviations.begin(),
                   [median](double x) { return std::abs(x - median); });
    return {median, median_of(std::move(deviations))};
}

ShotHint shot_budget_hint(double expected_value, std::uint64_t max_shots) {
    const double v = std::abs(expected_value);
    if (!(v <= 1.0)) {
        throw InvalidArgument("shot_budget_hint: |value| must be <= 1");
    }
    if (v == 0.0) {
        return {max_shots, true,
                "expected value is zero; no finite shot count resolves it, using the maximum"};
    }
    const double raw = std::ceil(10.0 / v - 1e-9);
    if (raw >= static_cast<double>(max_shots)) {
        return {max_shots, true, "recommended shot count exceeds the configured maximum"};
    }
    return {static_cast<std::uint64_t>(raw), false, {}};
}

// ---------------------------------------------------------------------------
// Runner

Circuit amplitude_state_preparation(Encoding encoding, std::span<const double> mode_amplitudes,
                                    std::size_t operator_qubits) {
    const std::size_t k = mode_amplitudes.size();
    const std::size_t n = encoded_qubits(encoding, k);
    if (n != operator_qubits) {
        throw SizeMismatch(std::to_string(k) + " mode amplitudes encode to " + std::to_string(n) +
                           " qubits (" + to_string(encoding) + ") but the operator acts on " +
                           std::to_string(operator_qubits) + " qubits");
    }
    double norm2 = 0.0;
    for (double a : mode_amplitudes) {
        norm2 += a * a;
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-2) {
        throw InvalidArgument("state amplitudes have norm " + std::to_string(std::sqrt(norm2)) +
                              "; expected a normalized state (1e-2 rounding allowed)");
    }
    const StateVector state = encode_state(encoding, mode_amplitudes);
    std::vector<double> real(state.dimension());
    for (std::size_t i = 0; i < real.size(); ++i) {
        real[i] = state[i].real();
    }
    return real_state_preparation(real);
}

namespace {

struct RunOutcome {
    double value = 0.0;
    std::optional<double> raw;
};

RunOutcome estimate(const PauliSum &op, const Circuit &prep, const ExperimentConfig &config,
                    std::uint64_t seed) {
    switch (config.method) {
    case Method::Exact:
        return {expectation_exact(op, prepare(prep)), std::nullopt};
    case Method::HTest:
        return {estimate_htest(op, prep, config.shots, seed), std::nullopt};
    case Method::LcuSwap:
    case Method::LcuDSwap: {
        const auto variant = config.method == Method::LcuSwap ? LcuVariant::Swap : LcuVariant::DSwap;
        const LcuEstimate est = estimate_lcu(op, prep, config.shots, seed, variant,
                                             config.sign_policy);
        return {est.unclamped_value, est.radicand};
    }
    }
    throw InvalidArgument("unhandled method");
}

// Sub-stream of a run's seed reserved for the VQE stage.
constexpr std::uint64_t kVqeStream = 0x76716500ULL;

template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task &&task) {
    const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(
        threads == 0 ? hw : threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = count;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace

EstimateReport run_experiment(const ExperimentConfig &config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const PauliSum op = load_pauli_sum(config.operator_path);

    std::optional<Circuit> fixed_prep;
    std::optional<PauliSum> hamiltonian;
    std::optional<VqeSource> vqe;
    if (const auto *amps = std::get_if<std::vector<double>>(&config.state_source)) {
        fixed_prep = amplitude_state_preparation(config.encoding, *amps, op.num_qubits());
    } else {
        vqe = std::get<VqeSource>(config.state_source);
        if (std::holds_alternative<RYCnotLadder>(vqe->ansatz.layout)) {
            vqe->ansatz.n_qubits = op.num_qubits();
        } else if (op.num_qubits() != 1) {
            throw SizeMismatch("single-ry ansatz prepares 1 qubit but the operator acts on " +
                               std::to_string(op.num_qubits()));
        }
        const PauliSum h = load_pauli_sum(vqe->hamiltonian_path);
        if (h.num_qubits() > op.num_qubits()) {
            throw SizeMismatch("Hamiltonian acts on " + std::to_string(h.num_qubits()) +
                               " qubits but the operator on " + std::to_string(op.num_qubits()));
        }
        hamiltonian = h.widened(op.num_qubits());
    }

    EstimateReport report;
    report.config = config_to_json(config);
    report.runs.resize(config.runs);
    parallel_for(config.runs, config.threads, [&](std::size_t r) {
        RunRecord &rec = report.runs[r];
        rec.run = r;
        rec.seed = config.base_seed + r;
        Circuit prep(0);
        if (fixed_prep) {
            prep = *fixed_prep;
        } else {
            const std::uint64_t vqe_seed = derive_seed(rec.seed, kVqeStream);
            EnergyMode mode = ExactEnergy{};
            if (vqe->energy_shots > 0) {
                mode = SampledEnergy{vqe->energy_shots, vqe_seed};
            }
            const VqeResult result =
                minimize(*hamiltonian, vqe->ansatz, mode, vqe->optimizer, vqe_seed);
            rec.vqe_seed = vqe_seed;
            rec.vqe_energy = result.energy;
            rec.vqe_params = result.best_params;
            prep = prepare_ansatz(vqe->ansatz, result.best_params);
        }
        const RunOutcome out = estimate(op, prep, config, rec.seed);
        rec.value = out.value;
        rec.raw = out.raw;
    });

    const auto values = report.per_run_values();
    const Summary s = summarize(values);
    double lambda = 0.0;
    for (const auto &t : op.terms()) {
        if (!t.is_identity()) {
            lambda += std::abs(t.coefficient);
        }
    }
    const double c0 = op.identity_coefficient();
    report.median_unclamped = s.median;
    report.median = std::clamp(s.median, c0 - lambda, c0 + lambda);
    report.mad = s.mad;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<double> EstimateReport::per_run_values() const {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto &r : runs) {
        v.push_back(r.value);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json report_to_json(const EstimateReport &report) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto &r : report.runs) {
        nlohmann::json j;
        j["run"] = r.run;
        j["seed"] = r.seed;
        j["value"] = r.value;
        j["raw"] = r.raw ? nlohmann::json(*r.raw) : nlohmann::json(nullptr);
        j["vqe_energy"] = r.vqe_energy ? nlohmann::json(*r.vqe_energy) : nlohmann::json(nullptr);
        j["vqe_seed"] = r.vqe_seed ? nlohmann::json(*r.vqe_seed) : nlohmann::json(nullptr);
        j["vqe_params"] = r.vqe_params;
        runs.push_back(std::move(j));
    }
    nlohmann::json out;
    out["schema"] = "qobs.estimate-report";
    out["schema_version"] = report.schema_version;
    out["config"] = report.config;
    out["median"] = report.median;
    out["median_unclamped"] = report.median_unclamped;
    out["mad"] = report.mad;
    out["wall_time_seconds"] = report.wall_time_seconds;
    out["runs"] = std::move(runs);
    return out;
}

EstimateReport report_from_json(const nlohmann::json &json) {
    if (json.value("schema", "") != "qobs.estimate-report") {
        throw ParseError("not an estimate report", 0);
    }
    EstimateReport report;
    report.schema_version = json.at("schema_version").get<int>();
    if (report.schema_version != kReportSchemaVersion) {
        throw ParseError("unsupported report schema version " +
                             std::to_string(report.schema_version),
                         0);
    }
    report.config = json.at("config");
    report.median = json.at("median").get<double>();
    report.median_unclamped = json.at("median_unclamped").get<double>();
    report.mad = json.at("mad").get<double>();
    report.wall_time_seconds = json.at("wall_time_seconds").get<double>();
    for (const auto &j : json.at("runs")) {
        RunRecord r;
        r.run = j.at("run").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.value = j.at("value").get<double>();
        if (!j.at("raw").is_null()) {
            r.raw = j.at("raw").get<double>();
        }
        if (!j.at("vqe_energy").is_null()) {
            r.vqe_energy = j.at("vqe_energy").get<double>();
        }
        if (!j.at("vqe_seed").is_null()) {
            r.vqe_seed = j.at("vqe_seed").get<std::uint64_t>();
        }
        r.vqe_params = j.at("vqe_params").get<std::vector<double>>();
        report.runs.push_back(std::move(r));
    }
    return report;
}

std::string report_to_csv(const EstimateReport &report) {
    std::string out = "run,seed,value,energy\n";
    for (const auto &r : report.runs) {
        out += std::to_string(r.run) + ',' + std::to_string(r.seed) + ',' +
               format_csv_double(r.value) + ',';
        if (r.vqe_energy) {
            out += format_csv_double(*r.vqe_energy);
        }
        out += '\n';
    }
    return out;
}

void emit_report(const EstimateReport &report, ReportFormat format,
                 const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidArgument("cannot write report to " + path.string());
    }
    if (format == ReportFormat::Json) {
        out << report_to_json(report).dump(2) << '\n';
    } else {
        out << report_to_csv(report);
    }
    if (!out) {
        throw InvalidArgument("failed writing report to " + path.string());
    }
}

} // namespace qobs
