// Copyright 2026 The qids Authors
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

#include "qids/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "qids/kernelml.hpp"
#include "qids/qtnn.hpp"
#include "qids/sim.hpp"
#include "qids/util.hpp"
#include "qids/vqc.hpp"

namespace qids::bench {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int parse_tag_int(const std::string& digits, const std::string& tag) {
    if (digits.empty() || digits.size() > 4 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw std::invalid_argument("malformed model tag \"" + tag + "\"");
    }
    const int value = std::stoi(digits);
    if (value < 1) throw std::invalid_argument("model tag \"" + tag + "\" needs positive sizes");
    return value;
}

void expect_keys(const json& obj, const std::vector<std::string>& allowed,
                 const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError("unknown config key \"" + where + "." + key + "\"");
        }
    }
}

void validate_config(const ExperimentConfig& c) {
    if (c.data_kind != "synth" && c.data_kind != "csv") {
        throw std::invalid_argument("data.kind must be \"synth\" or \"csv\"");
    }
    if (c.data_kind == "csv" && c.csv_path.empty()) {
        throw std::invalid_argument("data.kind \"csv\" needs data.csv_path");
    }
    if (!(c.split_ratio > 0.0 && c.split_ratio < 1.0)) {
        throw std::invalid_argument("protocol.split_ratio must lie in (0, 1)");
    }
    if (!(c.pmr_window > 0.0)) {
        throw std::invalid_argument("features.pmr_window must be positive");
    }
    if (!(c.encoder.scale > 0.0)) {
        throw std::invalid_argument("encoder.scale must be positive");
    }
    if (c.train.learning_rate <= 0.0 || c.train.epochs < 1 || c.train.batch_size < 1 ||
        c.train.weight_decay < 0.0 || c.train.adam_eps <= 0.0 ||
        c.train.adam_beta1 < 0.0 || c.train.adam_beta1 >= 1.0 || c.train.adam_beta2 < 0.0 ||
        c.train.adam_beta2 >= 1.0 || (c.train.shots && *c.train.shots < 1)) {
        throw std::invalid_argument("train block has out-of-range values");
    }
    if (c.kernel_shots < 1 || c.kernel_c <= 0.0 || c.kernel_lambda <= 0.0) {
        throw std::invalid_argument("kernel block has out-of-range values");
    }
    if (c.kernel_learner != "svm" && c.kernel_learner != "ridge") {
        throw std::invalid_argument("kernel.learner must be \"svm\" or \"ridge\"");
    }
    if (c.svm_c <= 0.0 || c.svm_tol <= 0.0 || c.svm_max_passes < 1) {
        throw std::invalid_argument("svm block has out-of-range values");
    }
    if (c.models.empty()) throw std::invalid_argument("model grid is empty");
    for (const auto& tag : c.models) parse_model_tag(tag);  // throws on bad tags
}

std::string sanitize_cell(std::string text) {
    for (char& ch : text) {
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    }
    return text;
}

std::string hash_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

// ---------------------------------------------------------------------------
// per-model runner

struct RunOutcome {
    ModelResult row;
    std::string model_json;  // trained parameters, checkpoint payload
    std::string trace_csv;   // per-epoch stats or per-sweep dual objective
};

std::string objective_trace_csv(const std::vector<double>& objectives) {
    std::string out = "sweep,objective\n";
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += util::format_double(objectives[i]);
        out += '\n';
    }
    return out;
}

void check_footprint(bool ok, const std::string& tag) {
    if (!ok) {
        throw std::runtime_error("model \"" + tag +
                                 "\" parameter accounting disagrees with its descriptor");
    }
}

void score_rows(const std::vector<kernelml::Prediction>& predictions, std::vector<int>& preds,
                std::vector<double>& scores) {
    preds.resize(predictions.size());
    scores.resize(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        preds[i] = predictions[i].label;
        scores[i] = predictions[i].score;
    }
}

RunOutcome run_allpos(const PreparedData& data) {
    RunOutcome out;
    const std::size_t n = data.test.size();
    std::vector<int> preds(n, +1);
    std::vector<double> scores(n, 0.0);
    out.row.metrics = metrics::metrics(metrics::confusion(preds, data.test.labels), scores,
                                       data.test.labels);
    out.model_json = json{{"kind", "allpos"}}.dump(2);
    out.trace_csv = "sweep,objective\n";
    return out;
}

RunOutcome run_svm(const PreparedData& data, const ExperimentConfig& config,
                   std::uint64_t model_seed) {
    RunOutcome out;
    const auto t0 = Clock::now();
    const double gamma = config.svm_gamma > 0.0 ? config.svm_gamma
                                                : kernelml::rbf_gamma_auto(data.train.features);
    const kernel::GramMatrix k = kernelml::rbf_gram(data.train.features, gamma);
    kernelml::SmoOptions options;
    options.c = config.svm_c;
    options.tol = config.svm_tol;
    options.max_passes = static_cast<std::size_t>(config.svm_max_passes);
    options.seed = util::seed_mix(model_seed, util::fnv1a64("smo"));
    const kernelml::SvmModel model = kernelml::smo_fit(k, data.train.labels, options);
    out.row.train_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    std::vector<kernelml::Prediction> predictions(data.test.size());
    for (std::size_t i = 0; i < data.test.size(); ++i) {
        const std::vector<double> row =
            kernelml::rbf_row(data.test.features[i], data.train.features, gamma);
        predictions[i] = kernelml::svm_predict(model, row);
    }
    std::vector<int> preds;
    std::vector<double> scores;
    score_rows(predictions, preds, scores);
    out.row.eval_seconds = seconds_since(t1);
    out.row.metrics =
        metrics::metrics(metrics::confusion(preds, data.test.labels), scores, data.test.labels);
    out.model_json = kernelml::svm_to_json(model);
    out.trace_csv = objective_trace_csv(model.objective_trace);
    return out;
}

RunOutcome run_qkernel(const PreparedData& data, const ExperimentConfig& config,
                       std::uint64_t model_seed) {
    RunOutcome out;
    const auto t0 = Clock::now();
    kernel::GramOptions options;
    options.mode = config.kernel_mode;
    options.shots = config.kernel_shots;
    options.seed = util::seed_mix(model_seed, util::fnv1a64("gram"));
    options.encoder = config.encoder;
    options.workers = util::worker_count();
    kernel::GramMatrix k = kernel::gram(data.train.features, options);

    const std::size_t n = k.n;
    std::vector<double> row_means(n, 0.0);
    double grand_mean = 0.0;
    if (config.kernel_center) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) row_means[i] += k.at(i, j);
            row_means[i] /= static_cast<double>(n);
            grand_mean += row_means[i];
        }
        grand_mean /= static_cast<double>(n);
        k = kernel::center(k);
    }
    k = kernel::repair(k, config.kernel_jitter);

    kernelml::SvmModel svm_model;
    kernelml::KernelRidgeModel ridge_model;
    const bool use_svm = config.kernel_learner == "svm";
    if (use_svm) {
        kernelml::SmoOptions smo;
        smo.c = config.kernel_c;
        smo.tol = config.svm_tol;
        smo.max_passes = static_cast<std::size_t>(config.svm_max_passes);
        smo.seed = util::seed_mix(model_seed, util::fnv1a64("smo"));
        svm_model = kernelml::smo_fit(k, data.train.labels, smo);
    } else {
        ridge_model = kernelml::ridge_fit(k, data.train.labels, config.kernel_lambda);
    }
    out.row.train_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    const std::uint64_t eval_seed = util::seed_mix(model_seed, util::fnv1a64("kernel-eval"));
    std::vector<kernelml::Prediction> predictions(data.test.size());
    for (std::size_t i = 0; i < data.test.size(); ++i) {
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (config.kernel_mode == kernel::GramMode::Exact) {
                row[j] = kernel::kernel_exact(data.test.features[i], data.train.features[j],
                                              config.encoder);
            } else {
                row[j] = kernel::kernel_shots(data.test.features[i], data.train.features[j],
                                              config.kernel_shots,
                                              util::seed_mix(eval_seed, i * n + j),
                                              config.encoder);
            }
        }
        if (config.kernel_center) {
            double row_mean = 0.0;
            for (double v : row) row_mean += v;
            row_mean /= static_cast<double>(n);
            for (std::size_t j = 0; j < n; ++j) {
                row[j] = row[j] - row_means[j] - row_mean + grand_mean;
            }
        }
        predictions[i] = use_svm ? kernelml::svm_predict(svm_model, row)
                                 : kernelml::ridge_predict(ridge_model, row);
    }
    std::vector<int> preds;
    std::vector<double> scores;
    score_rows(predictions, preds, scores);
    out.row.eval_seconds = seconds_since(t1);
    out.row.metrics =
        metrics::metrics(metrics::confusion(preds, data.test.labels), scores, data.test.labels);
    out.model_json = use_svm ? kernelml::svm_to_json(svm_model) : kernelml::ridge_to_json(ridge_model);
    out.trace_csv = use_svm ? objective_trace_csv(svm_model.objective_trace) : "sweep,objective\n";
    return out;
}

RunOutcome run_vqc(const ModelSpec& spec, const PreparedData& data,
                   const ExperimentConfig& config, std::uint64_t model_seed) {
    RunOutcome out;
    const auto t0 = Clock::now();
    encode::AnsatzSpec overrides;
    overrides.entangler = config.entangler;
    overrides.reupload = config.reupload;
    const int qubits = flowfeat::kNumFeatures;
    vqc::QnnModel model =
        spec.kind == ModelSpec::Kind::Qnn
            ? vqc::make_pure_qnn(qubits, spec.layers, model_seed, config.encoder, &overrides)
            : vqc::make_hybrid_qnn(qubits, spec.layers, model_seed, config.encoder, &overrides);

    const Footprint expect = model_footprint(spec);
    check_footprint(model.quantum_params() == expect.quantum_params &&
                        model.classical_params() == expect.classical_params,
                    spec.tag);

    train::TrainConfig tc = config.train;
    tc.seed = model_seed;
    vqc::TrainResult result = vqc::train(data.train, model, tc);
    out.row.train_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    std::vector<int> preds(data.test.size());
    std::vector<double> scores(data.test.size());
    for (std::size_t i = 0; i < data.test.size(); ++i) {
        vqc::EvalOptions eo;
        if (tc.shots) {
            eo.shots = tc.shots;
            eo.seed = util::seed_mix(model_seed, util::fnv1a64("eval"), i);
        }
        const vqc::Prediction p = vqc::predict(result.model, data.test.features[i], eo);
        preds[i] = p.label;
        scores[i] = p.score;
    }
    out.row.eval_seconds = seconds_since(t1);
    out.row.metrics =
        metrics::metrics(metrics::confusion(preds, data.test.labels), scores, data.test.labels);
    out.model_json = vqc::qnn_to_json(result.model);
    out.trace_csv = train::trace_to_csv(result.trace);
    return out;
}

RunOutcome run_qtnn(const ModelSpec& spec, const PreparedData& data,
                    const ExperimentConfig& config, std::uint64_t model_seed) {
    RunOutcome out;
    const auto t0 = Clock::now();
    qtnn::QtArch arch;
    arch.input_dim = flowfeat::kNumFeatures;
    arch.hidden = spec.hidden;
    arch.output_dim = 2;
    arch.circuit_layers = spec.layers;
    arch.entangler = config.entangler;
    qtnn::QtnnModel model = qtnn::make_qtnn(arch, model_seed);

    const Footprint expect = model_footprint(spec);
    check_footprint(model.quantum_params() == expect.quantum_params &&
                        model.classical_params() == expect.classical_params &&
                        arch.num_qubits() == expect.qubits,
                    spec.tag);

    train::TrainConfig tc = config.train;
    tc.seed = model_seed;
    qtnn::TrainResult result = qtnn::qt_train(data.train, model, tc);
    out.row.train_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    std::vector<int> preds(data.test.size());
    std::vector<double> scores(data.test.size());
    for (std::size_t i = 0; i < data.test.size(); ++i) {
        const qtnn::Prediction p = qtnn::qt_predict(result.model, data.test.features[i]);
        preds[i] = p.label;
        scores[i] = p.score;
    }
    out.row.eval_seconds = seconds_since(t1);
    out.row.metrics =
        metrics::metrics(metrics::confusion(preds, data.test.labels), scores, data.test.labels);
    out.model_json = qtnn::qtnn_to_json(result.model);
    out.trace_csv = train::trace_to_csv(result.trace);
    return out;
}

RunOutcome run_model(const ModelSpec& spec, const PreparedData& data,
                     const ExperimentConfig& config, std::uint64_t model_seed) {
    RunOutcome out;
    switch (spec.kind) {
        case ModelSpec::Kind::AllPos:
            out = run_allpos(data);
            break;
        case ModelSpec::Kind::Svm:
            out = run_svm(data, config, model_seed);
            break;
        case ModelSpec::Kind::QKernel:
            out = run_qkernel(data, config, model_seed);
            break;
        case ModelSpec::Kind::Qnn:
        case ModelSpec::Kind::Hybrid:
            out = run_vqc(spec, data, config, model_seed);
            break;
        case ModelSpec::Kind::Qtnn:
            out = run_qtnn(spec, data, config, model_seed);
            break;
    }
    out.row.tag = spec.tag;
    out.row.seed = model_seed;
    out.row.footprint = model_footprint(spec);
    out.row.ok = true;
    return out;
}

json metrics_to_json(const metrics::MetricsReport& m) {
    json j;
    j["accuracy"] = m.accuracy;
    j["f1"] = m.f1;
    j["f1_macro"] = m.f1_macro;
    j["specificity"] = m.specificity;
    j["sensitivity"] = m.sensitivity;
    j["mcc"] = m.mcc;
    j["roc_auc"] = m.roc_auc ? json(*m.roc_auc) : json(nullptr);
    j["samples"] = m.samples;
    j["positives"] = m.positives;
    j["negatives"] = m.negatives;
    return j;
}

metrics::MetricsReport metrics_from_json(const json& j) {
    metrics::MetricsReport m;
    m.accuracy = j.at("accuracy").get<double>();
    m.f1 = j.at("f1").get<double>();
    m.f1_macro = j.at("f1_macro").get<double>();
    m.specificity = j.at("specificity").get<double>();
    m.sensitivity = j.at("sensitivity").get<double>();
    m.mcc = j.at("mcc").get<double>();
    if (!j.at("roc_auc").is_null()) m.roc_auc = j.at("roc_auc").get<double>();
    m.samples = j.at("samples").get<std::uint64_t>();
    m.positives = j.at("positives").get<std::uint64_t>();
    m.negatives = j.at("negatives").get<std::uint64_t>();
    return m;
}

RunReport report_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("schema_version")) {
        throw ParseError("not a benchmark report document");
    }
    try {
        RunReport rep;
        rep.schema_version = j.at("schema_version").get<int>();
        rep.config_hash = j.at("config_hash").get<std::string>();
        rep.seed = j.at("seed").get<std::uint64_t>();
        rep.train_size = j.at("dataset").at("train_size").get<std::size_t>();
        rep.test_size = j.at("dataset").at("test_size").get<std::size_t>();
        rep.test_prevalence = j.at("dataset").at("test_prevalence").get<double>();
        rep.data_seconds = j.at("timing").at("data_seconds").get<double>();
        rep.feature_seconds = j.at("timing").at("feature_seconds").get<double>();
        rep.total_seconds = j.at("timing").at("total_seconds").get<double>();
        rep.circuits_run = j.at("simulator").at("circuits_run").get<std::uint64_t>();
        rep.shots_consumed = j.at("simulator").at("shots_consumed").get<std::uint64_t>();
        for (const json& row : j.at("models")) {
            ModelResult r;
            r.tag = row.at("tag").get<std::string>();
            r.seed = row.at("seed").get<std::uint64_t>();
            r.footprint.qubits = row.at("footprint").at("qubits").get<int>();
            r.footprint.layers = row.at("footprint").at("layers").get<int>();
            r.footprint.classical_params =
                row.at("footprint").at("classical_params").get<std::size_t>();
            r.footprint.quantum_params =
                row.at("footprint").at("quantum_params").get<std::size_t>();
            r.ok = row.at("status").get<std::string>() == "ok";
            if (row.contains("error")) r.error = row.at("error").get<std::string>();
            if (!row.at("metrics").is_null()) r.metrics = metrics_from_json(row.at("metrics"));
            r.train_seconds = row.at("timing").at("train_seconds").get<double>();
            r.eval_seconds = row.at("timing").at("eval_seconds").get<double>();
            rep.rows.push_back(std::move(r));
        }
        return rep;
    } catch (const json::exception& e) {
        throw ParseError(std::string("benchmark report document: ") + e.what());
    }
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    util::write_text_atomic(path, text);
}

}  // namespace

// ---------------------------------------------------------------------------
// tags and footprints

ModelSpec parse_model_tag(const std::string& tag) {
    ModelSpec spec;
    spec.tag = tag;
    if (tag == "allpos") {
        spec.kind = ModelSpec::Kind::AllPos;
        return spec;
    }
    if (tag == "svm") {
        spec.kind = ModelSpec::Kind::Svm;
        return spec;
    }
    if (tag == "qkernel") {
        spec.kind = ModelSpec::Kind::QKernel;
        return spec;
    }
    if (tag.rfind("qnn-", 0) == 0 && tag.size() > 5 && tag.back() == 'l') {
        spec.kind = ModelSpec::Kind::Qnn;
        spec.layers = parse_tag_int(tag.substr(4, tag.size() - 5), tag);
        return spec;
    }
    if (tag.rfind("hybrid-", 0) == 0 && tag.size() > 8 && tag.back() == 'l') {
        spec.kind = ModelSpec::Kind::Hybrid;
        spec.layers = parse_tag_int(tag.substr(7, tag.size() - 8), tag);
        return spec;
    }
    if (tag.rfind("qtnn-", 0) == 0) {
        const std::string rest = tag.substr(5);
        const std::size_t x = rest.find('x');
        if (x == std::string::npos) {
            throw std::invalid_argument("malformed model tag \"" + tag + "\"");
        }
        spec.kind = ModelSpec::Kind::Qtnn;
        spec.hidden = parse_tag_int(rest.substr(0, x), tag);
        spec.layers = parse_tag_int(rest.substr(x + 1), tag);
        return spec;
    }
    throw std::invalid_argument(
        "unknown model tag \"" + tag +
        "\" (expected allpos|svm|qkernel|qnn-<L>l|hybrid-<L>l|qtnn-<h>x<L>)");
}

Footprint model_footprint(const ModelSpec& spec, int num_features) {
    Footprint f;
    switch (spec.kind) {
        case ModelSpec::Kind::AllPos:
        case ModelSpec::Kind::Svm:
            break;
        case ModelSpec::Kind::QKernel:
            f.qubits = num_features;
            break;
        case ModelSpec::Kind::Qnn:
            f.qubits = num_features;
            f.layers = spec.layers;
            f.quantum_params = static_cast<std::size_t>(num_features) *
                               static_cast<std::size_t>(spec.layers);
            break;
        case ModelSpec::Kind::Hybrid:
            f.qubits = num_features;
            f.layers = spec.layers;
            f.quantum_params = static_cast<std::size_t>(num_features) *
                               static_cast<std::size_t>(spec.layers);
            f.classical_params = 2 * static_cast<std::size_t>(num_features) + 2;
            break;
        case ModelSpec::Kind::Qtnn: {
            qtnn::QtArch arch;
            arch.input_dim = num_features;
            arch.hidden = spec.hidden;
            arch.output_dim = 2;
            arch.circuit_layers = spec.layers;
            f.qubits = arch.num_qubits();
            f.layers = spec.layers;
            f.classical_params = arch.mlp_params();
            f.quantum_params = arch.quantum_params();
            break;
        }
    }
    return f;
}

Footprint model_footprint(const std::string& tag, int num_features) {
    return model_footprint(parse_model_tag(tag), num_features);
}

// ---------------------------------------------------------------------------
// configuration

ExperimentConfig default_config() { return ExperimentConfig{}; }

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["seed"] = c.seed;

    json synth = json::parse(dataio::synth_config_to_json(c.synth));
    synth.erase("seed");  // derived from the top-level seed at run time
    json cmap = json::object();
    for (const auto& [logical, actual] : c.column_map.fields) cmap[logical] = actual;
    j["data"] = {{"kind", c.data_kind},
                 {"synth", std::move(synth)},
                 {"csv_path", c.csv_path},
                 {"column_map", std::move(cmap)}};

    j["protocol"] = {{"split_ratio", c.split_ratio},
                     {"split_seed", c.split_seed},
                     {"balance", dataio::balance_strategy_name(c.balance)}};
    j["features"] = {{"pmr_window", c.pmr_window}};
    j["encoder"] = {{"scale", c.encoder.scale},
                    {"depth", encode::encoder_depth_name(c.encoder.depth)}};
    j["ansatz"] = {{"entangler", encode::entangler_name(c.entangler)}, {"reupload", c.reupload}};
    j["train"] = {{"learning_rate", c.train.learning_rate},
                  {"beta1", c.train.adam_beta1},
                  {"beta2", c.train.adam_beta2},
                  {"epsilon", c.train.adam_eps},
                  {"epochs", c.train.epochs},
                  {"batch_size", c.train.batch_size},
                  {"weight_decay", c.train.weight_decay},
                  {"shots", c.train.shots ? json(*c.train.shots) : json(nullptr)}};
    j["kernel"] = {{"mode", c.kernel_mode == kernel::GramMode::Exact ? "exact" : "shots"},
                   {"shots", c.kernel_shots},
                   {"jitter", c.kernel_jitter < 0.0 ? json("auto") : json(c.kernel_jitter)},
                   {"center", c.kernel_center},
                   {"learner", c.kernel_learner},
                   {"c", c.kernel_c},
                   {"lambda", c.kernel_lambda}};
    j["svm"] = {{"c", c.svm_c},
                {"gamma", c.svm_gamma <= 0.0 ? json("auto") : json(c.svm_gamma)},
                {"tol", c.svm_tol},
                {"max_passes", c.svm_max_passes}};
    j["models"] = c.models;
    j["output"] = {{"dir", c.output_dir}};
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("experiment config is not a JSON object");
    }
    ExperimentConfig c;
    try {
        expect_keys(j, {"seed", "data", "protocol", "features", "encoder", "ansatz", "train",
                        "kernel", "svm", "models", "output"},
                    "config");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();

        if (j.contains("data")) {
            const json& d = j.at("data");
            expect_keys(d, {"kind", "synth", "csv_path", "column_map"}, "data");
            if (d.contains("kind")) c.data_kind = d.at("kind").get<std::string>();
            if (d.contains("synth")) {
                if (d.at("synth").contains("seed")) {
                    throw ParseError(
                        "data.synth.seed is derived from the top-level seed; remove it");
                }
                c.synth = dataio::synth_config_from_json(d.at("synth").dump());
            }
            if (d.contains("csv_path")) c.csv_path = d.at("csv_path").get<std::string>();
            if (d.contains("column_map") && !d.at("column_map").empty()) {
                c.column_map = dataio::column_map_from_json(d.at("column_map").dump());
            }
        }

        if (j.contains("protocol")) {
            const json& p = j.at("protocol");
            expect_keys(p, {"split_ratio", "split_seed", "balance"}, "protocol");
            if (p.contains("split_ratio")) c.split_ratio = p.at("split_ratio").get<double>();
            if (p.contains("split_seed")) c.split_seed = p.at("split_seed").get<std::uint64_t>();
            if (p.contains("balance")) {
                c.balance = dataio::balance_strategy_from_string(p.at("balance").get<std::string>());
            }
        }

        if (j.contains("features")) {
            expect_keys(j.at("features"), {"pmr_window"}, "features");
            if (j.at("features").contains("pmr_window")) {
                c.pmr_window = j.at("features").at("pmr_window").get<double>();
            }
        }

        if (j.contains("encoder")) {
            const json& e = j.at("encoder");
            expect_keys(e, {"scale", "depth"}, "encoder");
            if (e.contains("scale")) c.encoder.scale = e.at("scale").get<double>();
            if (e.contains("depth")) {
                c.encoder.depth = encode::encoder_depth_from_string(e.at("depth").get<std::string>());
            }
        }

        if (j.contains("ansatz")) {
            const json& a = j.at("ansatz");
            expect_keys(a, {"entangler", "reupload"}, "ansatz");
            if (a.contains("entangler")) {
                c.entangler = encode::entangler_from_string(a.at("entangler").get<std::string>());
            }
            if (a.contains("reupload")) c.reupload = a.at("reupload").get<bool>();
        }

        if (j.contains("train")) {
            const json& t = j.at("train");
            if (t.contains("seed")) {
                throw ParseError("train.seed is derived per model from the top-level seed");
            }
            expect_keys(t, {"learning_rate", "beta1", "beta2", "epsilon", "epochs", "batch_size",
                            "weight_decay", "shots"},
                        "train");
            if (t.contains("learning_rate")) c.train.learning_rate = t.at("learning_rate").get<double>();
            if (t.contains("beta1")) c.train.adam_beta1 = t.at("beta1").get<double>();
            if (t.contains("beta2")) c.train.adam_beta2 = t.at("beta2").get<double>();
            if (t.contains("epsilon")) c.train.adam_eps = t.at("epsilon").get<double>();
            if (t.contains("epochs")) c.train.epochs = t.at("epochs").get<int>();
            if (t.contains("batch_size")) c.train.batch_size = t.at("batch_size").get<int>();
            if (t.contains("weight_decay")) c.train.weight_decay = t.at("weight_decay").get<double>();
            if (t.contains("shots")) {
                c.train.shots = t.at("shots").is_null()
                                    ? std::optional<std::uint64_t>{}
                                    : std::optional<std::uint64_t>(t.at("shots").get<std::uint64_t>());
            }
        }

        if (j.contains("kernel")) {
            const json& k = j.at("kernel");
            expect_keys(k, {"mode", "shots", "jitter", "center", "learner", "c", "lambda"},
                        "kernel");
            if (k.contains("mode")) {
                const std::string mode = k.at("mode").get<std::string>();
                if (mode == "exact") {
                    c.kernel_mode = kernel::GramMode::Exact;
                } else if (mode == "shots") {
                    c.kernel_mode = kernel::GramMode::Shots;
                } else {
                    throw ParseError("kernel.mode must be \"exact\" or \"shots\"");
                }
            }
            if (k.contains("shots")) c.kernel_shots = k.at("shots").get<std::uint64_t>();
            if (k.contains("jitter")) {
                if (k.at("jitter").is_string()) {
                    if (k.at("jitter").get<std::string>() != "auto") {
                        throw ParseError("kernel.jitter must be \"auto\" or a number >= 0");
                    }
                    c.kernel_jitter = -1.0;
                } else {
                    c.kernel_jitter = k.at("jitter").get<double>();
                    if (c.kernel_jitter < 0.0) {
                        throw ParseError("kernel.jitter must be \"auto\" or a number >= 0");
                    }
                }
            }
            if (k.contains("center")) c.kernel_center = k.at("center").get<bool>();
            if (k.contains("learner")) c.kernel_learner = k.at("learner").get<std::string>();
            if (k.contains("c")) c.kernel_c = k.at("c").get<double>();
            if (k.contains("lambda")) c.kernel_lambda = k.at("lambda").get<double>();
        }

        if (j.contains("svm")) {
            const json& s = j.at("svm");
            expect_keys(s, {"c", "gamma", "tol", "max_passes"}, "svm");
            if (s.contains("c")) c.svm_c = s.at("c").get<double>();
            if (s.contains("gamma")) {
                if (s.at("gamma").is_string()) {
                    if (s.at("gamma").get<std::string>() != "auto") {
                        throw ParseError("svm.gamma must be \"auto\" or a positive number");
                    }
                    c.svm_gamma = 0.0;
                } else {
                    c.svm_gamma = s.at("gamma").get<double>();
                    if (c.svm_gamma <= 0.0) {
                        throw ParseError("svm.gamma must be \"auto\" or a positive number");
                    }
                }
            }
            if (s.contains("tol")) c.svm_tol = s.at("tol").get<double>();
            if (s.contains("max_passes")) c.svm_max_passes = s.at("max_passes").get<int>();
        }

        if (j.contains("models")) c.models = j.at("models").get<std::vector<std::string>>();
        if (j.contains("output")) {
            expect_keys(j.at("output"), {"dir"}, "output");
            if (j.at("output").contains("dir")) {
                c.output_dir = j.at("output").at("dir").get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
    validate_config(c);
    return c;
}

ExperimentConfig apply_overrides(const ExperimentConfig& config,
                                 const std::vector<std::string>& overrides) {
    json j = json::parse(config_to_json(config));
    for (const std::string& entry : overrides) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("override \"" + entry +
                                        "\" must look like dotted.path=value");
        }
        std::string path = "/" + entry.substr(0, eq);
        std::replace(path.begin(), path.end(), '.', '/');
        const json::json_pointer ptr(path);
        if (!j.contains(ptr)) {
            throw std::invalid_argument("override names unknown config field \"" +
                                        entry.substr(0, eq) + "\"");
        }
        const std::string value = entry.substr(eq + 1);
        json parsed = json::parse(value, nullptr, false);
        if (parsed.is_discarded()) parsed = value;  // bare words become strings
        j[ptr] = std::move(parsed);
    }
    return config_from_json(j.dump());
}

std::string config_hash(const ExperimentConfig& config) {
    return hash_hex(util::fnv1a64(config_to_json(config)));
}

// ---------------------------------------------------------------------------
// pipeline

PreparedData prepare(const ExperimentConfig& config) {
    validate_config(config);
    const auto t0 = Clock::now();

    dataio::Dataset full;
    if (config.data_kind == "synth") {
        dataio::SynthConfig synth = config.synth;
        synth.seed = util::seed_mix(config.seed, util::fnv1a64("gen"));
        full = dataio::synth_generate(synth);
    } else {
        full = dataio::ingest_csv(config.csv_path, config.column_map);
    }
    full = dataio::binarize(full);

    const dataio::Split sp = dataio::split(full, config.split_ratio, config.split_seed);
    dataio::Dataset train_ds = dataio::subset(full, sp.train_indices, "split-train");
    const dataio::Dataset test_ds = dataio::subset(full, sp.test_indices, "split-test");
    train_ds = dataio::balance(train_ds, config.balance,
                               util::seed_mix(config.seed, util::fnv1a64("balance")));

    PreparedData out;
    out.data_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    const auto featurize = [&](const dataio::Dataset& ds) {
        std::vector<flowfeat::FeatureVector> logged;
        logged.reserve(ds.size());
        for (const flowfeat::FlowRecord& rec : ds.records) {
            logged.push_back(flowfeat::log_transform(flowfeat::extract(rec, config.pmr_window)));
        }
        return logged;
    };
    const std::vector<flowfeat::FeatureVector> train_logged = featurize(train_ds);
    const std::vector<flowfeat::FeatureVector> test_logged = featurize(test_ds);
    out.scaler = flowfeat::standardizer_fit(train_logged);

    const auto to_set = [&](const std::vector<flowfeat::FeatureVector>& logged,
                            const dataio::Dataset& ds,
                            std::vector<flowfeat::FeatureVector>& keep) {
        train::TrainSet set;
        keep.reserve(logged.size());
        for (const flowfeat::FeatureVector& fv : logged) {
            const flowfeat::FeatureVector std_fv = flowfeat::standardize(fv, out.scaler);
            keep.push_back(std_fv);
            set.features.emplace_back(std_fv.values.begin(), std_fv.values.end());
        }
        set.labels = ds.binary_labels();
        return set;
    };
    out.train = to_set(train_logged, train_ds, out.train_features);
    out.test = to_set(test_logged, test_ds, out.test_features);

    std::size_t positives = 0;
    for (int label : out.test.labels) positives += label == +1 ? 1 : 0;
    out.test_prevalence =
        out.test.labels.empty() ? 0.0
                                : static_cast<double>(positives) /
                                      static_cast<double>(out.test.labels.size());
    out.feature_seconds = seconds_since(t1);
    return out;
}

// ---------------------------------------------------------------------------
// benchmark

RunReport run_bench(const ExperimentConfig& config) {
    validate_config(config);
    sim::reset_run_stats();
    const auto t0 = Clock::now();

    RunReport rep;
    rep.seed = config.seed;
    rep.config_hash = config_hash(config);

    const PreparedData data = prepare(config);
    rep.train_size = data.train.size();
    rep.test_size = data.test.size();
    rep.test_prevalence = data.test_prevalence;
    rep.data_seconds = data.data_seconds;
    rep.feature_seconds = data.feature_seconds;

    for (const std::string& tag : config.models) {
        ModelResult row;
        row.tag = tag;
        row.seed = util::seed_mix(config.seed, util::fnv1a64(tag));
        try {
            const ModelSpec spec = parse_model_tag(tag);
            row.footprint = model_footprint(spec);
            RunOutcome outcome = run_model(spec, data, config, row.seed);
            row = std::move(outcome.row);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        rep.rows.push_back(std::move(row));
    }

    rep.total_seconds = seconds_since(t0);
    rep.circuits_run = sim::circuits_run();
    rep.shots_consumed = sim::shots_consumed();
    return rep;
}

std::string report_to_csv(const RunReport& report) {
    std::string out =
        "model,qubits,layers,class_params,quant_params,accuracy,f1,specificity,sensitivity,mcc,"
        "roc_auc,seed,config_hash,status\n";
    for (const ModelResult& row : report.rows) {
        out += row.tag;
        out += ',' + std::to_string(row.footprint.qubits);
        out += ',' + std::to_string(row.footprint.layers);
        out += ',' + std::to_string(row.footprint.classical_params);
        out += ',' + std::to_string(row.footprint.quantum_params);
        if (row.ok) {
            out += ',' + util::format_metric(row.metrics.accuracy);
            out += ',' + util::format_metric(row.metrics.f1);
            out += ',' + util::format_metric(row.metrics.specificity);
            out += ',' + util::format_metric(row.metrics.sensitivity);
            out += ',' + util::format_metric(row.metrics.mcc);
            out += ',';
            if (row.metrics.roc_auc) out += util::format_metric(*row.metrics.roc_auc);
        } else {
            out += ",,,,,,";
        }
        out += ',' + std::to_string(row.seed);
        out += ',' + report.config_hash;
        out += ',' + (row.ok ? std::string("ok") : "error: " + sanitize_cell(row.error));
        out += '\n';
    }
    return out;
}

std::string report_to_json(const RunReport& report) {
    json j;
    j["schema_version"] = report.schema_version;
    j["config_hash"] = report.config_hash;
    j["seed"] = report.seed;
    j["dataset"] = {{"train_size", report.train_size},
                    {"test_size", report.test_size},
                    {"test_prevalence", report.test_prevalence}};
    j["timing"] = {{"data_seconds", report.data_seconds},
                   {"feature_seconds", report.feature_seconds},
                   {"total_seconds", report.total_seconds}};
    j["simulator"] = {{"circuits_run", report.circuits_run},
                      {"shots_consumed", report.shots_consumed}};
    json rows = json::array();
    for (const ModelResult& row : report.rows) {
        json r;
        r["tag"] = row.tag;
        r["seed"] = row.seed;
        r["status"] = row.ok ? "ok" : "error";
        if (!row.ok) r["error"] = row.error;
        r["footprint"] = {{"qubits", row.footprint.qubits},
                          {"layers", row.footprint.layers},
                          {"classical_params", row.footprint.classical_params},
                          {"quantum_params", row.footprint.quantum_params}};
        r["metrics"] = row.ok ? metrics_to_json(row.metrics) : json(nullptr);
        r["timing"] = {{"train_seconds", row.train_seconds}, {"eval_seconds", row.eval_seconds}};
        rows.push_back(std::move(r));
    }
    j["models"] = std::move(rows);
    return j.dump(2);
}

std::string render_report(const std::string& report_json) {
    return report_to_csv(report_from_json(report_json));
}

// ---------------------------------------------------------------------------
// commands

std::vector<std::string> cmd_gen(const ExperimentConfig& config) {
    validate_config(config);
    if (config.data_kind != "synth") {
        throw std::invalid_argument("gen needs a synthetic data source (data.kind = \"synth\")");
    }
    std::uint64_t total = 0;
    for (const auto& [cls, count] : config.synth.counts) total += count;
    if (total == 0) {
        throw std::invalid_argument("synthetic profile generates zero flows; set data.synth.counts");
    }
    dataio::SynthConfig synth = config.synth;
    synth.seed = util::seed_mix(config.seed, util::fnv1a64("gen"));
    const dataio::Dataset ds = dataio::synth_generate(synth);

    std::filesystem::create_directories(config.output_dir);
    const std::string csv_path = config.output_dir + "/dataset.csv";
    dataio::write_dataset(ds, csv_path, config.pmr_window);
    return {csv_path, csv_path + ".json"};
}

std::vector<std::string> cmd_features(const ExperimentConfig& config) {
    const PreparedData data = prepare(config);
    std::filesystem::create_directories(config.output_dir);
    const std::string train_path = config.output_dir + "/features_train.csv";
    const std::string test_path = config.output_dir + "/features_test.csv";
    const std::string scaler_path = config.output_dir + "/standardizer.json";
    write_atomic(train_path, flowfeat::features_to_csv(data.train_features, data.train.labels));
    write_atomic(test_path, flowfeat::features_to_csv(data.test_features, data.test.labels));
    write_atomic(scaler_path, flowfeat::standardizer_to_json(data.scaler));
    return {train_path, test_path, scaler_path};
}

std::vector<std::string> cmd_train(const ExperimentConfig& config, const std::string& tag) {
    const ModelSpec spec = parse_model_tag(tag);
    const PreparedData data = prepare(config);
    const std::uint64_t model_seed = util::seed_mix(config.seed, util::fnv1a64(tag));

    RunOutcome outcome;
    try {
        outcome = run_model(spec, data, config, model_seed);
    } catch (const std::exception& e) {
        throw std::runtime_error("model \"" + tag + "\": " + e.what());
    }

    json checkpoint;
    checkpoint["schema_version"] = 1;
    checkpoint["tag"] = tag;
    checkpoint["seed"] = model_seed;
    checkpoint["config_hash"] = config_hash(config);
    checkpoint["footprint"] = {{"qubits", outcome.row.footprint.qubits},
                               {"layers", outcome.row.footprint.layers},
                               {"classical_params", outcome.row.footprint.classical_params},
                               {"quantum_params", outcome.row.footprint.quantum_params}};
    checkpoint["holdout_metrics"] = metrics_to_json(outcome.row.metrics);
    checkpoint["model"] = json::parse(outcome.model_json);

    std::filesystem::create_directories(config.output_dir);
    const std::string model_path = config.output_dir + "/" + tag + ".model.json";
    const std::string trace_path = config.output_dir + "/" + tag + ".trace.csv";
    write_atomic(model_path, checkpoint.dump(2));
    write_atomic(trace_path, outcome.trace_csv);
    return {model_path, trace_path};
}

int cmd_bench(const ExperimentConfig& config) {
    const RunReport report = run_bench(config);
    std::filesystem::create_directories(config.output_dir);
    write_atomic(config.output_dir + "/report.json", report_to_json(report));
    write_atomic(config.output_dir + "/report.csv", report_to_csv(report));
    for (const ModelResult& row : report.rows) {
        if (!row.ok) return 1;
    }
    return 0;
}

}  // namespace qids::bench
