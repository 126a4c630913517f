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

#ifndef QIDS_BENCH_HPP_
#define QIDS_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qids/dataio.hpp"
#include "qids/encode.hpp"
#include "qids/flowfeat.hpp"
#include "qids/kernel.hpp"
#include "qids/metrics.hpp"
#include "qids/train.hpp"

// Configuration-driven benchmark harness: wires data -> features -> models
// -> metrics and emits machine-readable reports with resource accounting.
namespace qids::bench {

/// Model grid entry, parsed from a compact tag:
///   "allpos"          constant-positive baseline
///   "svm"             classical RBF soft-margin SVM
///   "qkernel"         fidelity-kernel machine (SVM or ridge per config)
///   "qnn-<L>l"        pure variational classifier, L layers
///   "hybrid-<L>l"     variational circuit + trainable 2-logit head
///   "qtnn-<h>x<L>"    circuit-generated MLP, hidden width h, L layers
struct ModelSpec {
    enum class Kind { AllPos, Svm, QKernel, Qnn, Hybrid, Qtnn };
    Kind kind = Kind::AllPos;
    std::string tag;
    int layers = 0;  // circuit layers (qnn/hybrid/qtnn)
    int hidden = 0;  // MLP hidden width (qtnn)
};

ModelSpec parse_model_tag(const std::string& tag);

/// Static resource footprint, recomputable from the tag alone.
struct Footprint {
    int qubits = 0;
    int layers = 0;
    std::size_t classical_params = 0;
    std::size_t quantum_params = 0;
};

Footprint model_footprint(const ModelSpec& spec, int num_features = flowfeat::kNumFeatures);
Footprint model_footprint(const std::string& tag, int num_features = flowfeat::kNumFeatures);

/// Full experiment description. `seed` is the master seed: generation,
/// balancing, and per-model training seeds are all derived from it (the
/// split keeps its own seed so the partition can be pinned independently).
struct ExperimentConfig {
    std::uint64_t seed = 7;

    // data source: synthetic profile or an ingested CSV
    std::string data_kind = "synth";  // "synth" | "csv"
    dataio::SynthConfig synth = dataio::default_synth_config();
    std::string csv_path;
    dataio::ColumnMap column_map = dataio::ColumnMap::canonical();

    // protocol
    double split_ratio = 0.7;
    std::uint64_t split_seed = 1;
    dataio::BalanceStrategy balance = dataio::BalanceStrategy::Undersample;

    // features
    double pmr_window = 0.1;

    // circuits
    encode::EncoderConfig encoder;                              // scale + depth
    encode::Entangler entangler = encode::Entangler::RingCnot;  // ansatz wiring
    bool reupload = false;

    // gradient training (seed field is ignored; per-model seeds are derived)
    train::TrainConfig train = [] {
        train::TrainConfig t;
        t.epochs = 30;  // the default profile converges well before the library's 100
        return t;
    }();

    // fidelity-kernel machine
    kernel::GramMode kernel_mode = kernel::GramMode::Exact;
    std::uint64_t kernel_shots = 1024;
    double kernel_jitter = -1.0;  // < 0 => automatic minimal repair
    bool kernel_center = false;
    std::string kernel_learner = "svm";  // "svm" | "ridge"
    double kernel_c = 1.0;
    double kernel_lambda = 1e-3;

    // classical RBF SVM
    double svm_c = 1.0;
    double svm_gamma = 0.0;  // <= 0 => 1 / (d * mean feature variance)
    double svm_tol = 1e-3;
    int svm_max_passes = 200;

    std::vector<std::string> models = {"allpos", "svm",       "qkernel",
                                       "qnn-6l", "hybrid-4l", "qtnn-4x2"};
    std::string output_dir = "out";
};

ExperimentConfig default_config();

/// JSON round-trip. Parsing merges over defaults and rejects unknown keys;
/// seeds nested under data.synth or train are rejected (they are derived
/// from the top-level seed).
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

/// Applies "dot.path=value" overrides (e.g. "train.epochs=50") on top of a
/// config; the path must name an existing field.
ExperimentConfig apply_overrides(const ExperimentConfig& config,
                                 const std::vector<std::string>& overrides);

/// FNV-1a over the canonical JSON dump, hex-encoded; stamped on reports.
std::string config_hash(const ExperimentConfig& config);

/// Data/feature pipeline output shared by every command: binarized flows,
/// balanced+standardized train split, held-out test split (never trained on),
/// and the train-fitted standardizer.
struct PreparedData {
    train::TrainSet train;
    train::TrainSet test;
    std::vector<flowfeat::FeatureVector> train_features;  // standardized
    std::vector<flowfeat::FeatureVector> test_features;
    flowfeat::Standardizer scaler;
    double test_prevalence = 0.0;
    double data_seconds = 0.0;
    double feature_seconds = 0.0;
};

PreparedData prepare(const ExperimentConfig& config);

struct ModelResult {
    std::string tag;
    std::uint64_t seed = 0;
    Footprint footprint;
    bool ok = false;
    std::string error;
    metrics::MetricsReport metrics;
    double train_seconds = 0.0;
    double eval_seconds = 0.0;
};

struct RunReport {
    int schema_version = 1;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double test_prevalence = 0.0;
    std::vector<ModelResult> rows;
    double data_seconds = 0.0;
    double feature_seconds = 0.0;
    double total_seconds = 0.0;
    std::uint64_t circuits_run = 0;
    std::uint64_t shots_consumed = 0;
};

/// Trains and evaluates the whole grid sequentially; per-model failures are
/// captured in the row, not thrown.
RunReport run_bench(const ExperimentConfig& config);

/// Fixed-order CSV table, one row per model (metrics to 6 decimals, no
/// timing columns so identical runs are byte-identical).
std::string report_to_csv(const RunReport& report);
std::string report_to_json(const RunReport& report);

/// Re-renders a report JSON document as the CSV table.
std::string render_report(const std::string& report_json);

/// Artifact-writing command cores. Each returns the files it wrote.
std::vector<std::string> cmd_gen(const ExperimentConfig& config);
std::vector<std::string> cmd_features(const ExperimentConfig& config);
std::vector<std::string> cmd_train(const ExperimentConfig& config, const std::string& tag);
/// Writes report.json + report.csv; returns 0 iff every model completed.
int cmd_bench(const ExperimentConfig& config);

}  // namespace qids::bench

#endif  // QIDS_BENCH_HPP_
