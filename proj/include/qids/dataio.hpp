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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qids/flowfeat.hpp"

namespace qids::dataio {

/// Where a dataset came from and every protocol step applied since.
struct Provenance {
    std::string kind;  // "synthetic" | "ingested"
    std::string path;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<std::string> chain;
};

struct Dataset {
    std::vector<flowfeat::FlowRecord> records;
    bool binarized = false;
    Provenance provenance;

    std::map<flowfeat::FlowClass, std::uint64_t> class_counts() const;
    /// Normal -> -1, any attack class -> +1.
    std::vector<int> binary_labels() const;
    std::size_t size() const { return records.size(); }
};

/// Class-conditional generative knobs. Rates/durations/sizes are log-normal;
/// inter-arrival gaps are gamma-shaped (shape k gives a coefficient of
/// variation 1/sqrt(k)); direction split targets a chosen asymmetry band.
struct ClassProfile {
    double rate_log_mean = 3.9;  // ln packets/second
    double rate_log_sigma = 0.4;
    double duration_log_mean = 0.7;  // ln seconds
    double duration_log_sigma = 0.5;
    double size_log_mean = 6.0;  // ln bytes/packet
    double size_log_sigma = 0.3;
    double iat_gamma_shape = 9.0;
    double asym_min = 0.0;
    double asym_max = 0.3;
    double burst_prob = 0.05;   // fraction of gaps compressed into bursts
    double burst_rate_mult = 2.0;
};

struct SynthConfig {
    std::map<flowfeat::FlowClass, std::uint64_t> counts;
    std::map<flowfeat::FlowClass, ClassProfile> profiles;
    std::uint64_t seed = 0;
};

/// Shipped default: traffic signatures engineered per attack type (flooding
/// rates high and bursty, blackhole/wormhole heavily one-directional and
/// slow, sybil timing-irregular).
SynthConfig default_synth_config();

std::string synth_config_to_json(const SynthConfig& config);
/// Parses overrides on top of the default profile; unknown keys rejected.
SynthConfig synth_config_from_json(const std::string& text);

Dataset synth_generate(const SynthConfig& config);

/// Maps logical field names to CSV header names. Mandatory logical fields:
/// t_first, t_last, packets, bytes_total, label. Optional: bytes_fwd,
/// bytes_bwd, iat_cv, jitter, pmr.
struct ColumnMap {
    std::map<std::string, std::string> fields;
    static ColumnMap canonical();
};

ColumnMap column_map_from_json(const std::string& text);

struct IngestReport {
    std::uint64_t rows = 0;
    std::uint64_t kept = 0;
    std::uint64_t skipped_malformed = 0;
    std::uint64_t rejected_label = 0;
    std::uint64_t imputed_direction = 0;
    std::uint64_t imputed_dispersion = 0;
    std::vector<std::string> notes;
};

Dataset ingest_csv(const std::string& path, const ColumnMap& columns = ColumnMap::canonical(),
                   IngestReport* report = nullptr);

/// Marks the dataset as a binary problem (attack vs normal). Original class
/// labels stay on the records. Idempotent.
Dataset binarize(const Dataset& ds);

enum class BalanceStrategy { Undersample, None };

BalanceStrategy balance_strategy_from_string(const std::string& s);
const char* balance_strategy_name(BalanceStrategy s);

/// Undersample draws the majority class down to the minority count, without
/// replacement, keeping original record order.
Dataset balance(const Dataset& ds, BalanceStrategy strategy, std::uint64_t seed);

struct Split {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    double ratio = 0.8;
    std::uint64_t seed = 0;
};

/// Stratified by binary label; every class keeps at least one record on each
/// side.
Split split(const Dataset& ds, double ratio, std::uint64_t seed);

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices, const std::string& op);

/// Canonical aggregate CSV: per-flow timing/byte columns plus dispersion
/// features precomputed at pmr_window (packet timestamps are not serialized).
std::string dataset_to_csv(const Dataset& ds, double pmr_window = 0.1);
std::string provenance_to_json(const Dataset& ds);

/// Writes the CSV and a ".json" provenance sidecar next to it.
void write_dataset(const Dataset& ds, const std::string& csv_path, double pmr_window = 0.1);

}  // namespace qids::dataio
