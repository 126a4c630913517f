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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qids::flowfeat {

enum class FlowClass { Normal, Blackhole, Flooding, Sybil, Wormhole };

inline constexpr int kNumClasses = 5;

FlowClass flow_class_from_string(const std::string& s);
const char* flow_class_name(FlowClass c);

/// One network flow as ingested or generated. packet_times, when present,
/// must be sorted ascending with one entry per packet. Aggregate sources that
/// lack timestamps may instead carry precomputed dispersion columns
/// (pre_iat_cv / pre_jitter / pre_pmr) or per-window byte rates.
struct FlowRecord {
    double t_first = 0.0;
    double t_last = 0.0;
    std::vector<double> packet_times;
    double bytes_fwd = 0.0;
    double bytes_bwd = 0.0;
    double bytes_total = 0.0;
    std::uint64_t packets = 0;
    FlowClass label = FlowClass::Normal;
    std::vector<double> window_rates;
    std::optional<double> pre_iat_cv;
    std::optional<double> pre_jitter;
    std::optional<double> pre_pmr;
};

enum class Stage { Raw, Logged, Standardized };

Stage stage_from_string(const std::string& s);
const char* stage_name(Stage s);

inline constexpr int kNumFeatures = 8;

/// Column order of every feature matrix produced by this module.
extern const std::array<const char*, kNumFeatures> kFeatureNames;

/// Engineered flow descriptor: [duration, packet_rate, byte_rate,
/// mean_packet_size, iat_cv, dar, jitter, pmr]. The stage tag enforces the
/// extract -> log -> standardize pipeline order.
struct FeatureVector {
    std::array<double, kNumFeatures> values{};
    Stage stage = Stage::Raw;
    /// True when dispersion features had to be defaulted (no timestamps and
    /// no precomputed columns in the source).
    bool imputed = false;
};

/// Computes the eight raw features. pmr_window is the sliding-window length
/// (seconds) for the peak-to-mean burst ratio.
FeatureVector extract(const FlowRecord& flow, double pmr_window = 0.1);

/// log(1+x) on the heavy-tailed rate features (packet_rate, byte_rate, pmr).
FeatureVector log_transform(const FeatureVector& fv);

/// Per-coordinate affine normalizer; fit on the training split only.
struct Standardizer {
    std::array<double, kNumFeatures> means{};
    std::array<double, kNumFeatures> stds{};
};

Standardizer standardizer_fit(const std::vector<FeatureVector>& train_features);

FeatureVector standardize(const FeatureVector& fv, const Standardizer& s);

std::string standardizer_to_json(const Standardizer& s);
Standardizer standardizer_from_json(const std::string& text);

/// CSV with header "duration,...,pmr,label,stage"; one row per sample.
std::string features_to_csv(const std::vector<FeatureVector>& features,
                            const std::vector<int>& labels);
std::pair<std::vector<FeatureVector>, std::vector<int>> features_from_csv(const std::string& text);

}  // namespace qids::flowfeat
