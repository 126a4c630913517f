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
#include <optional>
#include <span>
#include <vector>

namespace qids::metrics {

/// Binary confusion counts; the positive class (+1) is "attack".
struct Confusion {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

Confusion confusion(std::span<const int> preds, std::span<const int> labels);

struct MetricsReport {
    double accuracy = 0.0;
    double f1 = 0.0;        // positive class
    double f1_macro = 0.0;  // mean of per-class F1 (cross-check column)
    double specificity = 0.0;
    double sensitivity = 0.0;
    double mcc = 0.0;
    std::optional<double> roc_auc;
    std::uint64_t samples = 0;
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
};

/// All ratios use the usual 0/0 -> 0 convention so degenerate classifiers
/// still produce a full report.
MetricsReport metrics(const Confusion& c);
MetricsReport metrics(const Confusion& c, std::span<const double> scores,
                      std::span<const int> labels);

/// P(score_pos > score_neg) over all positive/negative pairs, ties counted
/// half; identical to trapezoidal integration of the ROC curve.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Matthews correlation; 0 when any denominator factor vanishes.
double mcc(const Confusion& c);

}  // namespace qids::metrics
