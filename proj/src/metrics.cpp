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

#include "qids/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qids::metrics {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

void check_labels(std::span<const int> labels) {
    for (int v : labels) {
        if (v != 1 && v != -1) {
            throw std::invalid_argument("labels must be +1 or -1, got " + std::to_string(v));
        }
    }
}

}  // namespace

Confusion confusion(std::span<const int> preds, std::span<const int> labels) {
    if (preds.size() != labels.size()) {
        throw std::invalid_argument("prediction and label counts differ");
    }
    if (preds.empty()) {
        throw std::invalid_argument("cannot build a confusion matrix from zero samples");
    }
    check_labels(preds);
    check_labels(labels);
    Confusion c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (labels[i] == +1) {
            preds[i] == +1 ? ++c.tp : ++c.fn;
        } else {
            preds[i] == -1 ? ++c.tn : ++c.fp;
        }
    }
    return c;
}

MetricsReport metrics(const Confusion& c) {
    MetricsReport r;
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn);
    const double fn = static_cast<double>(c.fn);

    r.samples = c.total();
    r.positives = c.tp + c.fn;
    r.negatives = c.tn + c.fp;
    r.accuracy = ratio(tp + tn, tp + tn + fp + fn);
    r.sensitivity = ratio(tp, tp + fn);
    r.specificity = ratio(tn, tn + fp);
    r.f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn);
    // Negative-class F1 is the same formula with roles swapped.
    const double f1_neg = ratio(2.0 * tn, 2.0 * tn + fn + fp);
    r.f1_macro = 0.5 * (r.f1 + f1_neg);
    r.mcc = mcc(c);
    return r;
}

MetricsReport metrics(const Confusion& c, std::span<const double> scores,
                      std::span<const int> labels) {
    MetricsReport r = metrics(c);
    r.roc_auc = roc_auc(scores, labels);
    return r;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("score and label counts differ");
    }
    check_labels(labels);
    std::uint64_t n_pos = 0;
    std::uint64_t n_neg = 0;
    for (int v : labels) (v == +1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) {
        throw std::invalid_argument("roc auc needs both classes present");
    }

    // Rank-sum formulation: sort by score, assign mid-ranks to ties, then
    // AUC = (R_pos - n_pos(n_pos+1)/2) / (n_pos * n_neg).
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]] == +1) rank_sum_pos += mid_rank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

double mcc(const Confusion& c) {
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn);
    const double fn = static_cast<double>(c.fn);
    const double den2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (den2 == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(den2);
}

}  // namespace qids::metrics
