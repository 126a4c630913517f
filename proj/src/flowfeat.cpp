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

#include "qids/flowfeat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qids/util.hpp"

namespace qids::flowfeat {

const std::array<const char*, kNumFeatures> kFeatureNames = {
    "duration", "packet_rate", "byte_rate", "mean_packet_size",
    "iat_cv",   "dar",         "jitter",    "pmr"};

namespace {

constexpr double kDarEpsilon = 1e-9;
// Rates of an instantaneous flow are computed against this duration floor.
constexpr double kDurationFloor = 1e-6;

enum FeatureIndex {
    kDuration = 0,
    kPacketRate = 1,
    kByteRate = 2,
    kMeanPacketSize = 3,
    kIatCv = 4,
    kDar = 5,
    kJitter = 6,
    kPmr = 7,
};

std::vector<double> inter_arrivals(const std::vector<double>& times) {
    std::vector<double> dt;
    if (times.size() < 2) return dt;
    dt.reserve(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) {
        dt.push_back(times[i] - times[i - 1]);
    }
    return dt;
}

double iat_cv_from_times(const std::vector<double>& times) {
    const std::vector<double> dt = inter_arrivals(times);
    if (dt.empty()) return 0.0;
    double mean = 0.0;
    for (double v : dt) mean += v;
    mean /= static_cast<double>(dt.size());
    if (mean <= 0.0) return 0.0;
    double var = 0.0;
    for (double v : dt) {
        const double d = v - mean;
        var += d * d;
    }
    var /= static_cast<double>(dt.size());
    return std::sqrt(var) / mean;
}

double jitter_from_times(const std::vector<double>& times) {
    const std::vector<double> dt = inter_arrivals(times);
    if (dt.size() < 2) return 0.0;  // needs at least 3 packets
    double acc = 0.0;
    for (std::size_t i = 1; i < dt.size(); ++i) {
        acc += std::abs(dt[i] - dt[i - 1]);
    }
    return acc / static_cast<double>(dt.size() - 1);
}

/// Peak-to-mean ratio over sliding windows (hop = window/2), with the
/// full-flow window always in the candidate set so the result is >= 1.
/// Per-packet sizes are not recorded, so windows weight packets equally.
double pmr_from_times(const std::vector<double>& times, double t_first, double t_last,
                      double window, std::uint64_t packets, double rate_duration) {
    const double span = t_last - t_first;
    if (span < window) return 1.0;

    const double mean_rate = static_cast<double>(packets) / rate_duration;
    auto window_ratio = [&](double start) {
        const auto lo = std::lower_bound(times.begin(), times.end(), start);
        const auto hi = std::upper_bound(times.begin(), times.end(), start + window);
        const double count = static_cast<double>(hi - lo);
        return (count / window) / mean_rate;
    };

    double best = 1.0;  // the full-flow window's ratio
    const double hop = window / 2.0;
    for (double start = t_first; start + window <= t_last + 1e-12; start += hop) {
        best = std::max(best, window_ratio(start));
    }
    // Cover the flow tail explicitly; the hop grid may stop short of it.
    best = std::max(best, window_ratio(t_last - window));
    return best;
}

void check_stage(const FeatureVector& fv, Stage expected, const char* op) {
    if (fv.stage != expected) {
        throw std::invalid_argument(std::string(op) + " expects " + stage_name(expected) +
                                    "-stage features, got " + stage_name(fv.stage));
    }
}

}  // namespace

FlowClass flow_class_from_string(const std::string& s) {
    if (s == "Normal") return FlowClass::Normal;
    if (s == "Blackhole") return FlowClass::Blackhole;
    if (s == "Flooding") return FlowClass::Flooding;
    if (s == "Sybil") return FlowClass::Sybil;
    if (s == "Wormhole") return FlowClass::Wormhole;
    throw ParseError("unknown flow class \"" + s + "\"");
}

const char* flow_class_name(FlowClass c) {
    switch (c) {
        case FlowClass::Normal: return "Normal";
        case FlowClass::Blackhole: return "Blackhole";
        case FlowClass::Flooding: return "Flooding";
        case FlowClass::Sybil: return "Sybil";
        case FlowClass::Wormhole: return "Wormhole";
    }
    return "?";
}

Stage stage_from_string(const std::string& s) {
    if (s == "raw") return Stage::Raw;
    if (s == "logged") return Stage::Logged;
    if (s == "standardized") return Stage::Standardized;
    throw ParseError("unknown feature stage \"" + s + "\"");
}

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Raw: return "raw";
        case Stage::Logged: return "logged";
        case Stage::Standardized: return "standardized";
    }
    return "?";
}

FeatureVector extract(const FlowRecord& flow, double pmr_window) {
    if (flow.packets == 0) {
        throw std::invalid_argument("flow has zero packets");
    }
    if (flow.t_first < 0.0 || flow.t_last < flow.t_first) {
        throw std::invalid_argument("flow timestamps are negative or reversed");
    }
    if (pmr_window <= 0.0) {
        throw std::invalid_argument("pmr window must be positive");
    }
    const bool has_times = !flow.packet_times.empty();
    if (has_times) {
        if (flow.packet_times.size() != flow.packets) {
            throw std::invalid_argument("packet_times length does not match packet count");
        }
        if (!std::is_sorted(flow.packet_times.begin(), flow.packet_times.end())) {
            throw std::invalid_argument("packet_times must be sorted ascending");
        }
    }

    FeatureVector fv;
    fv.stage = Stage::Raw;

    const double duration = flow.t_last - flow.t_first;
    const double rate_duration = std::max(duration, kDurationFloor);
    const double packets = static_cast<double>(flow.packets);

    fv.values[kDuration] = duration;
    fv.values[kPacketRate] = packets / rate_duration;
    fv.values[kByteRate] = flow.bytes_total / rate_duration;
    fv.values[kMeanPacketSize] = flow.bytes_total / packets;
    fv.values[kDar] = std::abs(flow.bytes_fwd - flow.bytes_bwd) /
                      (flow.bytes_fwd + flow.bytes_bwd + kDarEpsilon);

    if (has_times) {
        fv.values[kIatCv] = iat_cv_from_times(flow.packet_times);
        fv.values[kJitter] = jitter_from_times(flow.packet_times);
        fv.values[kPmr] = pmr_from_times(flow.packet_times, flow.t_first, flow.t_last, pmr_window,
                                         flow.packets, rate_duration);
    } else {
        fv.values[kIatCv] = flow.pre_iat_cv.value_or(0.0);
        fv.values[kJitter] = flow.pre_jitter.value_or(0.0);
        if (!flow.window_rates.empty()) {
            const double mean_rate = flow.bytes_total / rate_duration;
            double peak = mean_rate;
            for (double r : flow.window_rates) peak = std::max(peak, r);
            fv.values[kPmr] = mean_rate > 0.0 ? peak / mean_rate : 1.0;
        } else {
            fv.values[kPmr] = flow.pre_pmr.value_or(1.0);
        }
        fv.imputed = !flow.pre_iat_cv.has_value() || !flow.pre_jitter.has_value() ||
                     (flow.window_rates.empty() && !flow.pre_pmr.has_value());
    }
    return fv;
}

FeatureVector log_transform(const FeatureVector& fv) {
    check_stage(fv, Stage::Raw, "log_transform");
    FeatureVector out = fv;
    out.stage = Stage::Logged;
    out.values[kPacketRate] = std::log1p(fv.values[kPacketRate]);
    out.values[kByteRate] = std::log1p(fv.values[kByteRate]);
    out.values[kPmr] = std::log1p(fv.values[kPmr]);
    return out;
}

Standardizer standardizer_fit(const std::vector<FeatureVector>& train_features) {
    if (train_features.size() < 2) {
        throw std::invalid_argument("standardizer needs at least 2 training samples");
    }
    for (const FeatureVector& fv : train_features) {
        check_stage(fv, Stage::Logged, "standardizer_fit");
    }
    const double n = static_cast<double>(train_features.size());
    Standardizer s;
    for (int j = 0; j < kNumFeatures; ++j) {
        double mean = 0.0;
        for (const FeatureVector& fv : train_features) mean += fv.values[j];
        mean /= n;
        double var = 0.0;
        for (const FeatureVector& fv : train_features) {
            const double d = fv.values[j] - mean;
            var += d * d;
        }
        var /= n;  // population variance: deterministic even for n = 2
        if (var <= 0.0) {
            throw NumericError(std::string("feature \"") + kFeatureNames[j] +
                               "\" has zero variance on the training split");
        }
        s.means[j] = mean;
        s.stds[j] = std::sqrt(var);
    }
    return s;
}

FeatureVector standardize(const FeatureVector& fv, const Standardizer& s) {
    check_stage(fv, Stage::Logged, "standardize");
    FeatureVector out = fv;
    out.stage = Stage::Standardized;
    for (int j = 0; j < kNumFeatures; ++j) {
        out.values[j] = (fv.values[j] - s.means[j]) / s.stds[j];
    }
    return out;
}

std::string standardizer_to_json(const Standardizer& s) {
    nlohmann::json j;
    j["kind"] = "standardizer";
    j["features"] = kFeatureNames;
    j["means"] = s.means;
    j["stds"] = s.stds;
    return j.dump(2);
}

Standardizer standardizer_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("kind", "") != "standardizer") {
        throw ParseError("not a standardizer document");
    }
    try {
        Standardizer s;
        const auto means = j.at("means").get<std::vector<double>>();
        const auto stds = j.at("stds").get<std::vector<double>>();
        if (means.size() != kNumFeatures || stds.size() != kNumFeatures) {
            throw ParseError("standardizer document has wrong feature count");
        }
        std::copy(means.begin(), means.end(), s.means.begin());
        std::copy(stds.begin(), stds.end(), s.stds.begin());
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("standardizer document: ") + e.what());
    }
}

std::string features_to_csv(const std::vector<FeatureVector>& features,
                            const std::vector<int>& labels) {
    if (features.size() != labels.size()) {
        throw std::invalid_argument("feature and label counts differ");
    }
    std::ostringstream out;
    for (int j = 0; j < kNumFeatures; ++j) {
        out << kFeatureNames[j] << ',';
    }
    out << "label,stage\n";
    for (std::size_t i = 0; i < features.size(); ++i) {
        for (int j = 0; j < kNumFeatures; ++j) {
            out << util::format_double(features[i].values[j]) << ',';
        }
        out << labels[i] << ',' << stage_name(features[i].stage) << '\n';
    }
    return out.str();
}

std::pair<std::vector<FeatureVector>, std::vector<int>> features_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("feature csv is empty");
    }
    std::string expected;
    for (int j = 0; j < kNumFeatures; ++j) expected += std::string(kFeatureNames[j]) + ",";
    expected += "label,stage";
    if (line != expected) {
        throw ParseError("feature csv has unexpected header \"" + line + "\"");
    }

    std::vector<FeatureVector> features;
    std::vector<int> labels;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        FeatureVector fv;
        for (int j = 0; j < kNumFeatures; ++j) {
            if (!std::getline(cells, cell, ',')) {
                throw ParseError("feature csv row " + std::to_string(row) + " truncated");
            }
            try {
                fv.values[j] = std::stod(cell);
            } catch (const std::exception&) {
                throw ParseError("feature csv row " + std::to_string(row) + ": bad value \"" +
                                 cell + "\"");
            }
        }
        if (!std::getline(cells, cell, ',')) {
            throw ParseError("feature csv row " + std::to_string(row) + " missing label");
        }
        int label;
        try {
            label = std::stoi(cell);
        } catch (const std::exception&) {
            throw ParseError("feature csv row " + std::to_string(row) + ": bad label \"" + cell + "\"");
        }
        if (!std::getline(cells, cell, ',')) {
            throw ParseError("feature csv row " + std::to_string(row) + " missing stage");
        }
        fv.stage = stage_from_string(cell);
        features.push_back(fv);
        labels.push_back(label);
    }
    return {std::move(features), std::move(labels)};
}

}  // namespace qids::flowfeat
