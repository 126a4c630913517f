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

#include "qids/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qids/util.hpp"

namespace qids::dataio {

using flowfeat::FlowClass;
using flowfeat::FlowRecord;

namespace {

constexpr std::array<FlowClass, flowfeat::kNumClasses> kAllClasses = {
    FlowClass::Normal, FlowClass::Blackhole, FlowClass::Flooding, FlowClass::Sybil,
    FlowClass::Wormhole};

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

void check_profile(FlowClass c, const ClassProfile& p) {
    const std::string name = flowfeat::flow_class_name(c);
    if (p.rate_log_sigma < 0 || p.duration_log_sigma < 0 || p.size_log_sigma < 0) {
        throw std::invalid_argument(name + " profile: log-sigmas must be non-negative");
    }
    if (p.iat_gamma_shape <= 0) {
        throw std::invalid_argument(name + " profile: gamma shape must be positive");
    }
    if (p.asym_min < 0 || p.asym_max > 1 || p.asym_min > p.asym_max) {
        throw std::invalid_argument(name + " profile: asymmetry band must satisfy 0 <= min <= max <= 1");
    }
    if (p.burst_prob < 0 || p.burst_prob > 1) {
        throw std::invalid_argument(name + " profile: burst probability must be in [0,1]");
    }
    if (p.burst_rate_mult < 1) {
        throw std::invalid_argument(name + " profile: burst rate multiplier must be >= 1");
    }
}

nlohmann::json profile_to_json(const ClassProfile& p) {
    return {
        {"rate_log_mean", p.rate_log_mean},
        {"rate_log_sigma", p.rate_log_sigma},
        {"duration_log_mean", p.duration_log_mean},
        {"duration_log_sigma", p.duration_log_sigma},
        {"size_log_mean", p.size_log_mean},
        {"size_log_sigma", p.size_log_sigma},
        {"iat_gamma_shape", p.iat_gamma_shape},
        {"asym_min", p.asym_min},
        {"asym_max", p.asym_max},
        {"burst_prob", p.burst_prob},
        {"burst_rate_mult", p.burst_rate_mult},
    };
}

void profile_from_json(const nlohmann::json& j, ClassProfile& p, const std::string& ctx) {
    for (const auto& [key, value] : j.items()) {
        if (key == "rate_log_mean") p.rate_log_mean = value.get<double>();
        else if (key == "rate_log_sigma") p.rate_log_sigma = value.get<double>();
        else if (key == "duration_log_mean") p.duration_log_mean = value.get<double>();
        else if (key == "duration_log_sigma") p.duration_log_sigma = value.get<double>();
        else if (key == "size_log_mean") p.size_log_mean = value.get<double>();
        else if (key == "size_log_sigma") p.size_log_sigma = value.get<double>();
        else if (key == "iat_gamma_shape") p.iat_gamma_shape = value.get<double>();
        else if (key == "asym_min") p.asym_min = value.get<double>();
        else if (key == "asym_max") p.asym_max = value.get<double>();
        else if (key == "burst_prob") p.burst_prob = value.get<double>();
        else if (key == "burst_rate_mult") p.burst_rate_mult = value.get<double>();
        else throw ParseError(ctx + ": unknown profile key \"" + key + "\"");
    }
}

FlowRecord generate_flow(FlowClass label, const ClassProfile& p, std::mt19937_64& rng) {
    std::lognormal_distribution<double> duration_dist(p.duration_log_mean, p.duration_log_sigma);
    std::lognormal_distribution<double> rate_dist(p.rate_log_mean, p.rate_log_sigma);
    std::lognormal_distribution<double> size_dist(p.size_log_mean, p.size_log_sigma);
    std::uniform_real_distribution<double> start_dist(0.0, 1000.0);
    std::uniform_real_distribution<double> asym_dist(p.asym_min, p.asym_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double duration = duration_dist(rng);
    const double rate = rate_dist(rng);
    const auto packets = static_cast<std::uint64_t>(
        std::clamp<long long>(std::llround(rate * duration), 3, 20000));

    // Gamma-shaped gaps rescaled to pin the total duration; burst gaps are
    // compressed first so bursts raise local rates without changing duration.
    std::gamma_distribution<double> gap_dist(p.iat_gamma_shape, 1.0);
    std::vector<double> gaps(packets - 1);
    double gap_sum = 0.0;
    for (double& g : gaps) {
        g = gap_dist(rng);
        if (p.burst_prob > 0.0 && unit(rng) < p.burst_prob) {
            g /= p.burst_rate_mult;
        }
        gap_sum += g;
    }
    const double scale = gap_sum > 0.0 ? duration / gap_sum : 0.0;

    FlowRecord flow;
    flow.label = label;
    flow.packets = packets;
    flow.t_first = start_dist(rng);
    flow.packet_times.resize(packets);
    flow.packet_times[0] = flow.t_first;
    for (std::size_t i = 1; i < packets; ++i) {
        flow.packet_times[i] = flow.packet_times[i - 1] + gaps[i - 1] * scale;
    }
    flow.t_last = flow.packet_times.back();

    const double mean_size = size_dist(rng);
    flow.bytes_total = mean_size * static_cast<double>(packets);
    const double asym = asym_dist(rng);
    flow.bytes_fwd = flow.bytes_total * (1.0 + asym) / 2.0;
    flow.bytes_bwd = flow.bytes_total - flow.bytes_fwd;
    return flow;
}

}  // namespace

std::map<FlowClass, std::uint64_t> Dataset::class_counts() const {
    std::map<FlowClass, std::uint64_t> counts;
    for (const FlowRecord& r : records) ++counts[r.label];
    return counts;
}

std::vector<int> Dataset::binary_labels() const {
    std::vector<int> labels;
    labels.reserve(records.size());
    for (const FlowRecord& r : records) {
        labels.push_back(r.label == FlowClass::Normal ? -1 : +1);
    }
    return labels;
}

SynthConfig default_synth_config() {
    SynthConfig config;
    // 2,000 flows with attack prevalence 0.786 before any balancing.
    config.counts = {
        {FlowClass::Normal, 428},   {FlowClass::Blackhole, 393}, {FlowClass::Flooding, 393},
        {FlowClass::Sybil, 393},    {FlowClass::Wormhole, 393},
    };
    ClassProfile normal;
    normal.rate_log_mean = std::log(50.0);
    normal.rate_log_sigma = 0.4;
    normal.duration_log_mean = std::log(2.0);
    normal.duration_log_sigma = 0.5;
    normal.size_log_mean = std::log(400.0);
    normal.size_log_sigma = 0.3;
    normal.iat_gamma_shape = 9.0;
    normal.asym_min = 0.0;
    normal.asym_max = 0.3;
    normal.burst_prob = 0.05;
    normal.burst_rate_mult = 2.0;

    ClassProfile flooding = normal;  // elevated rates, strong bursts
    flooding.rate_log_mean = std::log(400.0);
    flooding.rate_log_sigma = 0.3;
    flooding.duration_log_mean = std::log(1.0);
    flooding.size_log_mean = std::log(600.0);
    flooding.iat_gamma_shape = 16.0;
    flooding.burst_prob = 0.5;
    flooding.burst_rate_mult = 4.0;

    ClassProfile blackhole = normal;  // starved return path, low rate
    blackhole.rate_log_mean = std::log(15.0);
    blackhole.size_log_mean = std::log(300.0);
    blackhole.asym_min = 0.90;
    blackhole.asym_max = 0.999;

    ClassProfile wormhole = normal;  // tunnelled: one-sided, below-normal rate
    wormhole.rate_log_mean = std::log(25.0);
    wormhole.size_log_mean = std::log(350.0);
    wormhole.iat_gamma_shape = 7.0;
    wormhole.asym_min = 0.75;
    wormhole.asym_max = 0.98;
    wormhole.burst_prob = 0.1;

    ClassProfile sybil = normal;  // identity churn shows up as timing chaos
    sybil.rate_log_mean = std::log(40.0);
    sybil.size_log_mean = std::log(350.0);
    sybil.iat_gamma_shape = 0.35;
    sybil.asym_min = 0.1;
    sybil.asym_max = 0.5;
    sybil.burst_prob = 0.2;
    sybil.burst_rate_mult = 3.0;

    config.profiles = {
        {FlowClass::Normal, normal},       {FlowClass::Blackhole, blackhole},
        {FlowClass::Flooding, flooding},   {FlowClass::Sybil, sybil},
        {FlowClass::Wormhole, wormhole},
    };
    config.seed = 0;
    return config;
}

std::string synth_config_to_json(const SynthConfig& config) {
    nlohmann::json j;
    j["seed"] = config.seed;
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [cls, count] : config.counts) {
        counts[flowfeat::flow_class_name(cls)] = count;
    }
    j["counts"] = std::move(counts);
    nlohmann::json profiles = nlohmann::json::object();
    for (const auto& [cls, profile] : config.profiles) {
        profiles[flowfeat::flow_class_name(cls)] = profile_to_json(profile);
    }
    j["profiles"] = std::move(profiles);
    return j.dump(2);
}

SynthConfig synth_config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("synth config is not a JSON object");
    }
    SynthConfig config = default_synth_config();
    for (const auto& [key, value] : j.items()) {
        if (key == "seed") {
            config.seed = value.get<std::uint64_t>();
        } else if (key == "counts") {
            // Replaces the default mixture: the document's counts are the
            // whole recipe, not per-class overrides.
            config.counts.clear();
            for (const auto& [cls_name, count] : value.items()) {
                config.counts[flowfeat::flow_class_from_string(cls_name)] =
                    count.get<std::uint64_t>();
            }
        } else if (key == "profiles") {
            for (const auto& [cls_name, overrides] : value.items()) {
                const FlowClass cls = flowfeat::flow_class_from_string(cls_name);
                profile_from_json(overrides, config.profiles[cls], "profiles." + cls_name);
            }
        } else {
            throw ParseError("synth config: unknown key \"" + key + "\"");
        }
    }
    return config;
}

Dataset synth_generate(const SynthConfig& config) {
    std::uint64_t total = 0;
    for (const auto& [cls, count] : config.counts) total += count;
    if (total == 0) {
        throw std::invalid_argument("synthetic config requests zero flows");
    }
    for (const auto& [cls, profile] : config.profiles) check_profile(cls, profile);

    Dataset ds;
    ds.records.reserve(total);
    for (FlowClass cls : kAllClasses) {
        const auto it = config.counts.find(cls);
        if (it == config.counts.end() || it->second == 0) continue;
        const auto pit = config.profiles.find(cls);
        if (pit == config.profiles.end()) {
            throw std::invalid_argument(std::string("no profile for class ") +
                                        flowfeat::flow_class_name(cls));
        }
        // One independent stream per class: adding or resizing one class
        // never perturbs another class's flows.
        std::mt19937_64 rng(
            util::seed_mix(config.seed, util::fnv1a64(flowfeat::flow_class_name(cls))));
        for (std::uint64_t i = 0; i < it->second; ++i) {
            ds.records.push_back(generate_flow(cls, pit->second, rng));
        }
    }
    ds.provenance.kind = "synthetic";
    ds.provenance.seed = config.seed;
    ds.provenance.config_hash = hash_hex(util::fnv1a64(synth_config_to_json(config)));
    return ds;
}

ColumnMap ColumnMap::canonical() {
    ColumnMap m;
    for (const char* field : {"t_first", "t_last", "packets", "bytes_fwd", "bytes_bwd",
                              "bytes_total", "iat_cv", "jitter", "pmr", "label"}) {
        m.fields[field] = field;
    }
    return m;
}

ColumnMap column_map_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("column map is not a JSON object");
    }
    static const std::vector<std::string> known = {
        "t_first", "t_last", "packets", "bytes_fwd", "bytes_bwd",
        "bytes_total", "iat_cv", "jitter", "pmr", "label"};
    ColumnMap m;
    for (const auto& [field, header] : j.items()) {
        if (std::find(known.begin(), known.end(), field) == known.end()) {
            throw ParseError("column map: unknown logical field \"" + field + "\"");
        }
        m.fields[field] = header.get<std::string>();
    }
    return m;
}

Dataset ingest_csv(const std::string& path, const ColumnMap& columns, IngestReport* report) {
    const std::string text = util::read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.empty()) {
        throw ParseError(path + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_cells(line);

    auto column_index = [&](const std::string& field) -> int {
        const auto it = columns.fields.find(field);
        if (it == columns.fields.end()) return -1;
        const auto pos = std::find(header.begin(), header.end(), it->second);
        if (pos == header.end()) return -1;
        return static_cast<int>(pos - header.begin());
    };

    struct Cols {
        int t_first, t_last, packets, bytes_fwd, bytes_bwd, bytes_total, iat_cv, jitter, pmr, label;
    } idx{column_index("t_first"), column_index("t_last"),   column_index("packets"),
          column_index("bytes_fwd"), column_index("bytes_bwd"), column_index("bytes_total"),
          column_index("iat_cv"),  column_index("jitter"),   column_index("pmr"),
          column_index("label")};

    std::string missing;
    auto require = [&](int col, const char* name) {
        if (col < 0) missing += missing.empty() ? name : std::string(", ") + name;
    };
    require(idx.t_first, "t_first");
    require(idx.t_last, "t_last");
    require(idx.packets, "packets");
    require(idx.bytes_total, "bytes_total");
    require(idx.label, "label");
    if (!missing.empty()) {
        throw ParseError(path + ": missing mandatory columns: " + missing);
    }

    IngestReport local;
    IngestReport& rep = report ? *report : local;
    const bool has_direction = idx.bytes_fwd >= 0 && idx.bytes_bwd >= 0;

    Dataset ds;
    auto note = [&](const std::string& msg) {
        if (rep.notes.size() < 10) rep.notes.push_back(msg);
    };

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++rep.rows;
        const std::vector<std::string> cells = split_cells(line);
        if (cells.size() != header.size()) {
            ++rep.skipped_malformed;
            note("row " + std::to_string(rep.rows) + ": expected " +
                 std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
            continue;
        }
        auto num = [&](int col) { return std::stod(cells[static_cast<std::size_t>(col)]); };
        FlowRecord r;
        try {
            r.t_first = num(idx.t_first);
            r.t_last = num(idx.t_last);
            r.packets = static_cast<std::uint64_t>(std::stoull(cells[static_cast<std::size_t>(idx.packets)]));
            if (has_direction) {
                r.bytes_fwd = num(idx.bytes_fwd);
                r.bytes_bwd = num(idx.bytes_bwd);
                r.bytes_total = r.bytes_fwd + r.bytes_bwd;
            } else {
                r.bytes_total = num(idx.bytes_total);
                r.bytes_fwd = r.bytes_bwd = r.bytes_total / 2.0;
                ++rep.imputed_direction;
            }
            bool missing_dispersion = false;
            if (idx.iat_cv >= 0) r.pre_iat_cv = num(idx.iat_cv); else missing_dispersion = true;
            if (idx.jitter >= 0) r.pre_jitter = num(idx.jitter); else missing_dispersion = true;
            if (idx.pmr >= 0) r.pre_pmr = num(idx.pmr); else missing_dispersion = true;
            if (missing_dispersion) ++rep.imputed_dispersion;
            if (r.packets == 0 || r.t_last < r.t_first || r.t_first < 0.0) {
                throw std::invalid_argument("invalid flow fields");
            }
        } catch (const std::exception& e) {
            ++rep.skipped_malformed;
            note("row " + std::to_string(rep.rows) + ": " + e.what());
            continue;
        }
        try {
            r.label = flowfeat::flow_class_from_string(cells[static_cast<std::size_t>(idx.label)]);
        } catch (const ParseError& e) {
            ++rep.rejected_label;
            note("row " + std::to_string(rep.rows) + ": " + e.what());
            continue;
        }
        ds.records.push_back(std::move(r));
        ++rep.kept;
    }
    if (ds.records.empty()) {
        throw ParseError(path + ": no usable rows");
    }
    ds.provenance.kind = "ingested";
    ds.provenance.path = path;
    return ds;
}

Dataset binarize(const Dataset& ds) {
    if (ds.binarized) return ds;
    Dataset out = ds;
    out.binarized = true;
    out.provenance.chain.push_back("binarize");
    return out;
}

BalanceStrategy balance_strategy_from_string(const std::string& s) {
    if (s == "undersample") return BalanceStrategy::Undersample;
    if (s == "none") return BalanceStrategy::None;
    throw ParseError("unknown balance strategy \"" + s + "\" (expected undersample|none)");
}

const char* balance_strategy_name(BalanceStrategy s) {
    return s == BalanceStrategy::Undersample ? "undersample" : "none";
}

Dataset balance(const Dataset& ds, BalanceStrategy strategy, std::uint64_t seed) {
    if (!ds.binarized) {
        throw std::invalid_argument("balance requires a binarized dataset");
    }
    const std::vector<int> labels = ds.binary_labels();
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == +1 ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty()) {
        throw std::invalid_argument("balance requires both classes present");
    }
    if (strategy == BalanceStrategy::None) {
        Dataset out = ds;
        out.provenance.chain.push_back("balance:none");
        return out;
    }

    std::vector<std::size_t>& majority = pos.size() >= neg.size() ? pos : neg;
    const std::size_t target = std::min(pos.size(), neg.size());
    std::mt19937_64 rng(seed);
    std::shuffle(majority.begin(), majority.end(), rng);
    majority.resize(target);

    std::vector<std::size_t> keep;
    keep.reserve(2 * target);
    keep.insert(keep.end(), pos.begin(), pos.end());
    keep.insert(keep.end(), neg.begin(), neg.end());
    std::sort(keep.begin(), keep.end());
    return subset(ds, keep, "balance:undersample:seed=" + std::to_string(seed));
}

Split split(const Dataset& ds, double ratio, std::uint64_t seed) {
    if (ratio <= 0.0 || ratio >= 1.0) {
        throw std::invalid_argument("split ratio must lie strictly between 0 and 1");
    }
    const std::vector<int> labels = ds.binary_labels();
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == +1 ? pos : neg).push_back(i);
    }

    Split result;
    result.ratio = ratio;
    result.seed = seed;
    int stream = 0;
    for (std::vector<std::size_t>* cls : {&neg, &pos}) {
        ++stream;
        if (cls->empty()) continue;
        if (cls->size() < 2) {
            throw std::invalid_argument("split needs at least 2 records per class");
        }
        std::mt19937_64 rng(util::seed_mix(seed, static_cast<std::uint64_t>(stream)));
        std::shuffle(cls->begin(), cls->end(), rng);
        auto n_train = static_cast<std::size_t>(
            std::llround(ratio * static_cast<double>(cls->size())));
        n_train = std::clamp<std::size_t>(n_train, 1, cls->size() - 1);
        result.train_indices.insert(result.train_indices.end(), cls->begin(),
                                    cls->begin() + static_cast<std::ptrdiff_t>(n_train));
        result.test_indices.insert(result.test_indices.end(),
                                   cls->begin() + static_cast<std::ptrdiff_t>(n_train), cls->end());
    }
    std::sort(result.train_indices.begin(), result.train_indices.end());
    std::sort(result.test_indices.begin(), result.test_indices.end());
    return result;
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices, const std::string& op) {
    Dataset out;
    out.binarized = ds.binarized;
    out.provenance = ds.provenance;
    out.provenance.chain.push_back(op);
    out.records.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= ds.records.size()) {
            throw std::out_of_range("subset index " + std::to_string(i) + " out of range");
        }
        out.records.push_back(ds.records[i]);
    }
    return out;
}

std::string dataset_to_csv(const Dataset& ds, double pmr_window) {
    std::ostringstream out;
    out << "t_first,t_last,packets,bytes_fwd,bytes_bwd,bytes_total,iat_cv,jitter,pmr,label\n";
    for (const FlowRecord& r : ds.records) {
        double iat_cv, jitter, pmr;
        if (!r.packet_times.empty()) {
            const flowfeat::FeatureVector fv = flowfeat::extract(r, pmr_window);
            iat_cv = fv.values[4];
            jitter = fv.values[6];
            pmr = fv.values[7];
        } else {
            iat_cv = r.pre_iat_cv.value_or(0.0);
            jitter = r.pre_jitter.value_or(0.0);
            pmr = r.pre_pmr.value_or(1.0);
        }
        out << util::format_double(r.t_first) << ',' << util::format_double(r.t_last) << ','
            << r.packets << ',' << util::format_double(r.bytes_fwd) << ','
            << util::format_double(r.bytes_bwd) << ',' << util::format_double(r.bytes_total) << ','
            << util::format_double(iat_cv) << ',' << util::format_double(jitter) << ','
            << util::format_double(pmr) << ',' << flowfeat::flow_class_name(r.label) << '\n';
    }
    return out.str();
}

std::string provenance_to_json(const Dataset& ds) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["kind"] = ds.provenance.kind;
    if (!ds.provenance.path.empty()) j["path"] = ds.provenance.path;
    if (ds.provenance.kind == "synthetic") {
        j["seed"] = ds.provenance.seed;
        j["config_hash"] = ds.provenance.config_hash;
    }
    j["chain"] = ds.provenance.chain;
    j["binarized"] = ds.binarized;
    j["records"] = ds.records.size();
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [cls, count] : ds.class_counts()) {
        counts[flowfeat::flow_class_name(cls)] = count;
    }
    j["class_counts"] = std::move(counts);
    return j.dump(2);
}

void write_dataset(const Dataset& ds, const std::string& csv_path, double pmr_window) {
    util::write_text_atomic(csv_path, dataset_to_csv(ds, pmr_window));
    util::write_text_atomic(csv_path + ".json", provenance_to_json(ds));
}

}  // namespace qids::dataio
