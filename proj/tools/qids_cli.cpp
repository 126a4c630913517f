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

// Command-line front end. Everything runs through the C API in qids.h; this
// translation unit holds no benchmark logic of its own.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qids.h"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-c,--config", opts.config_path, "experiment config JSON file");
    cmd->add_option("-s,--set", opts.overrides,
                    "override a config field, dotted.path=value (repeatable)");
    cmd->add_option("-o,--out", opts.out_dir, "output directory (shorthand for output.dir)");
}

std::string quote_json_string(const std::string& raw) {
    std::string quoted = "\"";
    for (char ch : raw) {
        if (ch == '\\' || ch == '"') quoted += '\\';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

int report_failure(const char* verb) {
    std::fprintf(stderr, "qids %s: %s\n", verb, qids_last_error());
    return 1;
}

qids_experiment* open_experiment(const CommonOpts& opts, const char* verb) {
    qids_experiment* exp = nullptr;
    const char* path = opts.config_path.empty() ? nullptr : opts.config_path.c_str();
    if (qids_experiment_open(path, &exp) != QIDS_OK) {
        report_failure(verb);
        return nullptr;
    }
    std::vector<std::string> overrides = opts.overrides;
    if (!opts.out_dir.empty()) {
        overrides.push_back("output.dir=" + quote_json_string(opts.out_dir));
    }
    for (const std::string& kv : overrides) {
        if (qids_experiment_set(exp, kv.c_str()) != QIDS_OK) {
            report_failure(verb);
            qids_experiment_close(exp);
            return nullptr;
        }
    }
    return exp;
}

std::string output_dir_of(const qids_experiment* exp) {
    char* dump = nullptr;
    if (qids_experiment_config(exp, &dump) != QIDS_OK) return "";
    nlohmann::json j = nlohmann::json::parse(dump, nullptr, false);
    qids_string_free(dump);
    if (j.is_discarded()) return "";
    return j.value("output", nlohmann::json::object()).value("dir", "");
}

int run_gen(const CommonOpts& opts) {
    qids_experiment* exp = open_experiment(opts, "gen");
    if (exp == nullptr) return 1;
    int rc = 0;
    if (qids_run_gen(exp) != QIDS_OK) {
        rc = report_failure("gen");
    } else {
        std::printf("wrote %s/dataset.csv (+ .json provenance sidecar)\n",
                    output_dir_of(exp).c_str());
    }
    qids_experiment_close(exp);
    return rc;
}

int run_features(const CommonOpts& opts) {
    qids_experiment* exp = open_experiment(opts, "features");
    if (exp == nullptr) return 1;
    int rc = 0;
    if (qids_run_features(exp) != QIDS_OK) {
        rc = report_failure("features");
    } else {
        const std::string dir = output_dir_of(exp);
        std::printf("wrote %s/features_train.csv, %s/features_test.csv, %s/standardizer.json\n",
                    dir.c_str(), dir.c_str(), dir.c_str());
    }
    qids_experiment_close(exp);
    return rc;
}

int run_train(const CommonOpts& opts, const std::string& tag) {
    qids_experiment* exp = open_experiment(opts, "train");
    if (exp == nullptr) return 1;
    int rc = 0;
    if (qids_run_train(exp, tag.c_str()) != QIDS_OK) {
        rc = report_failure("train");
    } else {
        const std::string dir = output_dir_of(exp);
        std::printf("wrote %s/%s.model.json and %s/%s.trace.csv\n", dir.c_str(), tag.c_str(),
                    dir.c_str(), tag.c_str());
    }
    qids_experiment_close(exp);
    return rc;
}

int run_bench(const CommonOpts& opts) {
    qids_experiment* exp = open_experiment(opts, "bench");
    if (exp == nullptr) return 1;
    int rc = 0;
    int all_ok = 0;
    if (qids_run_bench(exp, &all_ok) != QIDS_OK) {
        rc = report_failure("bench");
    } else {
        const std::string dir = output_dir_of(exp);
        std::printf("wrote %s/report.json and %s/report.csv\n", dir.c_str(), dir.c_str());
        if (all_ok == 0) {
            std::fprintf(stderr, "qids bench: one or more models failed; see the report\n");
            rc = 2;
        }
    }
    qids_experiment_close(exp);
    return rc;
}

int run_config(const CommonOpts& opts) {
    qids_experiment* exp = open_experiment(opts, "config");
    if (exp == nullptr) return 1;
    char* dump = nullptr;
    int rc = 0;
    if (qids_experiment_config(exp, &dump) != QIDS_OK) {
        rc = report_failure("config");
    } else {
        std::fputs(dump, stdout);
        std::fputc('\n', stdout);
        qids_string_free(dump);
    }
    qids_experiment_close(exp);
    return rc;
}

int run_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "qids report: cannot open %s\n", path.c_str());
        return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    char* csv = nullptr;
    if (qids_report_render(buffer.str().c_str(), &csv) != QIDS_OK) {
        return report_failure("report");
    }
    std::fputs(csv, stdout);
    qids_string_free(csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "benchmark quantum kernels, variational classifiers, and circuit-generated networks "
        "against a classical SVM on intrusion-detection flow data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qids_version());

    CommonOpts gen_opts;
    CLI::App* gen = app.add_subcommand("gen", "generate the synthetic flow dataset");
    add_common(gen, gen_opts);

    CommonOpts feat_opts;
    CLI::App* features =
        app.add_subcommand("features", "extract, log-transform, and standardize features");
    add_common(features, feat_opts);

    CommonOpts train_opts;
    std::string train_tag;
    CLI::App* train = app.add_subcommand("train", "train one model; write checkpoint and trace");
    add_common(train, train_opts);
    train->add_option("-m,--model", train_tag,
                      "model tag: allpos|svm|qkernel|qnn-<L>l|hybrid-<L>l|qtnn-<h>x<L>")
        ->required();

    CommonOpts bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "run the full model grid and write reports");
    add_common(bench, bench_opts);

    CommonOpts config_opts;
    CLI::App* config =
        app.add_subcommand("config", "print the effective experiment config as JSON");
    add_common(config, config_opts);

    std::string report_path;
    CLI::App* report = app.add_subcommand("report", "re-render a report JSON file as CSV");
    report->add_option("report_json", report_path, "path to a report.json file")->required();

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) return run_gen(gen_opts);
    if (features->parsed()) return run_features(feat_opts);
    if (train->parsed()) return run_train(train_opts, train_tag);
    if (bench->parsed()) return run_bench(bench_opts);
    if (config->parsed()) return run_config(config_opts);
    if (report->parsed()) return run_report(report_path);
    return 1;
}
