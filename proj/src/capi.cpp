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

#include "qids.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "qids/bench.hpp"
#include "qids/util.hpp"

struct qids_experiment {
    qids::bench::ExperimentConfig config;
};

namespace {

thread_local std::string tl_last_error = "no error";

void set_error(const char* what) { tl_last_error = what != nullptr ? what : "unknown error"; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
qids_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const qids::ParseError& e) {
        set_error(e.what());
        return QIDS_ERR_PARSE;
    } catch (const qids::IoError& e) {
        set_error(e.what());
        return QIDS_ERR_IO;
    } catch (const qids::NumericError& e) {
        set_error(e.what());
        return QIDS_ERR_NUMERIC;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return QIDS_ERR_INVALID_ARGUMENT;
    } catch (const std::runtime_error& e) {
        set_error(e.what());
        return QIDS_ERR_MODEL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return QIDS_ERR_INTERNAL;
    } catch (...) {
        set_error(nullptr);
        return QIDS_ERR_INTERNAL;
    }
}

qids_status require(bool ok, const char* message) {
    if (!ok) {
        set_error(message);
        return QIDS_ERR_INVALID_ARGUMENT;
    }
    return QIDS_OK;
}

}  // namespace

extern "C" {

const char* qids_version(void) { return "0.1.0"; }

const char* qids_last_error(void) { return tl_last_error.c_str(); }

qids_status qids_experiment_open(const char* config_path, qids_experiment** out) {
    if (qids_status s = require(out != nullptr, "out handle pointer is NULL"); s != QIDS_OK) {
        return s;
    }
    *out = nullptr;
    return guarded([&] {
        qids::bench::ExperimentConfig config;
        if (config_path != nullptr && config_path[0] != '\0') {
            config = qids::bench::config_from_json(qids::util::read_text_file(config_path));
        }
        *out = new qids_experiment{std::move(config)};
        return QIDS_OK;
    });
}

qids_status qids_experiment_open_json(const char* config_json, qids_experiment** out) {
    if (qids_status s = require(out != nullptr, "out handle pointer is NULL"); s != QIDS_OK) {
        return s;
    }
    if (qids_status s = require(config_json != nullptr, "config_json is NULL"); s != QIDS_OK) {
        return s;
    }
    *out = nullptr;
    return guarded([&] {
        *out = new qids_experiment{qids::bench::config_from_json(config_json)};
        return QIDS_OK;
    });
}

void qids_experiment_close(qids_experiment* exp) { delete exp; }

qids_status qids_experiment_set(qids_experiment* exp, const char* override_kv) {
    if (qids_status s = require(exp != nullptr, "experiment handle is NULL"); s != QIDS_OK) {
        return s;
    }
    if (qids_status s = require(override_kv != nullptr, "override is NULL"); s != QIDS_OK) {
        return s;
    }
    return guarded([&] {
        exp->config = qids::bench::apply_overrides(exp->config, {override_kv});
        return QIDS_OK;
    });
}

qids_status qids_experiment_config(const qids_experiment* exp, char** out_json) {
    if (qids_status s = require(exp != nullptr, "experiment handle is NULL"); s != QIDS_OK) {
        return s;
    }
    if (qids_status s = require(out_json != nullptr, "out_json is NULL"); s != QIDS_OK) {
        return s;
    }
    return guarded([&] {
        *out_json = dup_string(qids::bench::config_to_json(exp->config));
        return QIDS_OK;
    });
}

qids_status qids_run_gen(qids_experiment* exp) {
    if (qids_status s = require(exp != nullptr, "experiment handle is NULL"); s != QIDS_OK) {
        return s;
    }
    return guarded([&] {
        qids::bench::cmd_gen(exp->config);
        return QIDS_OK;
    });
}

qids_status qids_run_features(qids_experiment* exp) {
    if (qids_status s = require(exp != nullptr, "experiment handle is NULL"); s != QIDS_OK) {
        return s;
    }
    return guarded([&] {
        qids::bench::cmd_features(exp->config);
        return QIDS_OK;
    });
}

qids_status qids_run_train(qids_experiment* exp, const char* model_tag) {
    if (qids_status s = require(exp != nullptr, "experiment handle is NULL"); s != QIDS_OK) {
        return s;
    }
    if (qids_status s = require(model_tag != nullptr, "model_tag is NULL"); s != QIDS_OK) {
        return s;
    }
    return guarded([&] {
        qids::bench::cmd_train(exp->config, model_tag);
        return QIDS_OK;
    });
}

qids_status qids_run_bench(qids_experiment* exp, int* out_all_ok) {
    if (qids_status s = require(exp != nullptr, "experiment handle is NULL"); s != QIDS_OK) {
        return s;
    }
    return guarded([&] {
        const int rc = qids::bench::cmd_bench(exp->config);
        if (out_all_ok != nullptr) *out_all_ok = rc == 0 ? 1 : 0;
        return QIDS_OK;
    });
}

qids_status qids_report_render(const char* report_json, char** out_csv) {
    if (qids_status s = require(report_json != nullptr, "report_json is NULL"); s != QIDS_OK) {
        return s;
    }
    if (qids_status s = require(out_csv != nullptr, "out_csv is NULL"); s != QIDS_OK) {
        return s;
    }
    return guarded([&] {
        *out_csv = dup_string(qids::bench::render_report(report_json));
        return QIDS_OK;
    });
}

qids_status qids_model_footprint(const char* tag, int* out_qubits, int* out_layers,
                                 uint64_t* out_classical_params, uint64_t* out_quantum_params) {
    if (qids_status s = require(tag != nullptr, "tag is NULL"); s != QIDS_OK) {
        return s;
    }
    return guarded([&] {
        const qids::bench::Footprint f = qids::bench::model_footprint(std::string(tag));
        if (out_qubits != nullptr) *out_qubits = f.qubits;
        if (out_layers != nullptr) *out_layers = f.layers;
        if (out_classical_params != nullptr) *out_classical_params = f.classical_params;
        if (out_quantum_params != nullptr) *out_quantum_params = f.quantum_params;
        return QIDS_OK;
    });
}

void qids_string_free(char* s) { std::free(s); }

}  // extern "C"
