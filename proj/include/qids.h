/* Copyright 2026 The qids Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qids benchmark harness: experiments are opaque handles,
 * every call returns a status code, and failure details are retrieved with
 * qids_last_error(). Strings handed out through `char**` parameters are
 * heap-allocated and must be released with qids_string_free().
 */

#ifndef QIDS_H_
#define QIDS_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QIDS_API __declspec(dllexport)
#else
#define QIDS_API __attribute__((visibility("default")))
#endif

typedef enum qids_status {
    QIDS_OK = 0,
    QIDS_ERR_INVALID_ARGUMENT = 1,
    QIDS_ERR_IO = 2,
    QIDS_ERR_PARSE = 3,
    QIDS_ERR_NUMERIC = 4,
    QIDS_ERR_MODEL = 5,
    QIDS_ERR_INTERNAL = 6
} qids_status;

/* An experiment: a parsed configuration plus the commands that run on it. */
typedef struct qids_experiment qids_experiment;

/* Library semantic version ("major.minor.patch"). Static storage. */
QIDS_API const char* qids_version(void);

/* Message for this thread's most recent failing call. Static storage,
 * overwritten by the next failure; never NULL. */
QIDS_API const char* qids_last_error(void);

/* Opens an experiment from a JSON config file; NULL or "" loads the built-in
 * defaults. On success *out owns the handle. */
QIDS_API qids_status qids_experiment_open(const char* config_path, qids_experiment** out);

/* Same, but parses an in-memory JSON document. */
QIDS_API qids_status qids_experiment_open_json(const char* config_json, qids_experiment** out);

QIDS_API void qids_experiment_close(qids_experiment* exp);

/* Applies one "dotted.path=value" override (e.g. "train.epochs=50"). */
QIDS_API qids_status qids_experiment_set(qids_experiment* exp, const char* override_kv);

/* Canonical JSON dump of the experiment's configuration. */
QIDS_API qids_status qids_experiment_config(const qids_experiment* exp, char** out_json);

/* Writes the synthetic dataset CSV + provenance sidecar to the output dir. */
QIDS_API qids_status qids_run_gen(qids_experiment* exp);

/* Writes standardized train/test feature matrices + the standardizer file. */
QIDS_API qids_status qids_run_features(qids_experiment* exp);

/* Trains one model tag; writes checkpoint JSON + training trace CSV. */
QIDS_API qids_status qids_run_train(qids_experiment* exp, const char* model_tag);

/* Runs the whole model grid and writes report.json + report.csv. The call
 * succeeds when the harness ran; *out_all_ok is 1 iff every model completed
 * (per-model failures are recorded inside the report). */
QIDS_API qids_status qids_run_bench(qids_experiment* exp, int* out_all_ok);

/* Re-renders a report JSON document as the fixed-order CSV table. */
QIDS_API qids_status qids_report_render(const char* report_json, char** out_csv);

/* Static resource footprint for a model tag (e.g. "hybrid-4l"). Any out
 * pointer may be NULL. */
QIDS_API qids_status qids_model_footprint(const char* tag, int* out_qubits, int* out_layers,
                                          uint64_t* out_classical_params,
                                          uint64_t* out_quantum_params);

/* Releases a string returned through a char** out parameter. */
QIDS_API void qids_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* QIDS_H_ */
