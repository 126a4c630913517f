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

#include <optional>
#include <string>
#include <vector>

#include "qids/encode.hpp"
#include "qids/train.hpp"

namespace qids::vqc {

/// Linear readout layer: logits = W * expectations + b.
struct ClassicalHead {
    std::size_t outputs = 2;
    std::size_t readouts = 8;
    std::vector<double> w;  // outputs x readouts, row-major
    std::vector<double> b;  // outputs

    std::size_t param_count() const { return w.size() + b.size(); }
};

/// Variational classifier: encoder + layered ansatz + Z readouts, with an
/// optional classical head. Without a head the model reads one <Z> on qubit 0
/// and thresholds it at zero (ties go positive).
struct QnnModel {
    encode::EncoderConfig encoder;
    encode::AnsatzSpec ansatz;
    std::vector<double> theta;
    std::vector<sim::Observable> observables;
    std::optional<ClassicalHead> head;

    std::size_t quantum_params() const { return theta.size(); }
    std::size_t classical_params() const { return head ? head->param_count() : 0; }
};

/// Pure variational classifier (no classical parameters); theta drawn
/// uniformly from [-0.1, 0.1] under init_seed.
QnnModel make_pure_qnn(int num_qubits, int layers, std::uint64_t init_seed,
                       const encode::EncoderConfig& encoder = {},
                       const encode::AnsatzSpec* ansatz_overrides = nullptr);

/// Hybrid: one <Z_q> readout per qubit feeding a trainable 2-logit head
/// (2*N + 2 classical parameters); theta, W, b share the seeded init stream.
QnnModel make_hybrid_qnn(int num_qubits, int layers, std::uint64_t init_seed,
                         const encode::EncoderConfig& encoder = {},
                         const encode::AnsatzSpec* ansatz_overrides = nullptr);

/// Expectation estimation settings for one forward/gradient evaluation.
/// Absent shots => exact expectations; with shots, every circuit execution
/// draws its own seed derived from `seed`.
struct EvalOptions {
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
};

/// Observable expectations <O_c> for one input.
std::vector<double> readouts(const QnnModel& model, std::span<const double> x,
                             const EvalOptions& opts = {});

/// Readouts when the model has no head, logits (W*readouts + b) otherwise.
std::vector<double> qnn_forward(const QnnModel& model, std::span<const double> x,
                                const EvalOptions& opts = {});

/// Always two logits: the head's output, or [-s, +s] around the single <Z_0>
/// readout for the pure model (softmax of that pair is the logistic link).
std::vector<double> decision_logits(const QnnModel& model, std::span<const double> x,
                                    const EvalOptions& opts = {});

struct Prediction {
    double score = 0.0;  // logits[1] - logits[0]
    int label = +1;
};

Prediction predict(const QnnModel& model, std::span<const double> x, const EvalOptions& opts = {});

/// d<O_c>/d theta_k by the two-point shift rule (+-pi/2).
double param_shift_grad(const QnnModel& model, std::span<const double> x, std::size_t k,
                        std::size_t obs_index = 0, const EvalOptions& opts = {});

/// All observables' derivatives w.r.t. theta_k from one pair of shifted runs.
std::vector<double> readout_jacobian(const QnnModel& model, std::span<const double> x,
                                     std::size_t k, const EvalOptions& opts = {});

/// Mean cross-entropy over the batch plus (weight_decay/2)*||params||^2 over
/// theta and any head parameters.
double loss(const QnnModel& model, const train::TrainSet& batch, double weight_decay,
            const EvalOptions& opts = {}, std::uint64_t* clamps = nullptr);

struct Gradients {
    std::vector<double> theta;
    std::vector<double> w;
    std::vector<double> b;
};

/// Full loss gradient: parameter-shift through the circuit, analytic backprop
/// through softmax/cross-entropy and the head.
Gradients loss_gradient(const QnnModel& model, const train::TrainSet& batch, double weight_decay,
                        const EvalOptions& opts = {});

struct TrainResult {
    QnnModel model;
    train::TrainTrace trace;
    std::uint64_t clamp_events = 0;
};

/// Mini-batch Adam. Per-epoch trace metrics are always evaluated with exact
/// expectations, even when training uses shots.
TrainResult train(const train::TrainSet& data, const QnnModel& model,
                  const train::TrainConfig& config);

std::string qnn_to_json(const QnnModel& model);
QnnModel qnn_from_json(const std::string& text);

}  // namespace qids::vqc
