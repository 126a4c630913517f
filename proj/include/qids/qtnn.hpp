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

#include <string>
#include <vector>

#include "qids/encode.hpp"
#include "qids/train.hpp"

namespace qids::qtnn {

/// Hypernetwork geometry: a circuit on N = ceil(log2(M)) qubits generates all
/// M parameters of an input -> hidden -> hidden -> output MLP. Only the
/// circuit angles are trainable; the MLP weights are read off the circuit's
/// basis-state probabilities.
struct QtArch {
    int input_dim = 8;
    int hidden = 4;
    int output_dim = 2;
    int circuit_layers = 2;
    encode::Entangler entangler = encode::Entangler::RingCnot;

    /// MLP parameter count M (weights + biases of all three layers).
    std::size_t mlp_params() const;
    /// N = ceil(log2(M)).
    int num_qubits() const;
    /// Trainable circuit angles: N * circuit_layers.
    std::size_t quantum_params() const;
};

/// Affine probability-to-weight map: w_i = beta * (2^N * p_i - 1), so the
/// uniform distribution generates the all-zero network.
struct WeightMap {
    double beta = 1.0;
};

/// Basis-state probabilities of the (input-independent) generator circuit.
std::vector<double> generate_probs(std::span<const double> theta, int num_qubits, int layers,
                                   encode::Entangler entangler = encode::Entangler::RingCnot);

/// First M probabilities mapped to MLP weights; the rest are discarded.
std::vector<double> map_weights(std::span<const double> probs, const QtArch& arch,
                                const WeightMap& map);

/// tanh hidden layers, linear output. Weight layout is layer-major,
/// row-major, weights before biases: W1,b1,W2,b2,W3,b3.
std::vector<double> mlp_forward(std::span<const double> x, std::span<const double> weights,
                                const QtArch& arch);

struct QtnnModel {
    QtArch arch;
    WeightMap map;
    std::vector<double> theta;

    std::size_t quantum_params() const { return theta.size(); }
    std::size_t classical_params() const { return arch.mlp_params(); }
};

/// theta drawn uniformly from [-0.1, 0.1] under init_seed.
QtnnModel make_qtnn(const QtArch& arch, std::uint64_t init_seed, const WeightMap& map = {});

std::vector<double> qt_logits(const QtnnModel& model, std::span<const double> x);

struct Prediction {
    double score = 0.0;  // logits[1] - logits[0]
    int label = +1;
};

Prediction qt_predict(const QtnnModel& model, std::span<const double> x);

/// Mean cross-entropy + (weight_decay/2)*||theta||^2. Only theta is decayed:
/// the MLP weights are generated, not trained.
double qt_loss(const QtnnModel& model, const train::TrainSet& batch, double weight_decay,
               std::uint64_t* clamps = nullptr);

/// dL/dtheta via chain rule: analytic backprop to the generated weights, the
/// affine map's scale, and parameter-shifted probability derivatives (one
/// +-pi/2 circuit pair per angle, shared across all weight indices).
std::vector<double> qt_loss_gradient(const QtnnModel& model, const train::TrainSet& batch,
                                     double weight_decay);

struct TrainResult {
    QtnnModel model;
    train::TrainTrace trace;
    std::uint64_t clamp_events = 0;
};

TrainResult qt_train(const train::TrainSet& data, const QtnnModel& model,
                     const train::TrainConfig& config);

std::string qtnn_to_json(const QtnnModel& model);
QtnnModel qtnn_from_json(const std::string& text);

/// Generated weight vector as one-column CSV (header "weight").
std::string weights_to_csv(std::span<const double> weights);

}  // namespace qids::qtnn
