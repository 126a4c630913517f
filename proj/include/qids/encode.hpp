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

#include <span>
#include <string>

#include "qids/sim.hpp"

namespace qids::encode {

enum class EncoderDepth { Plain, Entangled };

/// Angle-encoding options: one RY(scale * x_j) per qubit, plus a CZ ring when
/// depth is Entangled.
struct EncoderConfig {
    double scale = 1.0;
    EncoderDepth depth = EncoderDepth::Plain;
};

EncoderDepth encoder_depth_from_string(const std::string& s);
const char* encoder_depth_name(EncoderDepth d);

/// Builds the data-encoding circuit U_E(x) on x.size() qubits.
sim::Circuit angle_encode(std::span<const double> features, const EncoderConfig& config = {});

enum class Entangler { RingCnot, LineCnot, RingCz };

Entangler entangler_from_string(const std::string& s);
const char* entangler_name(Entangler e);

/// Layered hardware-efficient ansatz: per layer, one trainable RY per qubit
/// followed by the entangler pattern. Trainable parameter count is
/// num_qubits * layers, laid out as theta[layer * N + qubit].
struct AnsatzSpec {
    int num_qubits = 8;
    int layers = 1;
    Entangler entangler = Entangler::RingCnot;
    bool reupload = false;

    std::size_t param_count() const {
        return static_cast<std::size_t>(num_qubits) * static_cast<std::size_t>(layers);
    }
};

/// Trainable ansatz template U(theta); angles start at 0, bind() to set them.
sim::Circuit build_ansatz(const AnsatzSpec& spec);
sim::Circuit build_ansatz(const AnsatzSpec& spec, std::span<const double> theta);

/// Full model circuit U(theta) U_E(x): the encoder followed by the ansatz
/// layers. With reupload, the encoder is re-applied before every layer.
sim::Circuit build_model(std::span<const double> features, const EncoderConfig& encoder,
                         const AnsatzSpec& spec);

}  // namespace qids::encode
