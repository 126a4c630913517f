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

#include "qids/encode.hpp"

#include <stdexcept>

#include "qids/util.hpp"

namespace qids::encode {

namespace {

void append_entangler(sim::Circuit& circuit, Entangler kind) {
    const int n = circuit.num_qubits();
    if (n < 2) return;
    switch (kind) {
        case Entangler::RingCnot:
            for (int q = 0; q < n; ++q) {
                circuit.push_back(sim::Gate::cnot(q, (q + 1) % n));
            }
            break;
        case Entangler::LineCnot:
            for (int q = 0; q + 1 < n; ++q) {
                circuit.push_back(sim::Gate::cnot(q, q + 1));
            }
            break;
        case Entangler::RingCz:
            for (int q = 0; q < n; ++q) {
                circuit.push_back(sim::Gate::cz(q, (q + 1) % n));
            }
            break;
    }
}

void append_encoder(sim::Circuit& circuit, std::span<const double> features,
                    const EncoderConfig& config) {
    for (std::size_t j = 0; j < features.size(); ++j) {
        circuit.push_back(sim::Gate::ry(static_cast<int>(j), config.scale * features[j]));
    }
    if (config.depth == EncoderDepth::Entangled) {
        append_entangler(circuit, Entangler::RingCz);
    }
}

void append_ansatz_layer(sim::Circuit& circuit, const AnsatzSpec& spec) {
    for (int q = 0; q < spec.num_qubits; ++q) {
        circuit.push_back_param(sim::Gate::ry(q, 0.0));
    }
    append_entangler(circuit, spec.entangler);
}

void check_spec(const AnsatzSpec& spec) {
    if (spec.num_qubits < 1 || spec.num_qubits > sim::kMaxQubits) {
        throw std::invalid_argument("ansatz qubit count " + std::to_string(spec.num_qubits) +
                                    " outside supported range [1, " + std::to_string(sim::kMaxQubits) + "]");
    }
    if (spec.layers < 1) {
        throw std::invalid_argument("ansatz needs at least one layer");
    }
}

}  // namespace

EncoderDepth encoder_depth_from_string(const std::string& s) {
    if (s == "plain") return EncoderDepth::Plain;
    if (s == "entangled") return EncoderDepth::Entangled;
    throw ParseError("unknown encoder depth \"" + s + "\" (expected plain|entangled)");
}

const char* encoder_depth_name(EncoderDepth d) {
    return d == EncoderDepth::Plain ? "plain" : "entangled";
}

sim::Circuit angle_encode(std::span<const double> features, const EncoderConfig& config) {
    if (features.empty() || features.size() > static_cast<std::size_t>(sim::kMaxQubits)) {
        throw std::invalid_argument("feature dimension " + std::to_string(features.size()) +
                                    " outside supported range [1, " + std::to_string(sim::kMaxQubits) + "]");
    }
    sim::Circuit circuit(static_cast<int>(features.size()));
    append_encoder(circuit, features, config);
    return circuit;
}

Entangler entangler_from_string(const std::string& s) {
    if (s == "ring_cnot") return Entangler::RingCnot;
    if (s == "line_cnot") return Entangler::LineCnot;
    if (s == "ring_cz") return Entangler::RingCz;
    throw ParseError("unknown entangler \"" + s + "\" (expected ring_cnot|line_cnot|ring_cz)");
}

const char* entangler_name(Entangler e) {
    switch (e) {
        case Entangler::RingCnot: return "ring_cnot";
        case Entangler::LineCnot: return "line_cnot";
        case Entangler::RingCz: return "ring_cz";
    }
    return "?";
}

sim::Circuit build_ansatz(const AnsatzSpec& spec) {
    check_spec(spec);
    sim::Circuit circuit(spec.num_qubits);
    for (int layer = 0; layer < spec.layers; ++layer) {
        append_ansatz_layer(circuit, spec);
    }
    return circuit;
}

sim::Circuit build_ansatz(const AnsatzSpec& spec, std::span<const double> theta) {
    sim::Circuit circuit = build_ansatz(spec);
    circuit.bind(theta);
    return circuit;
}

sim::Circuit build_model(std::span<const double> features, const EncoderConfig& encoder,
                         const AnsatzSpec& spec) {
    check_spec(spec);
    if (features.size() != static_cast<std::size_t>(spec.num_qubits)) {
        throw std::invalid_argument("feature dimension " + std::to_string(features.size()) +
                                    " does not match ansatz qubit count " +
                                    std::to_string(spec.num_qubits));
    }
    sim::Circuit circuit(spec.num_qubits);
    for (int layer = 0; layer < spec.layers; ++layer) {
        if (layer == 0 || spec.reupload) {
            append_encoder(circuit, features, encoder);
        }
        append_ansatz_layer(circuit, spec);
    }
    return circuit;
}

}  // namespace qids::encode
