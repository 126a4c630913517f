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

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qids::sim {

using cplx = std::complex<double>;

/// Dense simulation is capped well below memory limits; larger circuits are a
/// usage error, not a scaling path.
inline constexpr int kMaxQubits = 12;

/// Dense amplitude vector over the 2^N computational basis states.
/// Qubit 0 is the least-significant bit of the basis index.
class StateVector {
  public:
    /// Prepares |0...0>: amps[0] = 1.
    explicit StateVector(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const cplx> amps() const { return {amps_.data(), amps_.size()}; }
    std::span<cplx> amps() { return {amps_.data(), amps_.size()}; }

    double prob(std::size_t basis) const { return std::norm(amps_[basis]); }
    double norm_sq() const;

  private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

enum class GateKind { Rx, Ry, Rz, Cnot, Cz, Hadamard };

const char* gate_kind_name(GateKind kind);

/// One gate instance. Rotation conventions:
///   Ry(t)|0> = cos(t/2)|0> + sin(t/2)|1>
///   Rz(t)    = diag(exp(-i t/2), exp(+i t/2))
///   Rx(t)    = exp(-i t X / 2)
struct Gate {
    GateKind kind = GateKind::Ry;
    int target = 0;
    int control = -1;  // two-qubit kinds only
    double angle = 0.0;  // rotation kinds only

    static Gate rx(int target, double angle) { return {GateKind::Rx, target, -1, angle}; }
    static Gate ry(int target, double angle) { return {GateKind::Ry, target, -1, angle}; }
    static Gate rz(int target, double angle) { return {GateKind::Rz, target, -1, angle}; }
    static Gate hadamard(int target) { return {GateKind::Hadamard, target, -1, 0.0}; }
    static Gate cnot(int control, int target) { return {GateKind::Cnot, target, control, 0.0}; }
    static Gate cz(int control, int target) { return {GateKind::Cz, target, control, 0.0}; }

    bool is_rotation() const { return kind == GateKind::Rx || kind == GateKind::Ry || kind == GateKind::Rz; }
    bool is_two_qubit() const { return kind == GateKind::Cnot || kind == GateKind::Cz; }

    /// Rotations invert by negating the angle; CNOT, CZ, H are self-inverse.
    Gate inverse() const;
};

void apply_gate(StateVector& state, const Gate& gate);

/// Ordered gate list with an optional map of trainable angles.
/// param_slots pairs (gate index, parameter index); parameter indices are
/// dense 0..P-1 and each index is bound to exactly one rotation gate.
class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return gates_.size(); }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& param_slots() const { return slots_; }
    std::size_t param_count() const { return slots_.size(); }

    /// Appends a fixed (non-trainable) gate.
    void push_back(const Gate& gate);
    /// Appends a rotation gate bound to the next dense parameter index.
    void push_back_param(const Gate& gate);
    /// Concatenates another circuit; its parameter indices are shifted past ours.
    void append(const Circuit& other);

    /// Assigns theta[k] to the gate bound to parameter k. |theta| must equal param_count().
    void bind(std::span<const double> theta);
    /// Adds delta to the angle of the gate bound to parameter k (parameter-shift helper).
    void shift_param(std::size_t param_index, double delta);
    double param_angle(std::size_t param_index) const;

    /// Reversed gate list with each gate inverted.
    Circuit inverted() const;

  private:
    int num_qubits_ = 0;
    std::vector<Gate> gates_;
    std::vector<std::pair<std::size_t, std::size_t>> slots_;
};

/// Applies the circuit's gates in order. Qubit counts must match.
void run_circuit(const Circuit& circuit, StateVector& state);

/// One weighted Pauli string; `paulis` holds one letter in {I,X,Y,Z} per qubit,
/// position i acting on qubit i.
struct PauliTerm {
    double coeff = 1.0;
    std::string paulis;
};

/// Hermitian observable as a real combination of Pauli strings.
class Observable {
  public:
    Observable(int num_qubits, std::vector<PauliTerm> terms);

    static Observable pauli_z(int num_qubits, int qubit);

    int num_qubits() const { return num_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }
    /// Sum of coefficient magnitudes; bounds |<O>|.
    double weight() const;
    /// True when every term is built from I and Z only (diagonal in the
    /// computational basis, so it can be estimated from one shot histogram).
    bool is_diagonal() const;
    Observable negated() const;

  private:
    int num_qubits_;
    std::vector<PauliTerm> terms_;
};

/// <psi|O|psi>. The observable may act on a prefix of the state's qubits.
double expectation(const StateVector& state, const Observable& obs);

/// |<a|b>|^2; clamped into [0, 1] against float residue.
double overlap_sq(const StateVector& a, const StateVector& b);

/// Multinomial sample of computational-basis outcomes.
struct ShotHistogram {
    std::map<std::size_t, std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    double frequency(std::size_t basis) const;
};

ShotHistogram sample_counts(const StateVector& state, std::uint64_t shots, std::uint64_t seed);

/// Estimates a diagonal observable from a histogram of basis outcomes.
double expectation_from_counts(const ShotHistogram& hist, const Observable& obs);

/// Debug dump: {"n": N, "amps": [[re, im], ...]}.
std::string state_to_json(const StateVector& state);

/// Process-wide simulator metering (circuits executed, shots drawn).
std::uint64_t circuits_run();
std::uint64_t shots_consumed();
void reset_run_stats();

}  // namespace qids::sim
