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

#include "qids/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qids/util.hpp"

namespace qids::sim {

namespace {

std::atomic<std::uint64_t> g_circuits_run{0};
std::atomic<std::uint64_t> g_shots_consumed{0};

void check_qubit(int num_qubits, int q, const char* what) {
    if (q < 0 || q >= num_qubits) {
        throw std::invalid_argument(std::string(what) + " qubit " + std::to_string(q) +
                                " out of range for " + std::to_string(num_qubits) + "-qubit state");
    }
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                " outside supported range [1, " + std::to_string(kMaxQubits) + "]");
    }
    amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
    amps_[0] = cplx{1.0, 0.0};
}

double StateVector::norm_sq() const {
    double total = 0.0;
    for (const cplx& a : amps_) total += std::norm(a);
    return total;
}

const char* gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::Rx: return "rx";
        case GateKind::Ry: return "ry";
        case GateKind::Rz: return "rz";
        case GateKind::Cnot: return "cnot";
        case GateKind::Cz: return "cz";
        case GateKind::Hadamard: return "h";
    }
    return "?";
}

Gate Gate::inverse() const {
    Gate g = *this;
    if (g.is_rotation()) g.angle = -g.angle;
    return g;
}

void apply_gate(StateVector& state, const Gate& gate) {
    const int n = state.num_qubits();
    check_qubit(n, gate.target, "target");
    if (gate.is_two_qubit()) {
        check_qubit(n, gate.control, "control");
        if (gate.control == gate.target) {
            throw std::invalid_argument("control and target must differ");
        }
    }

    auto amps = state.amps();
    const std::size_t dim = amps.size();
    const std::size_t tbit = std::size_t{1} << gate.target;

    switch (gate.kind) {
        case GateKind::Ry: {
            const double c = std::cos(gate.angle / 2.0);
            const double s = std::sin(gate.angle / 2.0);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & tbit) continue;
                const cplx a0 = amps[i];
                const cplx a1 = amps[i | tbit];
                amps[i] = c * a0 - s * a1;
                amps[i | tbit] = s * a0 + c * a1;
            }
            break;
        }
        case GateKind::Rx: {
            const double c = std::cos(gate.angle / 2.0);
            const double s = std::sin(gate.angle / 2.0);
            const cplx mis{0.0, -s};
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & tbit) continue;
                const cplx a0 = amps[i];
                const cplx a1 = amps[i | tbit];
                amps[i] = c * a0 + mis * a1;
                amps[i | tbit] = mis * a0 + c * a1;
            }
            break;
        }
        case GateKind::Rz: {
            const cplx e0 = std::polar(1.0, -gate.angle / 2.0);
            const cplx e1 = std::polar(1.0, gate.angle / 2.0);
            for (std::size_t i = 0; i < dim; ++i) {
                amps[i] *= (i & tbit) ? e1 : e0;
            }
            break;
        }
        case GateKind::Hadamard: {
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & tbit) continue;
                const cplx a0 = amps[i];
                const cplx a1 = amps[i | tbit];
                amps[i] = inv_sqrt2 * (a0 + a1);
                amps[i | tbit] = inv_sqrt2 * (a0 - a1);
            }
            break;
        }
        case GateKind::Cnot: {
            const std::size_t cbit = std::size_t{1} << gate.control;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & cbit) && !(i & tbit)) {
                    std::swap(amps[i], amps[i | tbit]);
                }
            }
            break;
        }
        case GateKind::Cz: {
            const std::size_t cbit = std::size_t{1} << gate.control;
            const std::size_t mask = cbit | tbit;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & mask) == mask) amps[i] = -amps[i];
            }
            break;
        }
    }
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                " outside supported range [1, " + std::to_string(kMaxQubits) + "]");
    }
}

void Circuit::push_back(const Gate& gate) {
    check_qubit(num_qubits_, gate.target, "target");
    if (gate.is_two_qubit()) check_qubit(num_qubits_, gate.control, "control");
    gates_.push_back(gate);
}

void Circuit::push_back_param(const Gate& gate) {
    if (!gate.is_rotation()) {
        throw std::invalid_argument("only rotation gates can carry a trainable parameter");
    }
    push_back(gate);
    slots_.emplace_back(gates_.size() - 1, slots_.size());
}

void Circuit::append(const Circuit& other) {
    if (other.num_qubits_ != num_qubits_) {
        throw std::invalid_argument("circuit qubit counts differ: " + std::to_string(num_qubits_) +
                                    " vs " + std::to_string(other.num_qubits_));
    }
    const std::size_t gate_base = gates_.size();
    const std::size_t param_base = slots_.size();
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    for (const auto& [gi, pi] : other.slots_) {
        slots_.emplace_back(gate_base + gi, param_base + pi);
    }
}

void Circuit::bind(std::span<const double> theta) {
    if (theta.size() != slots_.size()) {
        throw std::invalid_argument("parameter vector has " + std::to_string(theta.size()) +
                                    " entries, circuit expects " + std::to_string(slots_.size()));
    }
    for (const auto& [gi, pi] : slots_) {
        gates_[gi].angle = theta[pi];
    }
}

void Circuit::shift_param(std::size_t param_index, double delta) {
    if (param_index >= slots_.size()) {
        throw std::out_of_range("parameter index " + std::to_string(param_index) + " out of range");
    }
    for (const auto& [gi, pi] : slots_) {
        if (pi == param_index) {
            gates_[gi].angle += delta;
            return;
        }
    }
}

double Circuit::param_angle(std::size_t param_index) const {
    for (const auto& [gi, pi] : slots_) {
        if (pi == param_index) return gates_[gi].angle;
    }
    throw std::out_of_range("parameter index " + std::to_string(param_index) + " out of range");
}

Circuit Circuit::inverted() const {
    Circuit inv(num_qubits_);
    inv.gates_.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        inv.gates_.push_back(it->inverse());
    }
    // Parameter slots do not survive inversion: an inverted circuit is a fixed
    // unitary (used for compute-uncompute overlaps), not a trainable template.
    return inv;
}

void run_circuit(const Circuit& circuit, StateVector& state) {
    if (circuit.num_qubits() != state.num_qubits()) {
        throw std::invalid_argument("circuit is for " + std::to_string(circuit.num_qubits()) +
                                    " qubits, state has " + std::to_string(state.num_qubits()));
    }
    for (const Gate& g : circuit.gates()) {
        apply_gate(state, g);
    }
    g_circuits_run.fetch_add(1, std::memory_order_relaxed);
}

Observable::Observable(int num_qubits, std::vector<PauliTerm> terms)
    : num_qubits_(num_qubits), terms_(std::move(terms)) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                " outside supported range [1, " + std::to_string(kMaxQubits) + "]");
    }
    for (const PauliTerm& t : terms_) {
        if (t.paulis.size() != static_cast<std::size_t>(num_qubits)) {
            throw std::invalid_argument("pauli string \"" + t.paulis + "\" length does not match qubit count");
        }
        for (char c : t.paulis) {
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
                throw std::invalid_argument(std::string("unknown pauli letter '") + c + "'");
            }
        }
    }
}

Observable Observable::pauli_z(int num_qubits, int qubit) {
    check_qubit(num_qubits, qubit, "observable");
    std::string s(static_cast<std::size_t>(num_qubits), 'I');
    s[static_cast<std::size_t>(qubit)] = 'Z';
    return Observable(num_qubits, {{1.0, std::move(s)}});
}

double Observable::weight() const {
    double w = 0.0;
    for (const PauliTerm& t : terms_) w += std::abs(t.coeff);
    return w;
}

bool Observable::is_diagonal() const {
    for (const PauliTerm& t : terms_) {
        for (char c : t.paulis) {
            if (c == 'X' || c == 'Y') return false;
        }
    }
    return true;
}

Observable Observable::negated() const {
    std::vector<PauliTerm> t = terms_;
    for (PauliTerm& term : t) term.coeff = -term.coeff;
    return Observable(num_qubits_, std::move(t));
}

namespace {

/// Applies one Pauli string to |psi>, writing into `out`.
void apply_pauli_string(const std::string& paulis, std::span<const cplx> in, std::span<cplx> out) {
    const std::size_t dim = in.size();
    // Decompose: X/Y letters flip bits, Z/Y letters contribute phases.
    std::size_t flip_mask = 0;
    std::size_t z_mask = 0;
    int y_count = 0;
    for (std::size_t q = 0; q < paulis.size(); ++q) {
        switch (paulis[q]) {
            case 'X': flip_mask |= std::size_t{1} << q; break;
            case 'Y':
                flip_mask |= std::size_t{1} << q;
                z_mask |= std::size_t{1} << q;
                ++y_count;
                break;
            case 'Z': z_mask |= std::size_t{1} << q; break;
            default: break;
        }
    }
    // Y = i * X * Z, so each Y contributes a global factor i and a Z-style
    // sign read off the *pre-flip* basis state.
    cplx global{1.0, 0.0};
    switch (y_count % 4) {
        case 0: global = {1.0, 0.0}; break;
        case 1: global = {0.0, 1.0}; break;
        case 2: global = {-1.0, 0.0}; break;
        case 3: global = {0.0, -1.0}; break;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t j = i ^ flip_mask;
        const int parity = std::popcount(i & z_mask) & 1;
        const double sign = parity ? -1.0 : 1.0;
        out[j] += global * sign * in[i];
    }
}

}  // namespace

double expectation(const StateVector& state, const Observable& obs) {
    if (obs.num_qubits() > state.num_qubits()) {
        throw std::invalid_argument("observable acts on more qubits than the state has");
    }
    const auto amps = state.amps();
    const std::size_t dim = amps.size();

    if (obs.is_diagonal()) {
        // Diagonal terms need only probabilities.
        double total = 0.0;
        for (const PauliTerm& t : obs.terms()) {
            std::size_t z_mask = 0;
            for (std::size_t q = 0; q < t.paulis.size(); ++q) {
                if (t.paulis[q] == 'Z') z_mask |= std::size_t{1} << q;
            }
            double acc = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double p = std::norm(amps[i]);
                acc += (std::popcount(i & z_mask) & 1) ? -p : p;
            }
            total += t.coeff * acc;
        }
        return total;
    }

    // General case: accumulate O|psi> term by term, then take <psi|O|psi>.
    std::vector<cplx> opsi(dim, cplx{0.0, 0.0});
    std::vector<cplx> scratch(dim);
    for (const PauliTerm& t : obs.terms()) {
        std::fill(scratch.begin(), scratch.end(), cplx{0.0, 0.0});
        std::string padded = t.paulis;
        padded.resize(static_cast<std::size_t>(state.num_qubits()), 'I');
        apply_pauli_string(padded, amps, scratch);
        for (std::size_t i = 0; i < dim; ++i) opsi[i] += t.coeff * scratch[i];
    }
    cplx val{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) val += std::conj(amps[i]) * opsi[i];
    if (std::abs(val.imag()) > 1e-10) {
        throw NumericError("expectation value has non-negligible imaginary part");
    }
    return val.real();
}

double overlap_sq(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("overlap requires equal qubit counts");
    }
    const auto aa = a.amps();
    const auto bb = b.amps();
    cplx inner{0.0, 0.0};
    for (std::size_t i = 0; i < aa.size(); ++i) inner += std::conj(aa[i]) * bb[i];
    return std::clamp(std::norm(inner), 0.0, 1.0);
}

double ShotHistogram::frequency(std::size_t basis) const {
    if (shots == 0) return 0.0;
    auto it = counts.find(basis);
    if (it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(shots);
}

ShotHistogram sample_counts(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw std::invalid_argument("shot count must be at least 1");
    }
    const auto amps = state.amps();
    const std::size_t dim = amps.size();

    // Cumulative distribution, then inverse-transform sampling.
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        acc += std::norm(amps[i]);
        cdf[i] = acc;
    }
    const double total = cdf[dim - 1];

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, total);

    ShotHistogram hist;
    hist.shots = shots;
    hist.seed = seed;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = unif(rng);
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= dim) idx = dim - 1;
        ++hist.counts[idx];
    }
    g_shots_consumed.fetch_add(shots, std::memory_order_relaxed);
    return hist;
}

double expectation_from_counts(const ShotHistogram& hist, const Observable& obs) {
    if (!obs.is_diagonal()) {
        throw std::invalid_argument("shot-based estimation supports diagonal (I/Z) observables only");
    }
    if (hist.shots == 0) {
        throw std::invalid_argument("histogram holds no shots");
    }
    double total = 0.0;
    for (const PauliTerm& t : obs.terms()) {
        std::size_t z_mask = 0;
        for (std::size_t q = 0; q < t.paulis.size(); ++q) {
            if (t.paulis[q] == 'Z') z_mask |= std::size_t{1} << q;
        }
        double acc = 0.0;
        for (const auto& [basis, count] : hist.counts) {
            const double f = static_cast<double>(count) / static_cast<double>(hist.shots);
            acc += (std::popcount(basis & z_mask) & 1) ? -f : f;
        }
        total += t.coeff * acc;
    }
    return total;
}

std::string state_to_json(const StateVector& state) {
    nlohmann::json j;
    j["n"] = state.num_qubits();
    nlohmann::json amps = nlohmann::json::array();
    for (const cplx& a : state.amps()) {
        amps.push_back({a.real(), a.imag()});
    }
    j["amps"] = std::move(amps);
    return j.dump();
}

std::uint64_t circuits_run() { return g_circuits_run.load(std::memory_order_relaxed); }
std::uint64_t shots_consumed() { return g_shots_consumed.load(std::memory_order_relaxed); }
void reset_run_stats() {
    g_circuits_run.store(0, std::memory_order_relaxed);
    g_shots_consumed.store(0, std::memory_order_relaxed);
}

}  // namespace qids::sim
