#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "qids/sim.hpp"
#include "qids/util.hpp"
#include "support/oracles.hpp"

using namespace qids;
using sim::Gate;

namespace {

constexpr double kPi = std::numbers::pi;

sim::Circuit random_circuit(int num_qubits, std::size_t gates, std::mt19937_64& rng) {
    sim::Circuit circuit(num_qubits);
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> qubit(0, num_qubits - 1);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (std::size_t i = 0; i < gates; ++i) {
        const int target = qubit(rng);
        switch (kind(rng)) {
            case 0: circuit.push_back(Gate::rx(target, angle(rng))); break;
            case 1: circuit.push_back(Gate::ry(target, angle(rng))); break;
            case 2: circuit.push_back(Gate::rz(target, angle(rng))); break;
            case 3: circuit.push_back(Gate::hadamard(target)); break;
            default: {
                if (num_qubits < 2) {
                    circuit.push_back(Gate::ry(target, angle(rng)));
                    break;
                }
                int other = qubit(rng);
                while (other == target) other = qubit(rng);
                if (kind(rng) % 2 == 0) {
                    circuit.push_back(Gate::cnot(other, target));
                } else {
                    circuit.push_back(Gate::cz(other, target));
                }
                break;
            }
        }
    }
    return circuit;
}

sim::StateVector random_state(int num_qubits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    sim::StateVector state(num_qubits);
    sim::Circuit circuit = random_circuit(num_qubits, 24, rng);
    sim::run_circuit(circuit, state);
    return state;
}

}  // namespace

TEST_CASE("zero state preparation") {
    const sim::StateVector one(1);
    REQUIRE(one.dim() == 2);
    CHECK(one.amps()[0] == sim::cplx{1.0, 0.0});
    CHECK(one.amps()[1] == sim::cplx{0.0, 0.0});

    const sim::StateVector three(3);
    REQUIRE(three.dim() == 8);
    CHECK(three.amps()[0] == sim::cplx{1.0, 0.0});
    for (std::size_t i = 1; i < 8; ++i) CHECK(three.amps()[i] == sim::cplx{0.0, 0.0});

    CHECK_THROWS_AS(sim::StateVector(13), std::invalid_argument);
    CHECK_THROWS_AS(sim::StateVector(0), std::invalid_argument);
}

TEST_CASE("single-qubit rotation conventions") {
    sim::StateVector flip(1);
    sim::apply_gate(flip, Gate::ry(0, kPi));
    CHECK(std::abs(flip.amps()[0]) < 1e-12);
    CHECK(std::abs(flip.amps()[1] - sim::cplx{1.0, 0.0}) < 1e-12);

    sim::StateVector half(1);
    sim::apply_gate(half, Gate::ry(0, kPi / 2));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(half.amps()[0] - sim::cplx{inv_sqrt2, 0.0}) < 1e-12);
    CHECK(std::abs(half.amps()[1] - sim::cplx{inv_sqrt2, 0.0}) < 1e-12);

    // Rx(t)|0> = cos(t/2)|0> - i sin(t/2)|1>
    sim::StateVector rx(1);
    sim::apply_gate(rx, Gate::rx(0, 0.7));
    CHECK(std::abs(rx.amps()[0] - sim::cplx{std::cos(0.35), 0.0}) < 1e-12);
    CHECK(std::abs(rx.amps()[1] - sim::cplx{0.0, -std::sin(0.35)}) < 1e-12);

    // Rz phase convention via <X> on |+>: Rz(t)|+> has <X> = cos t.
    sim::StateVector rz(1);
    sim::apply_gate(rz, Gate::hadamard(0));
    sim::apply_gate(rz, Gate::rz(0, 0.9));
    const sim::Observable x_obs(1, {{1.0, "X"}});
    CHECK(sim::expectation(rz, x_obs) == doctest::Approx(std::cos(0.9)).epsilon(1e-12));
}

TEST_CASE("two-qubit gates") {
    // q0 = 1 controls a flip of q1: basis 01 -> basis 11.
    sim::StateVector state(2);
    sim::apply_gate(state, Gate::ry(0, kPi));  // |q0=1>
    sim::apply_gate(state, Gate::cnot(0, 1));
    CHECK(state.prob(3) == doctest::Approx(1.0).epsilon(1e-12));

    // Control clear: nothing happens.
    sim::StateVector idle(2);
    sim::apply_gate(idle, Gate::cnot(0, 1));
    CHECK(idle.prob(0) == doctest::Approx(1.0).epsilon(1e-12));

    // CZ flips the phase of |11> only.
    sim::StateVector cz(2);
    sim::apply_gate(cz, Gate::hadamard(0));
    sim::apply_gate(cz, Gate::hadamard(1));
    sim::apply_gate(cz, Gate::cz(0, 1));
    CHECK(cz.amps()[3].real() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(cz.amps()[1].real() == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(sim::apply_gate(cz, Gate::cnot(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(sim::apply_gate(cz, Gate::ry(5, 0.1)), std::invalid_argument);
}

TEST_CASE("run_circuit basics") {
    sim::StateVector state = random_state(3, 7);
    const std::vector<sim::cplx> before(state.amps().begin(), state.amps().end());

    const sim::Circuit empty(3);
    sim::run_circuit(empty, state);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(state.amps()[i] == before[i]);

    sim::Circuit twice(1);
    twice.push_back(Gate::ry(0, kPi));
    twice.push_back(Gate::ry(0, kPi));
    sim::StateVector zero(1);
    sim::run_circuit(twice, zero);
    CHECK(zero.prob(0) == doctest::Approx(1.0).epsilon(1e-12));

    sim::StateVector mismatched(2);
    CHECK_THROWS_AS(sim::run_circuit(empty, mismatched), std::invalid_argument);
}

TEST_CASE("norm preservation over random circuits") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        sim::StateVector state(n);
        const sim::Circuit circuit = random_circuit(n, 30, rng);
        sim::run_circuit(circuit, state);
        CHECK(std::abs(state.norm_sq() - 1.0) < 1e-10);
    }
}

TEST_CASE("circuit inverse is an exact round-trip") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const sim::Circuit circuit = random_circuit(n, 25, rng);
        sim::StateVector state = random_state(n, rng());
        const std::vector<sim::cplx> before(state.amps().begin(), state.amps().end());
        sim::run_circuit(circuit, state);
        sim::run_circuit(circuit.inverted(), state);
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(std::abs(state.amps()[i] - before[i]) < 1e-12);
        }
    }
}

TEST_CASE("expectation closed forms and bounds") {
    sim::StateVector zero(1);
    const sim::Observable z0 = sim::Observable::pauli_z(1, 0);
    CHECK(sim::expectation(zero, z0) == doctest::Approx(1.0).epsilon(1e-12));

    sim::StateVector one(1);
    sim::apply_gate(one, Gate::ry(0, kPi));
    CHECK(sim::expectation(one, z0) == doctest::Approx(-1.0).epsilon(1e-12));

    for (double theta = -3.0; theta <= 3.0; theta += 0.37) {
        sim::StateVector state(1);
        sim::apply_gate(state, Gate::ry(0, theta));
        CHECK(sim::expectation(state, z0) == doctest::Approx(std::cos(theta)).epsilon(1e-12));
    }

    // Random multi-term observables against the dense Kronecker oracle.
    std::mt19937_64 rng(99);
    const std::string letters = "IXYZ";
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const sim::StateVector state = random_state(n, rng());
        std::vector<sim::PauliTerm> terms;
        std::complex<double> expected{0.0, 0.0};
        for (int t = 0; t < 3; ++t) {
            std::string paulis;
            for (int q = 0; q < n; ++q) paulis += letters[rng() % 4];
            const double coeff = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
            terms.push_back({coeff, paulis});
            expected += coeff * oracle::pauli_expectation(state.amps(), paulis);
        }
        const sim::Observable obs(n, terms);
        CHECK(std::abs(expected.imag()) < 1e-10);
        const double got = sim::expectation(state, obs);
        CHECK(got == doctest::Approx(expected.real()).epsilon(1e-9));
        CHECK(std::abs(got) <= obs.weight() + 1e-12);
    }
}

TEST_CASE("observable validation") {
    CHECK_THROWS_AS(sim::Observable(2, {{1.0, "XQ"}}), std::invalid_argument);
    CHECK_THROWS_AS(sim::Observable(2, {{1.0, "X"}}), std::invalid_argument);
    const sim::Observable diag(2, {{0.5, "IZ"}, {-0.25, "ZZ"}});
    CHECK(diag.is_diagonal());
    CHECK(diag.weight() == doctest::Approx(0.75));
    const sim::Observable off(2, {{0.5, "XZ"}});
    CHECK(!off.is_diagonal());
}

TEST_CASE("overlap closed form and symmetry") {
    const sim::StateVector a = random_state(3, 1);
    CHECK(sim::overlap_sq(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    sim::StateVector zero(1);
    sim::StateVector one(1);
    sim::apply_gate(one, Gate::ry(0, kPi));
    CHECK(sim::overlap_sq(zero, one) == doctest::Approx(0.0).epsilon(1e-12));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = angle(rng);
        const double y = angle(rng);
        sim::StateVector sx(1);
        sim::StateVector sy(1);
        sim::apply_gate(sx, Gate::ry(0, x));
        sim::apply_gate(sy, Gate::ry(0, y));
        const double expected = std::pow(std::cos((x - y) / 2.0), 2);
        CHECK(sim::overlap_sq(sx, sy) == doctest::Approx(expected).epsilon(1e-10));
        CHECK(sim::overlap_sq(sx, sy) == sim::overlap_sq(sy, sx));
    }

    const sim::StateVector two(2);
    CHECK_THROWS_AS(sim::overlap_sq(zero, two), std::invalid_argument);
}

TEST_CASE("sampling is seeded and concentrates") {
    const sim::StateVector zero(1);
    const sim::ShotHistogram h = sim::sample_counts(zero, 100, 5);
    REQUIRE(h.counts.size() == 1);
    CHECK(h.counts.at(0) == 100);
    CHECK(h.shots == 100);

    sim::StateVector plus(1);
    sim::apply_gate(plus, Gate::hadamard(0));
    const sim::ShotHistogram big = sim::sample_counts(plus, 1000000, 7);
    CHECK(std::abs(big.frequency(0) - 0.5) < 0.005);

    const sim::ShotHistogram again = sim::sample_counts(plus, 1000, 11);
    const sim::ShotHistogram same = sim::sample_counts(plus, 1000, 11);
    CHECK(again.counts == same.counts);

    std::uint64_t total = 0;
    for (const auto& [basis, count] : again.counts) total += count;
    CHECK(total == again.shots);

    CHECK_THROWS_AS(sim::sample_counts(plus, 0, 1), std::invalid_argument);
}

TEST_CASE("shot error shrinks like one over sqrt shots") {
    const sim::StateVector state = random_state(3, 42);
    std::vector<double> errors;
    for (const std::uint64_t shots : {100ULL, 1000ULL, 10000ULL, 100000ULL}) {
        double worst = 0.0;
        for (std::uint64_t rep = 0; rep < 5; ++rep) {
            const sim::ShotHistogram h = sim::sample_counts(state, shots, 100 + rep);
            double max_err = 0.0;
            for (std::size_t b = 0; b < state.dim(); ++b) {
                max_err = std::max(max_err, std::abs(h.frequency(b) - state.prob(b)));
            }
            worst += max_err;
        }
        errors.push_back(worst / 5.0);
    }
    // Regression of log(err) on log(M) should slope near -1/2.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double ms[] = {2.0, 3.0, 4.0, 5.0};
    for (int i = 0; i < 4; ++i) {
        const double y = std::log10(errors[i]);
        sx += ms[i];
        sy += y;
        sxx += ms[i] * ms[i];
        sxy += ms[i] * y;
    }
    const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    CHECK(slope < -0.25);
    CHECK(slope > -0.75);
    CHECK(errors.front() > errors.back());
}

TEST_CASE("diagonal observables are estimable from counts") {
    sim::StateVector state(1);
    sim::apply_gate(state, Gate::ry(0, 1.1));
    const sim::Observable z0 = sim::Observable::pauli_z(1, 0);
    const sim::ShotHistogram h = sim::sample_counts(state, 200000, 3);
    CHECK(std::abs(sim::expectation_from_counts(h, z0) - std::cos(1.1)) < 0.01);

    const sim::Observable x0(1, {{1.0, "X"}});
    CHECK_THROWS_AS(sim::expectation_from_counts(h, x0), std::invalid_argument);
}

TEST_CASE("parameter slots bind, shift, append, and invert") {
    sim::Circuit circuit(2);
    circuit.push_back(Gate::hadamard(0));
    circuit.push_back_param(Gate::ry(0, 0.0));
    circuit.push_back_param(Gate::rz(1, 0.0));
    REQUIRE(circuit.param_count() == 2);

    circuit.bind(std::vector<double>{0.4, -0.8});
    CHECK(circuit.param_angle(0) == doctest::Approx(0.4));
    CHECK(circuit.param_angle(1) == doctest::Approx(-0.8));

    circuit.shift_param(1, 0.25);
    CHECK(circuit.param_angle(1) == doctest::Approx(-0.55));

    sim::Circuit tail(2);
    tail.push_back_param(Gate::ry(1, 0.0));
    circuit.append(tail);
    REQUIRE(circuit.param_count() == 3);
    circuit.bind(std::vector<double>{0.1, 0.2, 0.3});
    CHECK(circuit.param_angle(2) == doctest::Approx(0.3));

    const sim::Circuit inverse = circuit.inverted();
    CHECK(inverse.param_count() == 0);
    CHECK(inverse.gates().size() == circuit.gates().size());
    CHECK(inverse.gates().back().kind == sim::GateKind::Hadamard);

    CHECK_THROWS_AS(circuit.bind(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("state dumps to the documented JSON shape") {
    sim::StateVector state(1);
    sim::apply_gate(state, Gate::rx(0, 0.6));
    const nlohmann::json j = nlohmann::json::parse(sim::state_to_json(state));
    CHECK(j.at("n").get<int>() == 1);
    REQUIRE(j.at("amps").size() == 2);
    CHECK(j.at("amps")[0][0].get<double>() == doctest::Approx(std::cos(0.3)));
    CHECK(j.at("amps")[1][1].get<double>() == doctest::Approx(-std::sin(0.3)));
}

TEST_CASE("run statistics meter circuits and shots") {
    sim::reset_run_stats();
    sim::StateVector state(1);
    sim::Circuit circuit(1);
    circuit.push_back(Gate::hadamard(0));
    sim::run_circuit(circuit, state);
    sim::run_circuit(circuit, state);
    (void)sim::sample_counts(state, 123, 9);
    CHECK(sim::circuits_run() == 2);
    CHECK(sim::shots_consumed() == 123);
    sim::reset_run_stats();
    CHECK(sim::circuits_run() == 0);
    CHECK(sim::shots_consumed() == 0);
}
