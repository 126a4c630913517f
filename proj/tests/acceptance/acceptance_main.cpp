// Acceptance gate: one pass/fail line per criterion, exit 0 iff every gated
// criterion holds. Criterion 8 is a qualitative end-to-end ordering check —
// reported, not gated — per its own definition; criterion 9 reuses its runs.
//
// Tolerances are pinned next to each check, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qids/bench.hpp"
#include "qids/kernelml.hpp"
#include "qids/qtnn.hpp"
#include "qids/sim.hpp"
#include "qids/util.hpp"
#include "qids/vqc.hpp"

namespace {

using namespace qids;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// reporting

struct Criterion {
    bool pass = true;
    std::string detail;

    // Records the first failing condition; later successes never clear it.
    void require(bool ok, const std::string& message) {
        if (!ok && pass) {
            pass = false;
            detail = message;
        }
    }
    void note(const std::string& message) {
        if (pass) detail = message;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int failures = 0;

void report(int index, const char* name, const Criterion& c, double seconds, bool gated) {
    const char* verdict = c.pass ? (gated ? "PASS" : "SOFT PASS") : (gated ? "FAIL" : "SOFT FAIL");
    std::printf("[%d/9] %-9s %s (%.2fs): %s%s\n", index, verdict, name, seconds, c.detail.c_str(),
                gated ? "" : " [reported, not gated]");
    std::fflush(stdout);
    if (gated && !c.pass) ++failures;
}

// ---------------------------------------------------------------------------
// local oracles (kept self-contained: the gate audits the library, so it
// brings its own reference implementations)

std::vector<double> central_diff(const std::function<double(std::span<const double>)>& f,
                                 std::vector<double> x, double h) {
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double up = f(x);
        x[i] = keep - h;
        const double down = f(x);
        x[i] = keep;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

// Gauss-Jordan with partial pivoting; a is row-major n*n.
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
        std::swap(b[col], b[pivot]);
        const double diag = a[col * n + col];
        for (std::size_t c = 0; c < n; ++c) a[col * n + c] /= diag;
        b[col] /= diag;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r * n + col];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
            b[r] -= factor * b[col];
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// criterion 1: parameter-count identities (exact, zero tolerance)

Criterion criterion_param_counts() {
    Criterion c;

    for (int layers : {6, 8, 10}) {
        const vqc::QnnModel m = vqc::make_pure_qnn(8, layers, 1);
        c.require(m.quantum_params() == static_cast<std::size_t>(8 * layers) &&
                      m.classical_params() == 0,
                  "pure QNN " + std::to_string(layers) + "L parameter count mismatch");
        const bench::Footprint f = bench::model_footprint("qnn-" + std::to_string(layers) + "l");
        c.require(f.quantum_params == static_cast<std::size_t>(8 * layers) &&
                      f.classical_params == 0 && f.qubits == 8,
                  "pure QNN footprint mismatch");
    }

    for (int layers : {2, 4, 6, 8, 10}) {
        const vqc::QnnModel m = vqc::make_hybrid_qnn(8, layers, 1);
        c.require(m.quantum_params() == static_cast<std::size_t>(8 * layers) &&
                      m.classical_params() == 18,
                  "hybrid " + std::to_string(layers) + "L parameter count mismatch");
        const bench::Footprint f =
            bench::model_footprint("hybrid-" + std::to_string(layers) + "l");
        c.require(f.quantum_params == static_cast<std::size_t>(8 * layers) &&
                      f.classical_params == 18 && f.qubits == 8,
                  "hybrid footprint mismatch");
    }

    struct Row {
        int hidden, layers, qubits;
        std::size_t quantum, classical;
    };
    const Row rows[] = {
        {4, 2, 7, 14, 66},  {8, 2, 8, 16, 162},  {4, 4, 7, 28, 66},
        {8, 4, 8, 32, 162}, {16, 4, 9, 36, 450},
    };
    for (const Row& row : rows) {
        qtnn::QtArch arch;
        arch.hidden = row.hidden;
        arch.circuit_layers = row.layers;
        const std::string tag =
            "qtnn-" + std::to_string(row.hidden) + "x" + std::to_string(row.layers);
        c.require(arch.num_qubits() == row.qubits && arch.quantum_params() == row.quantum &&
                      arch.mlp_params() == row.classical,
                  tag + " architecture accounting mismatch");
        const bench::Footprint f = bench::model_footprint(tag);
        c.require(f.qubits == row.qubits && f.quantum_params == row.quantum &&
                      f.classical_params == row.classical,
                  tag + " footprint mismatch");
    }

    c.note("13/13 model rows match exactly (3 pure, 5 hybrid, 5 generator)");
    return c;
}

// ---------------------------------------------------------------------------
// criterion 2: degenerate constant-positive identity

Criterion criterion_degenerate() {
    Criterion c;

    const auto degenerate_report = [](std::size_t positives, std::size_t total) {
        std::vector<int> labels(total, -1);
        std::fill(labels.begin(), labels.begin() + static_cast<long>(positives), +1);
        const std::vector<int> preds(total, +1);
        return metrics::metrics(metrics::confusion(preds, labels));
    };

    // Exact identity at several prevalences: acc = p, sens = 1, spec = 0,
    // F1 = 2p/(1+p), MCC = 0.
    const std::pair<std::size_t, std::size_t> grid[] = {
        {786, 1000}, {300, 1000}, {125, 500}, {360, 400}};
    for (const auto& [pos, total] : grid) {
        const double p = static_cast<double>(pos) / static_cast<double>(total);
        const metrics::MetricsReport rep = degenerate_report(pos, total);
        c.require(std::abs(rep.accuracy - p) < 1e-12, "accuracy != prevalence");
        c.require(rep.sensitivity == 1.0, "sensitivity != 1");
        c.require(rep.specificity == 0.0, "specificity != 0");
        c.require(std::abs(rep.f1 - 2.0 * p / (1.0 + p)) < 1e-12, "F1 != 2p/(1+p)");
        c.require(rep.mcc == 0.0, "MCC != 0 for a constant classifier");
    }

    // The p = 0.786 row, to 3 decimals (the published table rounds F1 to
    // 0.879; the identity gives 0.880179..., so allow the print's rounding).
    const metrics::MetricsReport rep = degenerate_report(786, 1000);
    c.require(std::round(rep.accuracy * 1000.0) / 1000.0 == 0.786, "acc(0.786) print mismatch");
    c.require(std::round(rep.sensitivity * 1000.0) / 1000.0 == 1.000, "sens print mismatch");
    c.require(std::round(rep.specificity * 1000.0) / 1000.0 == 0.000, "spec print mismatch");
    c.require(std::abs(rep.f1 - 0.879) < 1.5e-3, "F1 print out of tolerance band");

    c.note("p=0.786 -> acc " + fmt(rep.accuracy) + ", sens 1, spec 0, f1 " + fmt(rep.f1) +
           " (= 2p/(1+p))");
    return c;
}

// ---------------------------------------------------------------------------
// criterion 3: parameter-shift gradients vs central differences

train::TrainSet random_batch(int num_features, std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    train::TrainSet set;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(static_cast<std::size_t>(num_features));
        for (double& f : x) f = unif(rng);
        set.features.push_back(std::move(x));
        set.labels.push_back(i % 2 == 0 ? +1 : -1);
    }
    return set;
}

double vqc_fd_deviation(const vqc::QnnModel& model, const train::TrainSet& batch, double decay,
                        double h) {
    const vqc::Gradients g = vqc::loss_gradient(model, batch, decay);
    std::vector<double> analytic = g.theta;
    analytic.insert(analytic.end(), g.w.begin(), g.w.end());
    analytic.insert(analytic.end(), g.b.begin(), g.b.end());

    std::vector<double> flat = model.theta;
    if (model.head) {
        flat.insert(flat.end(), model.head->w.begin(), model.head->w.end());
        flat.insert(flat.end(), model.head->b.begin(), model.head->b.end());
    }
    const auto f = [&](std::span<const double> v) {
        vqc::QnnModel probe = model;
        std::size_t pos = 0;
        for (double& t : probe.theta) t = v[pos++];
        if (probe.head) {
            for (double& w : probe.head->w) w = v[pos++];
            for (double& b : probe.head->b) b = v[pos++];
        }
        return vqc::loss(probe, batch, decay);
    };
    const std::vector<double> numeric = central_diff(f, flat, h);

    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]));
    }
    return worst;
}

Criterion criterion_gradients() {
    Criterion c;
    constexpr double kStep = 1e-5;
    constexpr double kTol = 1e-6;
    constexpr double kDecay = 1e-3;
    std::mt19937_64 rng(20250819);

    double worst = 0.0;
    int instances = 0;

    // Pure variational models: qubits 1..4, layers 1..2.
    for (int i = 0; i < 7; ++i) {
        const int qubits = 1 + i % 4;
        const int layers = 1 + i % 2;
        const vqc::QnnModel model = vqc::make_pure_qnn(qubits, layers, rng());
        worst = std::max(worst, vqc_fd_deviation(model, random_batch(qubits, rng, 3), kDecay,
                                                 kStep));
        ++instances;
    }

    // Hybrid models: gradient flows through the classical head chain too.
    for (int i = 0; i < 7; ++i) {
        const int qubits = 1 + (i + 1) % 4;
        const int layers = 1 + i % 2;
        const vqc::QnnModel model = vqc::make_hybrid_qnn(qubits, layers, rng());
        worst = std::max(worst, vqc_fd_deviation(model, random_batch(qubits, rng, 3), kDecay,
                                                 kStep));
        ++instances;
    }

    // Circuit-generated MLPs: the composite chain probs -> weights -> loss.
    // Small shapes keep the generator at 3..4 qubits.
    struct Shape {
        int in, hidden, out;
    };
    const Shape shapes[] = {{1, 2, 2}, {1, 1, 2}, {2, 1, 2}};
    for (int i = 0; i < 7; ++i) {
        qtnn::QtArch arch;
        const Shape& s = shapes[i % 3];
        arch.input_dim = s.in;
        arch.hidden = s.hidden;
        arch.output_dim = s.out;
        arch.circuit_layers = 1 + i % 2;
        const qtnn::QtnnModel model = qtnn::make_qtnn(arch, rng());
        const train::TrainSet batch = random_batch(arch.input_dim, rng, 3);

        const std::vector<double> analytic = qtnn::qt_loss_gradient(model, batch, kDecay);
        const auto f = [&](std::span<const double> v) {
            qtnn::QtnnModel probe = model;
            probe.theta.assign(v.begin(), v.end());
            return qtnn::qt_loss(probe, batch, kDecay);
        };
        const std::vector<double> numeric = central_diff(f, model.theta, kStep);
        for (std::size_t k = 0; k < analytic.size(); ++k) {
            worst = std::max(worst, std::abs(analytic[k] - numeric[k]));
        }
        ++instances;
    }

    c.require(instances >= 20, "fewer than 20 gradient instances");
    c.require(worst < kTol, "max |analytic - FD| = " + fmt(worst) + " >= 1e-6");
    c.note(std::to_string(instances) + " instances, worst max-abs deviation " + fmt(worst));
    return c;
}

// ---------------------------------------------------------------------------
// criterion 4: fidelity-kernel suite

Criterion criterion_kernel() {
    Criterion c;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> feat(-kPi, kPi);

    const auto random_point = [&](std::size_t dim) {
        std::vector<double> x(dim);
        for (double& v : x) v = feat(rng);
        return x;
    };

    // K(x,x) = 1 within 1e-10.
    double worst_self = 0.0;
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x = random_point(8);
        worst_self = std::max(worst_self, std::abs(kernel::kernel_exact(x, x) - 1.0));
    }
    c.require(worst_self <= 1e-10, "self-kernel deviates by " + fmt(worst_self));

    // Exact symmetry.
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x = random_point(8);
        const std::vector<double> y = random_point(8);
        c.require(kernel::kernel_exact(x, y) == kernel::kernel_exact(y, x),
                  "kernel not exactly symmetric");
    }

    // One-qubit closed form cos^2(kappa (x - y) / 2) within 1e-10, 100 pairs.
    std::uniform_real_distribution<double> kappa_dist(0.5, 2.0);
    double worst_closed = 0.0;
    for (int i = 0; i < 100; ++i) {
        encode::EncoderConfig enc;
        enc.scale = kappa_dist(rng);
        const std::vector<double> x = {feat(rng)};
        const std::vector<double> y = {feat(rng)};
        const double expected = std::pow(std::cos(enc.scale * (x[0] - y[0]) / 2.0), 2);
        worst_closed =
            std::max(worst_closed, std::abs(kernel::kernel_exact(x, y, enc) - expected));
    }
    c.require(worst_closed <= 1e-10, "closed form deviates by " + fmt(worst_closed));

    // Exact Gram is PSD up to -1e-10.
    std::vector<std::vector<double>> samples;
    for (int i = 0; i < 24; ++i) samples.push_back(random_point(8));
    const kernel::GramMatrix gram = kernel::gram(samples);
    const double lambda_min = kernel::min_eigenvalue(gram);
    c.require(lambda_min >= -1e-10, "exact Gram lambda_min = " + fmt(lambda_min));

    // Shot estimator: M = 1e4 within 3 binomial SEs for >= 95 of 100 pairs.
    constexpr std::uint64_t kShots = 10000;
    int within = 0;
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> x = random_point(8);
        const std::vector<double> y = random_point(8);
        const double exact = kernel::kernel_exact(x, y);
        const double est =
            kernel::kernel_shots(x, y, kShots, static_cast<std::uint64_t>(1000 + i));
        const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(kShots));
        if (std::abs(est - exact) <= 3.0 * se + 1e-12) ++within;
    }
    c.require(within >= 95, "only " + std::to_string(within) + "/100 shot pairs within 3 SE");

    c.note("self " + fmt(worst_self) + ", closed form " + fmt(worst_closed) + ", lambda_min " +
           fmt(lambda_min) + ", shots " + std::to_string(within) + "/100 within 3 SE");
    return c;
}

// ---------------------------------------------------------------------------
// criterion 5: simulator suite

sim::Circuit random_circuit(int num_qubits, std::size_t gates, std::mt19937_64& rng) {
    sim::Circuit circuit(num_qubits);
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> qubit(0, num_qubits - 1);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (std::size_t i = 0; i < gates; ++i) {
        const int target = qubit(rng);
        switch (kind(rng)) {
            case 0: circuit.push_back(sim::Gate::rx(target, angle(rng))); break;
            case 1: circuit.push_back(sim::Gate::ry(target, angle(rng))); break;
            case 2: circuit.push_back(sim::Gate::rz(target, angle(rng))); break;
            case 3: circuit.push_back(sim::Gate::hadamard(target)); break;
            default: {
                if (num_qubits < 2) {
                    circuit.push_back(sim::Gate::ry(target, angle(rng)));
                    break;
                }
                int other = qubit(rng);
                while (other == target) other = qubit(rng);
                if (kind(rng) % 2 == 0) {
                    circuit.push_back(sim::Gate::cnot(other, target));
                } else {
                    circuit.push_back(sim::Gate::cz(other, target));
                }
                break;
            }
        }
    }
    return circuit;
}

Criterion criterion_simulator() {
    Criterion c;
    std::mt19937_64 rng(5555);
    std::uniform_int_distribution<int> qubits_dist(1, 6);

    // Norm preservation over 1,000 random circuits.
    double worst_norm = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int n = qubits_dist(rng);
        const sim::Circuit circuit = random_circuit(n, 25, rng);
        sim::StateVector state(n);
        sim::run_circuit(circuit, state);
        worst_norm = std::max(worst_norm, std::abs(state.norm_sq() - 1.0));
    }
    c.require(worst_norm <= 1e-10, "norm drifts by " + fmt(worst_norm));

    // Circuit then inverse returns |0...0> within 1e-12 per amplitude.
    double worst_round = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int n = qubits_dist(rng);
        const sim::Circuit circuit = random_circuit(n, 25, rng);
        sim::StateVector state(n);
        sim::run_circuit(circuit, state);
        sim::run_circuit(circuit.inverted(), state);
        for (std::size_t b = 0; b < state.dim(); ++b) {
            const sim::cplx expected = b == 0 ? sim::cplx(1.0, 0.0) : sim::cplx(0.0, 0.0);
            worst_round = std::max(worst_round, std::abs(state.amps()[b] - expected));
        }
    }
    c.require(worst_round <= 1e-12, "inverse round-trip deviates by " + fmt(worst_round));

    // <Z> = cos(theta) on a theta grid, within 1e-12.
    const sim::Observable z0 = sim::Observable::pauli_z(1, 0);
    double worst_z = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double theta = -kPi + 2.0 * kPi * i / 100.0;
        sim::StateVector state(1);
        sim::apply_gate(state, sim::Gate::ry(0, theta));
        worst_z = std::max(worst_z, std::abs(sim::expectation(state, z0) - std::cos(theta)));
    }
    c.require(worst_z <= 1e-12, "<Z> deviates from cos(theta) by " + fmt(worst_z));

    // Seeded sampling reproduces exactly; a different seed does not.
    sim::StateVector state(3);
    for (int q = 0; q < 3; ++q) sim::apply_gate(state, sim::Gate::hadamard(q));
    const sim::ShotHistogram a = sim::sample_counts(state, 5000, 42);
    const sim::ShotHistogram b = sim::sample_counts(state, 5000, 42);
    const sim::ShotHistogram d = sim::sample_counts(state, 5000, 43);
    c.require(a.counts == b.counts, "same-seed sampling is not reproducible");
    c.require(a.counts != d.counts, "different seeds produced identical samples");

    c.note("norm " + fmt(worst_norm) + ", round-trip " + fmt(worst_round) + ", <Z> " +
           fmt(worst_z) + ", sampling reproducible");
    return c;
}

// ---------------------------------------------------------------------------
// criterion 6: kernel-ridge vs dense brute force

Criterion criterion_ridge() {
    Criterion c;
    std::mt19937_64 rng(6666);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    double worst = 0.0;
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            // PSD kernel: B B^T plus a small ridge so the instance is honest.
            std::vector<double> b(n * n);
            for (double& v : b) v = unif(rng);
            kernel::GramMatrix k;
            k.n = n;
            k.values.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    double acc = i == j ? 0.5 : 0.0;
                    for (std::size_t t = 0; t < n; ++t) acc += b[i * n + t] * b[j * n + t];
                    k.at(i, j) = acc;
                }
            }
            std::vector<int> y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = (rng() % 2 == 0) ? +1 : -1;

            for (double lambda : {1e-3, 1.0}) {
                const kernelml::KernelRidgeModel model = kernelml::ridge_fit(k, y, lambda);

                std::vector<double> dense = k.values;
                for (std::size_t i = 0; i < n; ++i) dense[i * n + i] += lambda;
                std::vector<double> rhs(n);
                for (std::size_t i = 0; i < n; ++i) rhs[i] = static_cast<double>(y[i]);
                const std::vector<double> expected = dense_solve(dense, rhs);

                for (std::size_t i = 0; i < n; ++i) {
                    worst = std::max(worst, std::abs(model.alpha[i] - expected[i]));
                }

                // Predictions are the dual inner product.
                std::vector<double> row(n);
                for (double& v : row) v = unif(rng);
                double score = 0.0;
                for (std::size_t i = 0; i < n; ++i) score += model.alpha[i] * row[i];
                const kernelml::Prediction pred = kernelml::ridge_predict(model, row);
                c.require(std::abs(pred.score - score) < 1e-12, "ridge score disagrees");
            }
        }
    }
    c.require(worst < 1e-8, "alpha deviates from dense solve by " + fmt(worst));

    // The worked 2x2 example: K = I, lambda = 1 -> alpha = [0.5, -0.5] exactly.
    kernel::GramMatrix eye;
    eye.n = 2;
    eye.values = {1.0, 0.0, 0.0, 1.0};
    const std::vector<int> y = {+1, -1};
    const kernelml::KernelRidgeModel model = kernelml::ridge_fit(eye, y, 1.0);
    c.require(model.alpha.size() == 2 && model.alpha[0] == 0.5 && model.alpha[1] == -0.5,
              "2x2 worked example alpha != [0.5, -0.5]");

    c.note("n<=6 brute-force agreement, worst " + fmt(worst) + "; 2x2 example exact");
    return c;
}

// ---------------------------------------------------------------------------
// criterion 7: feature pipeline

flowfeat::FlowRecord shifted(const flowfeat::FlowRecord& flow, double delta) {
    flowfeat::FlowRecord out = flow;
    out.t_first += delta;
    out.t_last += delta;
    for (double& t : out.packet_times) t += delta;
    return out;
}

Criterion criterion_features() {
    Criterion c;

    // Hand-computed fixture: 4 packets over [1, 3], 2500 bytes out / 1500 in.
    flowfeat::FlowRecord flow;
    flow.t_first = 1.0;
    flow.t_last = 3.0;
    flow.packet_times = {1.0, 1.5, 2.0, 2.5};
    flow.packets = 4;
    flow.bytes_fwd = 2500.0;
    flow.bytes_bwd = 1500.0;
    flow.bytes_total = 4000.0;
    const flowfeat::FeatureVector fv = flowfeat::extract(flow, 0.5);
    // Column order: duration, packet_rate, byte_rate, mean_packet_size,
    // iat_cv, dar, jitter, pmr.
    c.require(fv.values[0] == 2.0, "duration != 2");
    c.require(fv.values[1] == 2.0, "packet rate != 2");
    c.require(fv.values[2] == 2000.0, "byte rate != 2000");
    c.require(fv.values[3] == 1000.0, "mean packet size != 1000");
    c.require(fv.values[4] == 0.0, "IAT CV != 0 for uniform gaps");
    c.require(std::abs(fv.values[5] - 0.25) < 1e-9, "DAR != |2500-1500|/4000");
    c.require(fv.values[6] == 0.0, "jitter != 0 for uniform gaps");

    // Burst fixture: all 4 packets inside one 0.5 s window of a 2 s flow
    // gives peak rate 8 pkt/s against mean 2 pkt/s -> PMR 4.
    flowfeat::FlowRecord burst = flow;
    burst.packet_times = {1.0, 1.0625, 1.125, 1.1875};
    const flowfeat::FeatureVector bv = flowfeat::extract(burst, 0.5);
    c.require(std::abs(bv.values[7] - 4.0) < 1e-9, "burst PMR != 4");

    // DAR stays in [0, 1] across random flows.
    std::mt19937_64 rng(7777);
    std::uniform_real_distribution<double> bytes_dist(0.0, 5000.0);
    std::uniform_real_distribution<double> gap(0.01, 0.5);
    const auto random_flow = [&]() {
        flowfeat::FlowRecord f;
        f.t_first = 10.0;
        double t = 10.0;
        const int packets = 1 + static_cast<int>(rng() % 20);
        for (int p = 0; p < packets; ++p) {
            f.packet_times.push_back(t);
            t += gap(rng);
        }
        f.t_last = std::max(f.packet_times.back(), f.t_first + 0.25);
        f.packets = static_cast<std::uint64_t>(packets);
        f.bytes_fwd = bytes_dist(rng);
        f.bytes_bwd = bytes_dist(rng);
        f.bytes_total = f.bytes_fwd + f.bytes_bwd;
        return f;
    };
    for (int i = 0; i < 200; ++i) {
        const flowfeat::FeatureVector rv = flowfeat::extract(random_flow(), 0.1);
        c.require(rv.values[5] >= 0.0 && rv.values[5] <= 1.0, "DAR escaped [0, 1]");
    }

    // Time-shift invariance: identical features after sliding the clock.
    const flowfeat::FeatureVector sv = flowfeat::extract(shifted(flow, 32.0), 0.5);
    for (int col = 0; col < flowfeat::kNumFeatures; ++col) {
        c.require(sv.values[col] == fv.values[col], "time shift changed a feature");
    }

    // Standardized train matrix: per-column mean < 1e-9, std within 1e-9 of 1.
    std::vector<flowfeat::FeatureVector> logged;
    for (int i = 0; i < 120; ++i) {
        logged.push_back(flowfeat::log_transform(flowfeat::extract(random_flow(), 0.1)));
    }
    const flowfeat::Standardizer scaler = flowfeat::standardizer_fit(logged);
    std::vector<flowfeat::FeatureVector> standardized;
    for (const auto& lv : logged) standardized.push_back(flowfeat::standardize(lv, scaler));
    for (int col = 0; col < flowfeat::kNumFeatures; ++col) {
        double mean = 0.0;
        for (const auto& s : standardized) mean += s.values[col];
        mean /= static_cast<double>(standardized.size());
        double var = 0.0;
        for (const auto& s : standardized) var += (s.values[col] - mean) * (s.values[col] - mean);
        var /= static_cast<double>(standardized.size());
        c.require(std::abs(mean) < 1e-9, "standardized mean " + fmt(mean) + " in column " +
                                             std::to_string(col));
        c.require(std::abs(std::sqrt(var) - 1.0) <= 1e-9,
                  "standardized std " + fmt(std::sqrt(var)) + " in column " +
                      std::to_string(col));
    }

    // The harness fits its standardizer on the train split alone.
    bench::ExperimentConfig config;
    config.seed = 3;
    config.synth.counts = {{flowfeat::FlowClass::Normal, 100},
                           {flowfeat::FlowClass::Flooding, 50}};
    const bench::PreparedData data = bench::prepare(config);

    dataio::SynthConfig synth = config.synth;
    synth.seed = util::seed_mix(config.seed, util::fnv1a64("gen"));
    dataio::Dataset full = dataio::binarize(dataio::synth_generate(synth));
    const dataio::Split sp = dataio::split(full, config.split_ratio, config.split_seed);
    dataio::Dataset train_ds = dataio::subset(full, sp.train_indices, "split-train");
    train_ds = dataio::balance(train_ds, config.balance,
                               util::seed_mix(config.seed, util::fnv1a64("balance")));
    std::vector<flowfeat::FeatureVector> train_logged;
    for (const auto& rec : train_ds.records) {
        train_logged.push_back(
            flowfeat::log_transform(flowfeat::extract(rec, config.pmr_window)));
    }
    const flowfeat::Standardizer train_only = flowfeat::standardizer_fit(train_logged);
    for (int col = 0; col < flowfeat::kNumFeatures; ++col) {
        c.require(train_only.means[col] == data.scaler.means[col] &&
                      train_only.stds[col] == data.scaler.stds[col],
                  "harness standardizer was not fitted on the train split alone");
    }

    c.note("fixtures, DAR bounds, shift invariance, train-only standardization all hold");
    return c;
}

// ---------------------------------------------------------------------------
// criteria 8 + 9: qualitative end-to-end ordering (soft) and determinism

struct RowView {
    bool ok = false;
    double mcc = 0.0;
    double specificity = 0.0;
};

std::map<std::string, RowView> rows_of(const std::string& report_json) {
    std::map<std::string, RowView> out;
    const nlohmann::json doc = nlohmann::json::parse(report_json);
    for (const auto& row : doc.at("models")) {
        RowView v;
        v.ok = row.at("status") == "ok";
        if (v.ok) {
            v.mcc = row.at("metrics").at("mcc").get<double>();
            v.specificity = row.at("metrics").at("specificity").get<double>();
        }
        out[row.at("tag").get<std::string>()] = v;
    }
    return out;
}

void criteria_end_to_end(Criterion& c8, Criterion& c9, double& seconds8, double& seconds9) {
    bench::ExperimentConfig config = bench::default_config();
    const fs::path out_dir = fs::temp_directory_path() / "qids_acceptance_out";
    std::error_code ec;
    fs::remove_all(out_dir, ec);
    config.output_dir = out_dir.string();

    const auto t0 = Clock::now();
    bench::cmd_bench(config);
    const std::string csv_first = util::read_text_file(out_dir / "report.csv");
    const std::string json_first = util::read_text_file(out_dir / "report.json");
    seconds8 = std::chrono::duration<double>(Clock::now() - t0).count();

    const std::map<std::string, RowView> rows = rows_of(json_first);
    const auto need = [&](const char* tag) -> RowView {
        const auto it = rows.find(tag);
        if (it == rows.end() || !it->second.ok) {
            c8.require(false, std::string("model ") + tag + " missing or failed");
            return {};
        }
        return it->second;
    };
    const RowView allpos = need("allpos");
    const RowView qk = need("qkernel");
    const RowView qnn = need("qnn-6l");
    const RowView hybrid = need("hybrid-4l");

    if (c8.pass) {
        c8.require(qk.mcc - allpos.mcc >= 0.3, "quantum-kernel SVM MCC lead " +
                                                   fmt(qk.mcc - allpos.mcc) + " < 0.3");
        c8.require(hybrid.mcc - allpos.mcc >= 0.3,
                   "hybrid MCC lead " + fmt(hybrid.mcc - allpos.mcc) + " < 0.3");
        c8.require(hybrid.specificity > qnn.specificity,
                   "hybrid specificity " + fmt(hybrid.specificity) +
                       " does not exceed pure QNN's " + fmt(qnn.specificity));
        c8.note("MCC allpos " + fmt(allpos.mcc) + ", qkernel " + fmt(qk.mcc) + ", hybrid " +
                fmt(hybrid.mcc) + "; specificity hybrid " + fmt(hybrid.specificity) +
                " vs qnn-6l " + fmt(qnn.specificity));
    }

    // Criterion 9: the identical invocation must reproduce the CSV bytes.
    const auto t1 = Clock::now();
    bench::cmd_bench(config);
    seconds9 = std::chrono::duration<double>(Clock::now() - t1).count();
    const std::string csv_second = util::read_text_file(out_dir / "report.csv");
    c9.require(csv_first == csv_second, "report.csv differs between identical runs");
    c9.note("report.csv (" + std::to_string(csv_first.size()) +
            " bytes) byte-identical across two runs");
}

}  // namespace

int main() {
    std::printf("acceptance gate: 9 criteria, tolerances pinned in source\n");

    const auto timed = [](int index, const char* name, double budget_seconds,
                          const std::function<Criterion()>& fn) {
        const auto t0 = Clock::now();
        Criterion c = fn();
        const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
        c.require(elapsed < budget_seconds,
                  "runtime " + fmt(elapsed) + "s exceeds the " + fmt(budget_seconds) +
                      "s budget");
        report(index, name, c, elapsed, /*gated=*/true);
    };

    timed(1, "parameter-count identities", 1.0, criterion_param_counts);
    timed(2, "degenerate constant-positive identities", 1.0, criterion_degenerate);
    timed(3, "parameter-shift gradients vs finite differences", 30.0, criterion_gradients);
    timed(4, "fidelity-kernel suite", 60.0, criterion_kernel);
    timed(5, "statevector simulator suite", 30.0, criterion_simulator);
    timed(6, "kernel-ridge dense-oracle agreement", 5.0, criterion_ridge);
    timed(7, "flow-feature pipeline suite", 5.0, criterion_features);

    Criterion c8;
    Criterion c9;
    double seconds8 = 0.0;
    double seconds9 = 0.0;
    criteria_end_to_end(c8, c9, seconds8, seconds9);
    c8.require(seconds8 < 900.0, "first benchmark run exceeded the 15-minute budget");
    report(8, "qualitative end-to-end ordering", c8, seconds8, /*gated=*/false);
    c9.require(seconds9 < 900.0, "second benchmark run exceeded the 15-minute budget");
    report(9, "end-to-end determinism", c9, seconds9, /*gated=*/true);

    if (failures == 0) {
        std::printf("acceptance: all gated criteria passed (criterion 8 is reported above, "
                    "not gated)\n");
        return 0;
    }
    std::printf("acceptance: %d gated criterion(s) FAILED\n", failures);
    return 1;
}
