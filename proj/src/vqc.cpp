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

#include "qids/vqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qids/metrics.hpp"
#include "qids/util.hpp"

namespace qids::vqc {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::vector<double> uniform_init(std::mt19937_64& rng, std::size_t count) {
    std::uniform_real_distribution<double> dist(-0.1, 0.1);
    std::vector<double> v(count);
    for (double& x : v) x = dist(rng);
    return v;
}

encode::AnsatzSpec resolve_spec(int num_qubits, int layers,
                                const encode::AnsatzSpec* overrides) {
    encode::AnsatzSpec spec;
    if (overrides) spec = *overrides;
    spec.num_qubits = num_qubits;
    spec.layers = layers;
    return spec;
}

sim::StateVector run_model_circuit(const QnnModel& model, std::span<const double> x,
                                   std::span<const double> theta) {
    sim::Circuit circuit = encode::build_model(x, model.encoder, model.ansatz);
    circuit.bind(theta);
    sim::StateVector state(circuit.num_qubits());
    sim::run_circuit(circuit, state);
    return state;
}

std::vector<double> evaluate_observables(const QnnModel& model, const sim::StateVector& state,
                                         const EvalOptions& opts) {
    std::vector<double> values(model.observables.size());
    if (!opts.shots) {
        for (std::size_t c = 0; c < model.observables.size(); ++c) {
            values[c] = sim::expectation(state, model.observables[c]);
        }
    } else {
        // One histogram serves every (diagonal) observable.
        const sim::ShotHistogram hist = sim::sample_counts(state, *opts.shots, opts.seed);
        for (std::size_t c = 0; c < model.observables.size(); ++c) {
            values[c] = sim::expectation_from_counts(hist, model.observables[c]);
        }
    }
    return values;
}

std::size_t class_index(int label) { return label == +1 ? 1 : 0; }

struct FlatLayout {
    std::size_t theta = 0;
    std::size_t w = 0;
    std::size_t b = 0;
    std::size_t total() const { return theta + w + b; }
};

FlatLayout layout_of(const QnnModel& model) {
    FlatLayout l;
    l.theta = model.theta.size();
    if (model.head) {
        l.w = model.head->w.size();
        l.b = model.head->b.size();
    }
    return l;
}

std::vector<double> flatten_params(const QnnModel& model) {
    std::vector<double> flat = model.theta;
    if (model.head) {
        flat.insert(flat.end(), model.head->w.begin(), model.head->w.end());
        flat.insert(flat.end(), model.head->b.begin(), model.head->b.end());
    }
    return flat;
}

void unflatten_params(QnnModel& model, std::span<const double> flat) {
    const FlatLayout l = layout_of(model);
    std::copy_n(flat.begin(), l.theta, model.theta.begin());
    if (model.head) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(l.theta), l.w,
                    model.head->w.begin());
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(l.theta + l.w), l.b,
                    model.head->b.begin());
    }
}

std::vector<double> flatten_grads(const Gradients& g) {
    std::vector<double> flat = g.theta;
    flat.insert(flat.end(), g.w.begin(), g.w.end());
    flat.insert(flat.end(), g.b.begin(), g.b.end());
    return flat;
}

}  // namespace

QnnModel make_pure_qnn(int num_qubits, int layers, std::uint64_t init_seed,
                       const encode::EncoderConfig& encoder,
                       const encode::AnsatzSpec* ansatz_overrides) {
    QnnModel model;
    model.encoder = encoder;
    model.ansatz = resolve_spec(num_qubits, layers, ansatz_overrides);
    std::mt19937_64 rng(util::seed_mix(init_seed, util::fnv1a64("qnn-init")));
    model.theta = uniform_init(rng, model.ansatz.param_count());
    model.observables.push_back(sim::Observable::pauli_z(num_qubits, 0));
    return model;
}

QnnModel make_hybrid_qnn(int num_qubits, int layers, std::uint64_t init_seed,
                         const encode::EncoderConfig& encoder,
                         const encode::AnsatzSpec* ansatz_overrides) {
    QnnModel model;
    model.encoder = encoder;
    model.ansatz = resolve_spec(num_qubits, layers, ansatz_overrides);
    std::mt19937_64 rng(util::seed_mix(init_seed, util::fnv1a64("qnn-init")));
    model.theta = uniform_init(rng, model.ansatz.param_count());
    for (int q = 0; q < num_qubits; ++q) {
        model.observables.push_back(sim::Observable::pauli_z(num_qubits, q));
    }
    ClassicalHead head;
    head.outputs = 2;
    head.readouts = static_cast<std::size_t>(num_qubits);
    head.w = uniform_init(rng, head.outputs * head.readouts);
    head.b = uniform_init(rng, head.outputs);
    model.head = std::move(head);
    return model;
}

std::vector<double> readouts(const QnnModel& model, std::span<const double> x,
                             const EvalOptions& opts) {
    const sim::StateVector state = run_model_circuit(model, x, model.theta);
    return evaluate_observables(model, state, opts);
}

std::vector<double> qnn_forward(const QnnModel& model, std::span<const double> x,
                                const EvalOptions& opts) {
    std::vector<double> r = readouts(model, x, opts);
    if (!model.head) return r;
    const ClassicalHead& head = *model.head;
    if (r.size() != head.readouts) {
        throw std::invalid_argument("head readout count does not match observables");
    }
    std::vector<double> logits(head.outputs, 0.0);
    for (std::size_t j = 0; j < head.outputs; ++j) {
        double acc = head.b[j];
        for (std::size_t c = 0; c < head.readouts; ++c) {
            acc += head.w[j * head.readouts + c] * r[c];
        }
        logits[j] = acc;
    }
    return logits;
}

std::vector<double> decision_logits(const QnnModel& model, std::span<const double> x,
                                    const EvalOptions& opts) {
    if (model.head) return qnn_forward(model, x, opts);
    const std::vector<double> r = readouts(model, x, opts);
    return {-r[0], r[0]};
}

Prediction predict(const QnnModel& model, std::span<const double> x, const EvalOptions& opts) {
    const std::vector<double> logits = decision_logits(model, x, opts);
    const double score = logits[1] - logits[0];
    return {score, score >= 0.0 ? +1 : -1};
}

std::vector<double> readout_jacobian(const QnnModel& model, std::span<const double> x,
                                     std::size_t k, const EvalOptions& opts) {
    if (k >= model.theta.size()) {
        throw std::out_of_range("parameter index " + std::to_string(k) + " out of range");
    }
    std::vector<double> shifted = model.theta;

    shifted[k] = model.theta[k] + kHalfPi;
    const sim::StateVector plus_state = run_model_circuit(model, x, shifted);
    const std::vector<double> plus = evaluate_observables(
        model, plus_state, EvalOptions{opts.shots, util::seed_mix(opts.seed, 2 * k)});

    shifted[k] = model.theta[k] - kHalfPi;
    const sim::StateVector minus_state = run_model_circuit(model, x, shifted);
    const std::vector<double> minus = evaluate_observables(
        model, minus_state, EvalOptions{opts.shots, util::seed_mix(opts.seed, 2 * k + 1)});

    std::vector<double> jac(plus.size());
    for (std::size_t c = 0; c < jac.size(); ++c) {
        jac[c] = 0.5 * (plus[c] - minus[c]);
    }
    return jac;
}

double param_shift_grad(const QnnModel& model, std::span<const double> x, std::size_t k,
                        std::size_t obs_index, const EvalOptions& opts) {
    if (obs_index >= model.observables.size()) {
        throw std::out_of_range("observable index out of range");
    }
    return readout_jacobian(model, x, k, opts)[obs_index];
}

namespace {

double decay_term(const QnnModel& model, double weight_decay) {
    double sq = 0.0;
    for (double t : model.theta) sq += t * t;
    if (model.head) {
        for (double w : model.head->w) sq += w * w;
        for (double b : model.head->b) sq += b * b;
    }
    return 0.5 * weight_decay * sq;
}

}  // namespace

double loss(const QnnModel& model, const train::TrainSet& batch, double weight_decay,
            const EvalOptions& opts, std::uint64_t* clamps) {
    train::check_train_set(batch);
    double ce = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const EvalOptions sample_opts{opts.shots, util::seed_mix(opts.seed, i)};
        const std::vector<double> logits = decision_logits(model, batch.features[i], sample_opts);
        const std::vector<double> probs = train::softmax(logits);
        ce += train::cross_entropy(probs, class_index(batch.labels[i]), clamps);
    }
    return ce / static_cast<double>(batch.size()) + decay_term(model, weight_decay);
}

Gradients loss_gradient(const QnnModel& model, const train::TrainSet& batch, double weight_decay,
                        const EvalOptions& opts) {
    train::check_train_set(batch);
    const std::size_t p = model.theta.size();
    const std::size_t n = batch.size();

    Gradients g;
    g.theta.assign(p, 0.0);
    if (model.head) {
        g.w.assign(model.head->w.size(), 0.0);
        g.b.assign(model.head->b.size(), 0.0);
    }

    for (std::size_t i = 0; i < n; ++i) {
        // Disjoint seed streams per sample: 2k / 2k+1 feed the shifted pair
        // for parameter k, stream 2p feeds the unshifted forward pass.
        const std::uint64_t sample_seed = util::seed_mix(opts.seed, i);
        const EvalOptions fwd_opts{opts.shots, util::seed_mix(sample_seed, 2 * p)};

        const std::vector<double> r = readouts(model, batch.features[i], fwd_opts);
        std::vector<double> logits;
        if (model.head) {
            const ClassicalHead& head = *model.head;
            logits.assign(head.outputs, 0.0);
            for (std::size_t j = 0; j < head.outputs; ++j) {
                double acc = head.b[j];
                for (std::size_t c = 0; c < head.readouts; ++c) {
                    acc += head.w[j * head.readouts + c] * r[c];
                }
                logits[j] = acc;
            }
        } else {
            logits = {-r[0], r[0]};
        }
        const std::vector<double> probs = train::softmax(logits);
        const std::size_t y = class_index(batch.labels[i]);

        // delta_j = dL/dlogit_j for one sample of softmax cross-entropy.
        std::vector<double> delta(probs.size());
        for (std::size_t j = 0; j < probs.size(); ++j) {
            delta[j] = probs[j] - (j == y ? 1.0 : 0.0);
        }

        std::vector<double> dl_dr(r.size(), 0.0);
        if (model.head) {
            const ClassicalHead& head = *model.head;
            for (std::size_t j = 0; j < head.outputs; ++j) {
                for (std::size_t c = 0; c < head.readouts; ++c) {
                    dl_dr[c] += delta[j] * head.w[j * head.readouts + c];
                    g.w[j * head.readouts + c] += delta[j] * r[c];
                }
                g.b[j] += delta[j];
            }
        } else {
            dl_dr[0] = delta[1] - delta[0];  // logits are [-s, +s]
        }

        const EvalOptions shift_opts{opts.shots, sample_seed};
        for (std::size_t k = 0; k < p; ++k) {
            const std::vector<double> jac =
                readout_jacobian(model, batch.features[i], k, shift_opts);
            double acc = 0.0;
            for (std::size_t c = 0; c < jac.size(); ++c) acc += dl_dr[c] * jac[c];
            g.theta[k] += acc;
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < p; ++k) {
        g.theta[k] = g.theta[k] * inv_n + weight_decay * model.theta[k];
    }
    if (model.head) {
        for (std::size_t k = 0; k < g.w.size(); ++k) {
            g.w[k] = g.w[k] * inv_n + weight_decay * model.head->w[k];
        }
        for (std::size_t k = 0; k < g.b.size(); ++k) {
            g.b[k] = g.b[k] * inv_n + weight_decay * model.head->b[k];
        }
    }
    return g;
}

TrainResult train(const train::TrainSet& data, const QnnModel& model,
                  const train::TrainConfig& config) {
    train::check_train_set(data);
    train::check_train_config(config);

    TrainResult result;
    result.model = model;
    QnnModel& m = result.model;

    const FlatLayout layout = layout_of(m);
    std::vector<double> params = flatten_params(m);
    train::Adam adam(layout.total(), config.learning_rate, config.adam_beta1, config.adam_beta2,
                     config.adam_eps);

    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::mt19937_64 shuffle_rng(util::seed_mix(config.seed, static_cast<std::uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        const auto batch_size = static_cast<std::size_t>(config.batch_size);
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < n; start += batch_size, ++batch_index) {
            const std::size_t stop = std::min(start + batch_size, n);
            train::TrainSet batch;
            batch.features.reserve(stop - start);
            batch.labels.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                batch.features.push_back(data.features[order[i]]);
                batch.labels.push_back(data.labels[order[i]]);
            }

            EvalOptions opts;
            opts.shots = config.shots;
            opts.seed = util::seed_mix(config.seed, static_cast<std::uint64_t>(epoch),
                                       static_cast<std::uint64_t>(batch_index));
            const Gradients g = loss_gradient(m, batch, config.weight_decay, opts);
            const std::vector<double> flat_g = flatten_grads(g);
            for (double v : flat_g) {
                if (!std::isfinite(v)) {
                    throw NumericError("non-finite gradient at epoch " + std::to_string(epoch));
                }
            }
            adam.step(params, flat_g);
            unflatten_params(m, params);
        }

        // Epoch bookkeeping always uses exact expectations so the trace is
        // comparable across shot settings.
        const double epoch_loss = loss(m, data, config.weight_decay, {}, &result.clamp_events);
        if (!std::isfinite(epoch_loss)) {
            throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
        }
        std::vector<int> preds(n);
        for (std::size_t i = 0; i < n; ++i) {
            preds[i] = predict(m, data.features[i]).label;
        }
        const metrics::MetricsReport rep = metrics::metrics(metrics::confusion(preds, data.labels));
        result.trace.push_back({epoch, epoch_loss, rep.accuracy, rep.f1, rep.specificity,
                                rep.sensitivity});
    }
    return result;
}

std::string qnn_to_json(const QnnModel& model) {
    nlohmann::json j;
    j["kind"] = "qnn";
    j["encoder"] = {{"scale", model.encoder.scale},
                    {"depth", encode::encoder_depth_name(model.encoder.depth)}};
    j["ansatz"] = {{"num_qubits", model.ansatz.num_qubits},
                   {"layers", model.ansatz.layers},
                   {"entangler", encode::entangler_name(model.ansatz.entangler)},
                   {"reupload", model.ansatz.reupload}};
    j["theta"] = model.theta;
    nlohmann::json obs = nlohmann::json::array();
    for (const sim::Observable& o : model.observables) {
        nlohmann::json terms = nlohmann::json::array();
        for (const sim::PauliTerm& t : o.terms()) {
            terms.push_back({{"coeff", t.coeff}, {"paulis", t.paulis}});
        }
        obs.push_back(std::move(terms));
    }
    j["observables"] = std::move(obs);
    if (model.head) {
        j["head"] = {{"outputs", model.head->outputs},
                     {"readouts", model.head->readouts},
                     {"w", model.head->w},
                     {"b", model.head->b}};
    } else {
        j["head"] = nullptr;
    }
    return j.dump(2);
}

QnnModel qnn_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("kind", "") != "qnn") {
        throw ParseError("not a qnn model document");
    }
    try {
        QnnModel model;
        model.encoder.scale = j.at("encoder").at("scale").get<double>();
        model.encoder.depth =
            encode::encoder_depth_from_string(j.at("encoder").at("depth").get<std::string>());
        model.ansatz.num_qubits = j.at("ansatz").at("num_qubits").get<int>();
        model.ansatz.layers = j.at("ansatz").at("layers").get<int>();
        model.ansatz.entangler =
            encode::entangler_from_string(j.at("ansatz").at("entangler").get<std::string>());
        model.ansatz.reupload = j.at("ansatz").at("reupload").get<bool>();
        model.theta = j.at("theta").get<std::vector<double>>();
        if (model.theta.size() != model.ansatz.param_count()) {
            throw ParseError("qnn document theta length does not match its ansatz");
        }
        for (const auto& obs : j.at("observables")) {
            std::vector<sim::PauliTerm> terms;
            for (const auto& t : obs) {
                terms.push_back({t.at("coeff").get<double>(), t.at("paulis").get<std::string>()});
            }
            model.observables.emplace_back(model.ansatz.num_qubits, std::move(terms));
        }
        if (model.observables.empty()) {
            throw ParseError("qnn document has no observables");
        }
        if (!j.at("head").is_null()) {
            ClassicalHead head;
            head.outputs = j.at("head").at("outputs").get<std::size_t>();
            head.readouts = j.at("head").at("readouts").get<std::size_t>();
            head.w = j.at("head").at("w").get<std::vector<double>>();
            head.b = j.at("head").at("b").get<std::vector<double>>();
            if (head.w.size() != head.outputs * head.readouts || head.b.size() != head.outputs) {
                throw ParseError("qnn document head dimensions are inconsistent");
            }
            model.head = std::move(head);
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("qnn model document: ") + e.what());
    }
}

}  // namespace qids::vqc
