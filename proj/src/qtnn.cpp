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

#include "qids/qtnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qids/metrics.hpp"
#include "qids/util.hpp"

namespace qids::qtnn {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_arch(const QtArch& arch) {
    if (arch.input_dim < 1 || arch.hidden < 1 || arch.output_dim < 1) {
        throw std::invalid_argument("mlp dimensions must be positive");
    }
    if (arch.circuit_layers < 1) {
        throw std::invalid_argument("generator needs at least one circuit layer");
    }
    if (arch.num_qubits() > sim::kMaxQubits) {
        throw std::invalid_argument("mlp needs " + std::to_string(arch.mlp_params()) +
                                    " parameters; generator would exceed " +
                                    std::to_string(sim::kMaxQubits) + " qubits");
    }
}

/// Dense probability vector, exact or shot-estimated, for bound angles.
std::vector<double> probs_of(std::span<const double> theta, const QtArch& arch,
                             std::optional<std::uint64_t> shots, std::uint64_t seed) {
    encode::AnsatzSpec spec;
    spec.num_qubits = arch.num_qubits();
    spec.layers = arch.circuit_layers;
    spec.entangler = arch.entangler;
    const sim::Circuit circuit = encode::build_ansatz(spec, theta);
    sim::StateVector state(spec.num_qubits);
    sim::run_circuit(circuit, state);

    std::vector<double> probs(state.dim());
    if (!shots) {
        for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = state.prob(i);
    } else {
        const sim::ShotHistogram hist = sim::sample_counts(state, *shots, seed);
        for (const auto& [basis, count] : hist.counts) {
            probs[basis] = static_cast<double>(count) / static_cast<double>(hist.shots);
        }
    }
    return probs;
}

std::size_t class_index(int label) { return label == +1 ? 1 : 0; }

struct MlpViews {
    std::span<const double> w1, b1, w2, b2, w3, b3;
};

MlpViews view_weights(std::span<const double> weights, const QtArch& arch) {
    const auto in = static_cast<std::size_t>(arch.input_dim);
    const auto h = static_cast<std::size_t>(arch.hidden);
    const auto out = static_cast<std::size_t>(arch.output_dim);
    if (weights.size() != arch.mlp_params()) {
        throw std::invalid_argument("weight vector length " + std::to_string(weights.size()) +
                                    " does not match architecture (" +
                                    std::to_string(arch.mlp_params()) + ")");
    }
    MlpViews v;
    std::size_t ofs = 0;
    v.w1 = weights.subspan(ofs, h * in); ofs += h * in;
    v.b1 = weights.subspan(ofs, h); ofs += h;
    v.w2 = weights.subspan(ofs, h * h); ofs += h * h;
    v.b2 = weights.subspan(ofs, h); ofs += h;
    v.w3 = weights.subspan(ofs, out * h); ofs += out * h;
    v.b3 = weights.subspan(ofs, out);
    return v;
}

struct ForwardCache {
    std::vector<double> h1, h2, logits;
};

ForwardCache mlp_forward_cached(std::span<const double> x, const MlpViews& v, const QtArch& arch) {
    const auto in = static_cast<std::size_t>(arch.input_dim);
    const auto h = static_cast<std::size_t>(arch.hidden);
    const auto out = static_cast<std::size_t>(arch.output_dim);
    if (x.size() != in) {
        throw std::invalid_argument("input dimension " + std::to_string(x.size()) +
                                    " does not match architecture (" + std::to_string(in) + ")");
    }
    ForwardCache c;
    c.h1.resize(h);
    for (std::size_t r = 0; r < h; ++r) {
        double acc = v.b1[r];
        for (std::size_t j = 0; j < in; ++j) acc += v.w1[r * in + j] * x[j];
        c.h1[r] = std::tanh(acc);
    }
    c.h2.resize(h);
    for (std::size_t r = 0; r < h; ++r) {
        double acc = v.b2[r];
        for (std::size_t j = 0; j < h; ++j) acc += v.w2[r * h + j] * c.h1[j];
        c.h2[r] = std::tanh(acc);
    }
    c.logits.resize(out);
    for (std::size_t r = 0; r < out; ++r) {
        double acc = v.b3[r];
        for (std::size_t j = 0; j < h; ++j) acc += v.w3[r * h + j] * c.h2[j];
        c.logits[r] = acc;
    }
    return c;
}

/// Accumulates dL/dweights for one sample into grad (same layout as weights).
void mlp_backprop(std::span<const double> x, const MlpViews& v, const ForwardCache& c,
                  std::span<const double> delta_logits, const QtArch& arch,
                  std::span<double> grad) {
    const auto in = static_cast<std::size_t>(arch.input_dim);
    const auto h = static_cast<std::size_t>(arch.hidden);
    const auto out = static_cast<std::size_t>(arch.output_dim);

    std::size_t ofs_w1 = 0;
    std::size_t ofs_b1 = h * in;
    std::size_t ofs_w2 = ofs_b1 + h;
    std::size_t ofs_b2 = ofs_w2 + h * h;
    std::size_t ofs_w3 = ofs_b2 + h;
    std::size_t ofs_b3 = ofs_w3 + out * h;

    std::vector<double> dz2(h, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
        for (std::size_t j = 0; j < h; ++j) {
            grad[ofs_w3 + r * h + j] += delta_logits[r] * c.h2[j];
            dz2[j] += delta_logits[r] * v.w3[r * h + j];
        }
        grad[ofs_b3 + r] += delta_logits[r];
    }
    for (std::size_t j = 0; j < h; ++j) dz2[j] *= 1.0 - c.h2[j] * c.h2[j];

    std::vector<double> dz1(h, 0.0);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t j = 0; j < h; ++j) {
            grad[ofs_w2 + r * h + j] += dz2[r] * c.h1[j];
            dz1[j] += dz2[r] * v.w2[r * h + j];
        }
        grad[ofs_b2 + r] += dz2[r];
    }
    for (std::size_t j = 0; j < h; ++j) dz1[j] *= 1.0 - c.h1[j] * c.h1[j];

    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t j = 0; j < in; ++j) {
            grad[ofs_w1 + r * in + j] += dz1[r] * x[j];
        }
        grad[ofs_b1 + r] += dz1[r];
    }
}

std::vector<double> qt_loss_gradient_impl(const QtnnModel& model, const train::TrainSet& batch,
                                          double weight_decay,
                                          std::optional<std::uint64_t> shots, std::uint64_t seed) {
    train::check_train_set(batch);
    check_arch(model.arch);
    const std::size_t p = model.theta.size();
    const std::size_t m = model.arch.mlp_params();
    const std::size_t n = batch.size();

    const std::vector<double> probs =
        probs_of(model.theta, model.arch, shots, util::seed_mix(seed, 2 * p));
    const std::vector<double> weights = map_weights(probs, model.arch, model.map);
    const MlpViews views = view_weights(weights, model.arch);

    // dL/dw, averaged over the batch, by plain MLP backprop.
    std::vector<double> dl_dw(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const ForwardCache cache = mlp_forward_cached(batch.features[i], views, model.arch);
        const std::vector<double> pr = train::softmax(cache.logits);
        std::vector<double> delta(pr.size());
        const std::size_t y = class_index(batch.labels[i]);
        for (std::size_t j = 0; j < pr.size(); ++j) {
            delta[j] = pr[j] - (j == y ? 1.0 : 0.0);
        }
        mlp_backprop(batch.features[i], views, cache, delta, model.arch, dl_dw);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double& g : dl_dw) g *= inv_n;

    // Chain through w_i = beta * (2^N p_i - 1) and the shift rule on p(theta).
    // One +-pi/2 pair per angle serves every weight index at once.
    const double scale = model.map.beta * static_cast<double>(probs.size());
    std::vector<double> grad(p, 0.0);
    std::vector<double> shifted = model.theta;
    for (std::size_t k = 0; k < p; ++k) {
        shifted[k] = model.theta[k] + kHalfPi;
        const std::vector<double> plus =
            probs_of(shifted, model.arch, shots, util::seed_mix(seed, 2 * k));
        shifted[k] = model.theta[k] - kHalfPi;
        const std::vector<double> minus =
            probs_of(shifted, model.arch, shots, util::seed_mix(seed, 2 * k + 1));
        shifted[k] = model.theta[k];

        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            acc += dl_dw[i] * 0.5 * (plus[i] - minus[i]);
        }
        grad[k] = scale * acc + weight_decay * model.theta[k];
    }
    return grad;
}

}  // namespace

std::size_t QtArch::mlp_params() const {
    const auto in = static_cast<std::size_t>(input_dim);
    const auto h = static_cast<std::size_t>(hidden);
    const auto out = static_cast<std::size_t>(output_dim);
    return (in * h + h) + (h * h + h) + (out * h + out);
}

int QtArch::num_qubits() const {
    const std::size_t m = mlp_params();
    if (m < 2) return 1;
    return static_cast<int>(std::bit_width(m - 1));
}

std::size_t QtArch::quantum_params() const {
    return static_cast<std::size_t>(num_qubits()) * static_cast<std::size_t>(circuit_layers);
}

std::vector<double> generate_probs(std::span<const double> theta, int num_qubits, int layers,
                                   encode::Entangler entangler) {
    encode::AnsatzSpec spec;
    spec.num_qubits = num_qubits;
    spec.layers = layers;
    spec.entangler = entangler;
    const sim::Circuit circuit = encode::build_ansatz(spec, theta);
    sim::StateVector state(num_qubits);
    sim::run_circuit(circuit, state);
    std::vector<double> probs(state.dim());
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = state.prob(i);
    return probs;
}

std::vector<double> map_weights(std::span<const double> probs, const QtArch& arch,
                                const WeightMap& map) {
    const std::size_t m = arch.mlp_params();
    if (probs.size() < m) {
        throw std::invalid_argument("probability vector holds " + std::to_string(probs.size()) +
                                    " entries, architecture needs " + std::to_string(m));
    }
    const double scale = static_cast<double>(probs.size());
    std::vector<double> weights(m);
    for (std::size_t i = 0; i < m; ++i) {
        weights[i] = map.beta * (scale * probs[i] - 1.0);
    }
    return weights;
}

std::vector<double> mlp_forward(std::span<const double> x, std::span<const double> weights,
                                const QtArch& arch) {
    const MlpViews v = view_weights(weights, arch);
    return mlp_forward_cached(x, v, arch).logits;
}

QtnnModel make_qtnn(const QtArch& arch, std::uint64_t init_seed, const WeightMap& map) {
    check_arch(arch);
    QtnnModel model;
    model.arch = arch;
    model.map = map;
    std::mt19937_64 rng(util::seed_mix(init_seed, util::fnv1a64("qtnn-init")));
    std::uniform_real_distribution<double> dist(-0.1, 0.1);
    model.theta.resize(arch.quantum_params());
    for (double& t : model.theta) t = dist(rng);
    return model;
}

std::vector<double> qt_logits(const QtnnModel& model, std::span<const double> x) {
    const std::vector<double> probs = probs_of(model.theta, model.arch, {}, 0);
    const std::vector<double> weights = map_weights(probs, model.arch, model.map);
    return mlp_forward(x, weights, model.arch);
}

Prediction qt_predict(const QtnnModel& model, std::span<const double> x) {
    const std::vector<double> logits = qt_logits(model, x);
    const double score = logits[1] - logits[0];
    return {score, score >= 0.0 ? +1 : -1};
}

double qt_loss(const QtnnModel& model, const train::TrainSet& batch, double weight_decay,
               std::uint64_t* clamps) {
    train::check_train_set(batch);
    const std::vector<double> probs = probs_of(model.theta, model.arch, {}, 0);
    const std::vector<double> weights = map_weights(probs, model.arch, model.map);
    const MlpViews views = view_weights(weights, model.arch);

    double ce = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const ForwardCache cache = mlp_forward_cached(batch.features[i], views, model.arch);
        const std::vector<double> pr = train::softmax(cache.logits);
        ce += train::cross_entropy(pr, class_index(batch.labels[i]), clamps);
    }
    double sq = 0.0;
    for (double t : model.theta) sq += t * t;
    return ce / static_cast<double>(batch.size()) + 0.5 * weight_decay * sq;
}

std::vector<double> qt_loss_gradient(const QtnnModel& model, const train::TrainSet& batch,
                                     double weight_decay) {
    return qt_loss_gradient_impl(model, batch, weight_decay, {}, 0);
}

TrainResult qt_train(const train::TrainSet& data, const QtnnModel& model,
                     const train::TrainConfig& config) {
    train::check_train_set(data);
    train::check_train_config(config);
    check_arch(model.arch);

    TrainResult result;
    result.model = model;
    QtnnModel& m = result.model;

    train::Adam adam(m.theta.size(), config.learning_rate, config.adam_beta1, config.adam_beta2,
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
            for (std::size_t i = start; i < stop; ++i) {
                batch.features.push_back(data.features[order[i]]);
                batch.labels.push_back(data.labels[order[i]]);
            }
            const std::uint64_t seed = util::seed_mix(
                config.seed, static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(batch_index));
            const std::vector<double> grad =
                qt_loss_gradient_impl(m, batch, config.weight_decay, config.shots, seed);
            for (double v : grad) {
                if (!std::isfinite(v)) {
                    throw NumericError("non-finite gradient at epoch " + std::to_string(epoch));
                }
            }
            adam.step(m.theta, grad);
        }

        const double epoch_loss = qt_loss(m, data, config.weight_decay, &result.clamp_events);
        if (!std::isfinite(epoch_loss)) {
            throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
        }
        std::vector<int> preds(n);
        const std::vector<double> probs = probs_of(m.theta, m.arch, {}, 0);
        const std::vector<double> weights = map_weights(probs, m.arch, m.map);
        const MlpViews views = view_weights(weights, m.arch);
        for (std::size_t i = 0; i < n; ++i) {
            const ForwardCache cache = mlp_forward_cached(data.features[i], views, m.arch);
            const double score = cache.logits[1] - cache.logits[0];
            preds[i] = score >= 0.0 ? +1 : -1;
        }
        const metrics::MetricsReport rep = metrics::metrics(metrics::confusion(preds, data.labels));
        result.trace.push_back({epoch, epoch_loss, rep.accuracy, rep.f1, rep.specificity,
                                rep.sensitivity});
    }
    return result;
}

std::string qtnn_to_json(const QtnnModel& model) {
    nlohmann::json j;
    j["kind"] = "qtnn";
    j["arch"] = {{"input_dim", model.arch.input_dim},
                 {"hidden", model.arch.hidden},
                 {"output_dim", model.arch.output_dim},
                 {"circuit_layers", model.arch.circuit_layers},
                 {"entangler", encode::entangler_name(model.arch.entangler)}};
    j["beta"] = model.map.beta;
    j["theta"] = model.theta;
    return j.dump(2);
}

QtnnModel qtnn_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("kind", "") != "qtnn") {
        throw ParseError("not a qtnn model document");
    }
    try {
        QtnnModel model;
        model.arch.input_dim = j.at("arch").at("input_dim").get<int>();
        model.arch.hidden = j.at("arch").at("hidden").get<int>();
        model.arch.output_dim = j.at("arch").at("output_dim").get<int>();
        model.arch.circuit_layers = j.at("arch").at("circuit_layers").get<int>();
        model.arch.entangler =
            encode::entangler_from_string(j.at("arch").at("entangler").get<std::string>());
        model.map.beta = j.at("beta").get<double>();
        model.theta = j.at("theta").get<std::vector<double>>();
        check_arch(model.arch);
        if (model.theta.size() != model.arch.quantum_params()) {
            throw ParseError("qtnn document theta length does not match its architecture");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("qtnn model document: ") + e.what());
    }
}

std::string weights_to_csv(std::span<const double> weights) {
    std::string out = "weight\n";
    for (double w : weights) {
        out += util::format_double(w);
        out += '\n';
    }
    return out;
}

}  // namespace qids::qtnn
