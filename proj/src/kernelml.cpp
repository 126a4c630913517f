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

#include "qids/kernelml.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qids/util.hpp"

namespace qids::kernelml {

namespace {

void check_labels(const kernel::GramMatrix& k, std::span<const int> y) {
    if (k.n == 0 || k.values.size() != k.n * k.n) {
        throw std::invalid_argument("gram matrix storage does not match its declared size");
    }
    if (y.size() != k.n) {
        throw std::invalid_argument("label count " + std::to_string(y.size()) +
                                    " does not match gram size " + std::to_string(k.n));
    }
    for (int v : y) {
        if (v != 1 && v != -1) {
            throw std::invalid_argument("labels must be +1 or -1, got " + std::to_string(v));
        }
    }
}

}  // namespace

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("rbf arguments have different dimensions");
    }
    if (gamma <= 0.0) {
        throw std::invalid_argument("rbf gamma must be positive");
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

kernel::GramMatrix rbf_gram(const std::vector<std::vector<double>>& samples, double gamma) {
    const std::size_t n = samples.size();
    if (n == 0) {
        throw std::invalid_argument("rbf gram requires at least one sample");
    }
    kernel::GramMatrix k;
    k.n = n;
    k.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        k.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = rbf_kernel(samples[i], samples[j], gamma);
            k.at(i, j) = v;
            k.at(j, i) = v;
        }
    }
    return k;
}

std::vector<double> rbf_row(std::span<const double> query,
                            const std::vector<std::vector<double>>& train, double gamma) {
    std::vector<double> row(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        row[i] = rbf_kernel(query, train[i], gamma);
    }
    return row;
}

double rbf_gamma_auto(const std::vector<std::vector<double>>& samples) {
    if (samples.empty() || samples[0].empty()) {
        throw std::invalid_argument("gamma heuristic needs a non-empty sample set");
    }
    const std::size_t n = samples.size();
    const std::size_t d = samples[0].size();
    double mean_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (const auto& s : samples) mean += s[j];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& s : samples) {
            const double dv = s[j] - mean;
            var += dv * dv;
        }
        mean_var += var / static_cast<double>(n);
    }
    mean_var /= static_cast<double>(d);
    if (mean_var <= 0.0) {
        throw NumericError("gamma heuristic undefined: features have zero variance");
    }
    return 1.0 / (static_cast<double>(d) * mean_var);
}

KernelRidgeModel ridge_fit(const kernel::GramMatrix& k, std::span<const int> y, double lambda) {
    check_labels(k, y);
    if (lambda <= 0.0) {
        throw std::invalid_argument("ridge lambda must be positive");
    }
    const auto n = static_cast<Eigen::Index>(k.n);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            a(i, j) = k.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
        a(i, i) += lambda;
    }
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i) = static_cast<double>(y[static_cast<std::size_t>(i)]);

    // LDLT is square-root free: on diagonal systems (the worked 2x2 example
    // included) the solve reduces to exact divisions by the pivots.
    Eigen::VectorXd alpha;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() == Eigen::Success) {
        alpha = ldlt.solve(rhs);
    } else {
        alpha = a.colPivHouseholderQr().solve(rhs);
    }
    const double residual = (a * alpha - rhs).norm();
    if (!std::isfinite(residual) || residual > 1e-8) {
        throw NumericError("ridge system is singular or ill-conditioned (residual " +
                           std::to_string(residual) + "); repair the kernel matrix first");
    }

    KernelRidgeModel model;
    model.lambda = lambda;
    model.alpha.assign(alpha.data(), alpha.data() + alpha.size());
    return model;
}

Prediction ridge_predict(const KernelRidgeModel& model, std::span<const double> k_row) {
    if (k_row.size() != model.alpha.size()) {
        throw std::invalid_argument("kernel row length " + std::to_string(k_row.size()) +
                                    " does not match training size " +
                                    std::to_string(model.alpha.size()));
    }
    double score = 0.0;
    for (std::size_t i = 0; i < k_row.size(); ++i) score += k_row[i] * model.alpha[i];
    return {score, sign_label(score)};
}

SvmModel smo_fit(const kernel::GramMatrix& k, std::span<const int> y, const SmoOptions& options) {
    check_labels(k, y);
    if (options.c <= 0.0) {
        throw std::invalid_argument("svm C must be positive");
    }
    const std::size_t n = k.n;
    const bool has_pos = std::any_of(y.begin(), y.end(), [](int v) { return v == +1; });
    const bool has_neg = std::any_of(y.begin(), y.end(), [](int v) { return v == -1; });
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("svm training needs both classes present");
    }

    std::vector<double> alpha(n, 0.0);
    double b = 0.0;
    const double c = options.c;
    const double tol = options.tol;
    std::mt19937_64 rng(options.seed);

    auto decision = [&](std::size_t i) {
        double f = b;
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] != 0.0) f += alpha[j] * y[j] * k.at(j, i);
        }
        return f;
    };
    auto objective = [&]() {
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) obj += alpha[i];
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (alpha[j] == 0.0) continue;
                obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k.at(i, j);
            }
        }
        return obj;
    };

    SvmModel model;
    model.c_param = c;
    model.train_size = n;

    bool converged = false;
    std::size_t sweep = 0;
    for (; sweep < options.max_passes; ++sweep) {
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = decision(i) - y[i];
            const bool violates = (y[i] * ei < -tol && alpha[i] < c) ||
                                  (y[i] * ei > tol && alpha[i] > 0.0);
            if (!violates) continue;

            // Partner chosen uniformly at random among the other points
            // (modulo draw keeps the sequence platform-independent).
            std::size_t j = rng() % (n - 1);
            if (j >= i) ++j;
            const double ej = decision(j) - y[j];

            const double ai_old = alpha[i];
            const double aj_old = alpha[j];
            double lo, hi;
            if (y[i] != y[j]) {
                lo = std::max(0.0, aj_old - ai_old);
                hi = std::min(c, c + aj_old - ai_old);
            } else {
                lo = std::max(0.0, ai_old + aj_old - c);
                hi = std::min(c, ai_old + aj_old);
            }
            if (lo >= hi) continue;

            const double eta = 2.0 * k.at(i, j) - k.at(i, i) - k.at(j, j);
            if (eta >= 0.0) continue;

            double aj = aj_old - y[j] * (ei - ej) / eta;
            aj = std::clamp(aj, lo, hi);
            if (std::abs(aj - aj_old) < 1e-7) continue;
            const double ai = ai_old + y[i] * y[j] * (aj_old - aj);

            alpha[i] = ai;
            alpha[j] = aj;

            const double b1 = b - ei - y[i] * (ai - ai_old) * k.at(i, i) -
                              y[j] * (aj - aj_old) * k.at(i, j);
            const double b2 = b - ej - y[i] * (ai - ai_old) * k.at(i, j) -
                              y[j] * (aj - aj_old) * k.at(j, j);
            if (ai > 0.0 && ai < c) {
                b = b1;
            } else if (aj > 0.0 && aj < c) {
                b = b2;
            } else {
                b = 0.5 * (b1 + b2);
            }
            ++changed;
        }
        model.objective_trace.push_back(objective());
        if (changed == 0) {
            converged = true;
            ++sweep;
            break;
        }
    }
    model.converged = converged;
    model.sweeps = sweep;

    // Recompute the bias as the average over free support vectors; they sit
    // exactly on the margin, which pins b more reliably than the running
    // update. Falls back to the running value when every alpha is at a bound.
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0.0 && alpha[i] < c) {
            double f = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (alpha[j] != 0.0) f += alpha[j] * y[j] * k.at(j, i);
            }
            free_sum += y[i] - f;
            ++free_count;
        }
    }
    model.bias = free_count > 0 ? free_sum / static_cast<double>(free_count) : b;

    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0.0) {
            model.support_indices.push_back(i);
            model.dual_coefs.push_back(alpha[i] * y[i]);
        }
    }
    return model;
}

Prediction svm_predict(const SvmModel& model, std::span<const double> k_row) {
    if (k_row.size() != model.train_size) {
        throw std::invalid_argument("kernel row length " + std::to_string(k_row.size()) +
                                    " does not match training size " +
                                    std::to_string(model.train_size));
    }
    double score = model.bias;
    for (std::size_t s = 0; s < model.support_indices.size(); ++s) {
        score += model.dual_coefs[s] * k_row[model.support_indices[s]];
    }
    return {score, sign_label(score)};
}

std::string ridge_to_json(const KernelRidgeModel& model) {
    nlohmann::json j;
    j["kind"] = "kernel_ridge";
    j["lambda"] = model.lambda;
    j["alpha"] = model.alpha;
    return j.dump(2);
}

KernelRidgeModel ridge_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("kind", "") != "kernel_ridge") {
        throw ParseError("not a kernel_ridge model document");
    }
    try {
        KernelRidgeModel model;
        model.lambda = j.at("lambda").get<double>();
        model.alpha = j.at("alpha").get<std::vector<double>>();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("kernel_ridge model document: ") + e.what());
    }
}

std::string svm_to_json(const SvmModel& model) {
    nlohmann::json j;
    j["kind"] = "svm";
    j["c"] = model.c_param;
    j["bias"] = model.bias;
    j["train_size"] = model.train_size;
    j["converged"] = model.converged;
    j["sweeps"] = model.sweeps;
    j["support_indices"] = model.support_indices;
    j["dual_coefs"] = model.dual_coefs;
    return j.dump(2);
}

SvmModel svm_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("kind", "") != "svm") {
        throw ParseError("not an svm model document");
    }
    try {
        SvmModel model;
        model.c_param = j.at("c").get<double>();
        model.bias = j.at("bias").get<double>();
        model.train_size = j.at("train_size").get<std::size_t>();
        model.converged = j.at("converged").get<bool>();
        model.sweeps = j.at("sweeps").get<std::size_t>();
        model.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
        model.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
        if (model.dual_coefs.size() != model.support_indices.size()) {
            throw ParseError("svm model document has mismatched support arrays");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("svm model document: ") + e.what());
    }
}

}  // namespace qids::kernelml
