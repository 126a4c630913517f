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

#include "qids/train.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qids/util.hpp"

namespace qids::train {

void check_train_set(const TrainSet& data) {
    if (data.features.empty()) {
        throw std::invalid_argument("training set is empty");
    }
    if (data.features.size() != data.labels.size()) {
        throw std::invalid_argument("feature and label counts differ");
    }
    const std::size_t dim = data.features[0].size();
    for (const auto& f : data.features) {
        if (f.size() != dim) {
            throw std::invalid_argument("training features have inconsistent dimensions");
        }
    }
    for (int y : data.labels) {
        if (y != 1 && y != -1) {
            throw std::invalid_argument("labels must be +1 or -1, got " + std::to_string(y));
        }
    }
}

void check_train_config(const TrainConfig& config) {
    if (config.learning_rate <= 0.0) {
        throw std::invalid_argument("learning rate must be positive");
    }
    if (config.batch_size < 1) {
        throw std::invalid_argument("batch size must be at least 1");
    }
    if (config.epochs < 1) {
        throw std::invalid_argument("epoch count must be at least 1");
    }
    if (config.weight_decay < 0.0) {
        throw std::invalid_argument("weight decay must be non-negative");
    }
    if (config.shots && *config.shots < 1) {
        throw std::invalid_argument("shot count must be at least 1");
    }
}

Adam::Adam(std::size_t dim, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(dim, 0.0), v_(dim, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw std::invalid_argument("adam dimension mismatch");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < m_.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
        const double m_hat = m_[i] / bc1;
        const double v_hat = v_[i] / bc2;
        params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
}

std::string trace_to_csv(const TrainTrace& trace) {
    std::ostringstream out;
    out << "epoch,loss,accuracy,f1,specificity,sensitivity\n";
    for (const EpochStats& e : trace) {
        out << e.epoch << ',' << util::format_double(e.loss) << ','
            << util::format_metric(e.accuracy) << ',' << util::format_metric(e.f1) << ','
            << util::format_metric(e.specificity) << ',' << util::format_metric(e.sensitivity)
            << '\n';
    }
    return out.str();
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax of empty logit vector");
    }
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

double cross_entropy(std::span<const double> probs, std::size_t true_class, std::uint64_t* clamps) {
    if (true_class >= probs.size()) {
        throw std::invalid_argument("true class index out of range");
    }
    double p = probs[true_class];
    if (p < 1e-12) {
        p = 1e-12;
        if (clamps) ++*clamps;
    }
    return -std::log(p);
}

}  // namespace qids::train
