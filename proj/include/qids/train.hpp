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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qids::train {

/// Features (standardized) with +1/-1 labels.
struct TrainSet {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;

    std::size_t size() const { return features.size(); }
};

void check_train_set(const TrainSet& data);

struct TrainConfig {
    double learning_rate = 0.01;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int epochs = 100;
    int batch_size = 32;
    std::uint64_t seed = 0;
    double weight_decay = 1e-4;
    /// Absent => exact expectations; present => per-evaluation shot sampling.
    std::optional<std::uint64_t> shots;
};

void check_train_config(const TrainConfig& config);

/// Adam over a flat parameter vector.
class Adam {
  public:
    Adam(std::size_t dim, double lr, double beta1, double beta2, double eps);

    void step(std::span<double> params, std::span<const double> grads);
    std::uint64_t steps() const { return t_; }

  private:
    double lr_, beta1_, beta2_, eps_;
    std::uint64_t t_ = 0;
    std::vector<double> m_, v_;
};

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double specificity = 0.0;
    double sensitivity = 0.0;
};

using TrainTrace = std::vector<EpochStats>;

/// CSV columns: epoch,loss,accuracy,f1,specificity,sensitivity.
std::string trace_to_csv(const TrainTrace& trace);

/// Numerically safe softmax (max-shifted).
std::vector<double> softmax(std::span<const double> logits);

/// -log of the predicted probability for the true class, clamped at 1e-12;
/// increments *clamps when the clamp fires.
double cross_entropy(std::span<const double> probs, std::size_t true_class,
                     std::uint64_t* clamps = nullptr);

}  // namespace qids::train
