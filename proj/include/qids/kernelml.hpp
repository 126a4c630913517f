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
#include <string>
#include <vector>

#include "qids/kernel.hpp"

namespace qids::kernelml {

/// exp(-gamma * ||x - y||^2).
double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

/// Pairwise RBF Gram matrix (diagonal pinned to 1).
kernel::GramMatrix rbf_gram(const std::vector<std::vector<double>>& samples, double gamma);

/// Kernel value row between one query point and every training point.
std::vector<double> rbf_row(std::span<const double> query,
                            const std::vector<std::vector<double>>& train, double gamma);

/// Default bandwidth heuristic: 1 / (d * mean per-coordinate variance).
double rbf_gamma_auto(const std::vector<std::vector<double>>& samples);

/// Binary decision from a real score; ties at 0 go to the positive class.
inline int sign_label(double score) { return score >= 0.0 ? +1 : -1; }

/// Regularized kernel ridge: alpha = (K + lambda I)^-1 y, scored as k . alpha.
struct KernelRidgeModel {
    std::vector<double> alpha;
    double lambda = 0.0;
};

KernelRidgeModel ridge_fit(const kernel::GramMatrix& k, std::span<const int> y, double lambda);

struct Prediction {
    double score = 0.0;
    int label = +1;
};

Prediction ridge_predict(const KernelRidgeModel& model, std::span<const double> k_row);

/// Soft-margin SVM trained by sequential minimal optimization over a
/// precomputed kernel matrix. dual_coefs[s] = alpha_s * y_s for support
/// vector s; support_indices point into the training set the Gram matrix was
/// built from.
struct SvmModel {
    std::vector<double> dual_coefs;
    std::vector<std::size_t> support_indices;
    double bias = 0.0;
    double c_param = 1.0;
    std::size_t train_size = 0;
    bool converged = false;
    std::size_t sweeps = 0;
    /// Dual objective after each full sweep (non-decreasing).
    std::vector<double> objective_trace;
};

struct SmoOptions {
    double c = 1.0;
    double tol = 1e-3;
    std::size_t max_passes = 200;
    std::uint64_t seed = 0;
};

SvmModel smo_fit(const kernel::GramMatrix& k, std::span<const int> y, const SmoOptions& options = {});

/// Score for a kernel row against the full training set (length train_size).
Prediction svm_predict(const SvmModel& model, std::span<const double> k_row);

std::string ridge_to_json(const KernelRidgeModel& model);
KernelRidgeModel ridge_from_json(const std::string& text);
std::string svm_to_json(const SvmModel& model);
SvmModel svm_from_json(const std::string& text);

}  // namespace qids::kernelml
