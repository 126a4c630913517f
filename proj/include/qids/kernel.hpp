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
#include <string>
#include <vector>

#include "qids/encode.hpp"

namespace qids::kernel {

enum class GramMode { Exact, Shots };

/// Symmetric matrix of pairwise fidelity-kernel values plus the metadata
/// needed to reproduce and audit it.
struct GramMatrix {
    std::size_t n = 0;
    std::vector<double> values;  // row-major n*n, symmetric
    GramMode mode = GramMode::Exact;
    std::uint64_t shots = 0;  // Shots mode only
    double jitter = 0.0;      // total diagonal jitter applied so far
    bool centered = false;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

/// Fidelity kernel |<phi(x)|phi(y)>|^2 via direct state overlap.
double kernel_exact(std::span<const double> x, std::span<const double> y,
                    const encode::EncoderConfig& config = {});

/// Shot estimate of the same kernel: prepare U_E(y), undo with U_E(x)^-1,
/// count how often all qubits read zero.
double kernel_shots(std::span<const double> x, std::span<const double> y, std::uint64_t shots,
                    std::uint64_t seed, const encode::EncoderConfig& config = {});

struct GramOptions {
    GramMode mode = GramMode::Exact;
    std::uint64_t shots = 1024;  // per pair, Shots mode only
    std::uint64_t seed = 0;      // per-pair seeds are derived from this
    encode::EncoderConfig encoder;
    int workers = 1;
};

/// Pairwise Gram matrix over a sample set; upper triangle computed, mirrored.
/// Exact mode pins the diagonal to 1. Worker count never changes the result.
GramMatrix gram(const std::vector<std::vector<double>>& samples, const GramOptions& options = {});

/// Adds jitter*I. Negative jitter requests the automatic minimal repair
/// max(0, -lambda_min + 1e-10), making the matrix PSD.
GramMatrix repair(const GramMatrix& k, double jitter);

/// Double centering K_c = H K H with H = I - ones/n; row sums become 0.
GramMatrix center(const GramMatrix& k);

double min_eigenvalue(const GramMatrix& k);

/// CSV round-trip: header "n,mode,jitter" (+shots, centered), then n rows.
std::string gram_to_csv(const GramMatrix& k);
GramMatrix gram_from_csv(const std::string& text);

}  // namespace qids::kernel
