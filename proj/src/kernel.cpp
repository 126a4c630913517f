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

#include "qids/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "qids/util.hpp"

namespace qids::kernel {

namespace {

sim::StateVector encoded_state(std::span<const double> x, const encode::EncoderConfig& config) {
    sim::Circuit c = encode::angle_encode(x, config);
    sim::StateVector s(c.num_qubits());
    sim::run_circuit(c, s);
    return s;
}

void check_square(const GramMatrix& k) {
    if (k.n == 0 || k.values.size() != k.n * k.n) {
        throw std::invalid_argument("gram matrix storage does not match its declared size");
    }
}

Eigen::MatrixXd to_eigen(const GramMatrix& k) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(k.n), static_cast<Eigen::Index>(k.n));
    for (std::size_t i = 0; i < k.n; ++i) {
        for (std::size_t j = 0; j < k.n; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k.at(i, j);
        }
    }
    return m;
}

}  // namespace

double kernel_exact(std::span<const double> x, std::span<const double> y,
                    const encode::EncoderConfig& config) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("kernel arguments have different dimensions");
    }
    const sim::StateVector sx = encoded_state(x, config);
    const sim::StateVector sy = encoded_state(y, config);
    return sim::overlap_sq(sx, sy);
}

double kernel_shots(std::span<const double> x, std::span<const double> y, std::uint64_t shots,
                    std::uint64_t seed, const encode::EncoderConfig& config) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("kernel arguments have different dimensions");
    }
    // Compute-uncompute: prepare phi(y), undo the phi(x) preparation; the
    // probability of reading all zeros is |<phi(x)|phi(y)>|^2.
    sim::Circuit circuit = encode::angle_encode(y, config);
    circuit.append(encode::angle_encode(x, config).inverted());
    sim::StateVector state(circuit.num_qubits());
    sim::run_circuit(circuit, state);
    const sim::ShotHistogram hist = sim::sample_counts(state, shots, seed);
    return hist.frequency(0);
}

GramMatrix gram(const std::vector<std::vector<double>>& samples, const GramOptions& options) {
    const std::size_t n = samples.size();
    if (n == 0) {
        throw std::invalid_argument("gram requires at least one sample");
    }
    const std::size_t dim = samples[0].size();
    for (const auto& s : samples) {
        if (s.size() != dim) {
            throw std::invalid_argument("samples have inconsistent dimensions");
        }
    }

    GramMatrix k;
    k.n = n;
    k.values.assign(n * n, 0.0);
    k.mode = options.mode;
    k.shots = options.mode == GramMode::Shots ? options.shots : 0;

    // The diagonal is 1 by definition in both modes (a state always uncomputes
    // itself), so it is pinned rather than simulated.
    for (std::size_t i = 0; i < n; ++i) k.at(i, i) = 1.0;

    // Strict upper triangle, linearized so chunks can fan out over workers.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }

    util::parallel_chunks(pairs.size(), options.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto [i, j] = pairs[p];
            double v;
            if (options.mode == GramMode::Exact) {
                v = kernel_exact(samples[i], samples[j], options.encoder);
            } else {
                // Seed depends only on the cell, never on scheduling.
                const std::uint64_t pair_seed = util::seed_mix(options.seed, i * n + j);
                v = kernel_shots(samples[i], samples[j], options.shots, pair_seed, options.encoder);
            }
            k.at(i, j) = v;
            k.at(j, i) = v;
        }
    });
    return k;
}

GramMatrix repair(const GramMatrix& k, double jitter) {
    check_square(k);
    double eps = jitter;
    if (eps < 0.0) {
        const double lmin = min_eigenvalue(k);
        eps = std::max(0.0, -lmin + 1e-10);
    }
    GramMatrix out = k;
    for (std::size_t i = 0; i < out.n; ++i) out.at(i, i) += eps;
    out.jitter += eps;
    return out;
}

GramMatrix center(const GramMatrix& k) {
    check_square(k);
    const std::size_t n = k.n;
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> row_mean(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += k.at(i, j);
        row_mean[i] = acc * inv_n;
        total += acc;
    }
    const double grand_mean = total * inv_n * inv_n;

    GramMatrix out = k;
    out.centered = true;
    // K_c[i][j] = K[i][j] - rowmean[i] - rowmean[j] + grandmean; computed on
    // the upper triangle and mirrored so symmetry is exact.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = k.at(i, j) - row_mean[i] - row_mean[j] + grand_mean;
            out.at(i, j) = v;
            out.at(j, i) = v;
        }
    }
    return out;
}

double min_eigenvalue(const GramMatrix& k) {
    check_square(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(k),
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue computation failed on gram matrix");
    }
    return solver.eigenvalues().minCoeff();
}

std::string gram_to_csv(const GramMatrix& k) {
    check_square(k);
    std::ostringstream out;
    out << "n,mode,jitter\n";
    out << k.n << ',';
    if (k.mode == GramMode::Exact) {
        out << "exact";
    } else {
        out << "shots:" << k.shots;
    }
    out << ',' << util::format_double(k.jitter) << '\n';
    for (std::size_t i = 0; i < k.n; ++i) {
        for (std::size_t j = 0; j < k.n; ++j) {
            if (j) out << ',';
            out << util::format_double(k.at(i, j));
        }
        out << '\n';
    }
    return out.str();
}

GramMatrix gram_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "n,mode,jitter") {
        throw ParseError("gram csv: missing \"n,mode,jitter\" header");
    }
    if (!std::getline(in, line)) {
        throw ParseError("gram csv: missing metadata row");
    }
    std::istringstream meta(line);
    std::string n_str, mode_str, jitter_str;
    if (!std::getline(meta, n_str, ',') || !std::getline(meta, mode_str, ',') ||
        !std::getline(meta, jitter_str, ',')) {
        throw ParseError("gram csv: malformed metadata row \"" + line + "\"");
    }

    GramMatrix k;
    try {
        k.n = std::stoul(n_str);
        k.jitter = std::stod(jitter_str);
    } catch (const std::exception&) {
        throw ParseError("gram csv: malformed metadata row \"" + line + "\"");
    }
    if (mode_str == "exact") {
        k.mode = GramMode::Exact;
    } else if (mode_str.rfind("shots:", 0) == 0) {
        k.mode = GramMode::Shots;
        try {
            k.shots = std::stoull(mode_str.substr(6));
        } catch (const std::exception&) {
            throw ParseError("gram csv: malformed shots count in \"" + mode_str + "\"");
        }
    } else {
        throw ParseError("gram csv: unknown mode \"" + mode_str + "\"");
    }
    if (k.n == 0) {
        throw ParseError("gram csv: size must be positive");
    }

    k.values.reserve(k.n * k.n);
    for (std::size_t i = 0; i < k.n; ++i) {
        if (!std::getline(in, line)) {
            throw ParseError("gram csv: expected " + std::to_string(k.n) + " rows, got " +
                             std::to_string(i));
        }
        std::istringstream row(line);
        std::string cell;
        std::size_t j = 0;
        while (std::getline(row, cell, ',')) {
            try {
                k.values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("gram csv: bad numeric cell \"" + cell + "\"");
            }
            ++j;
        }
        if (j != k.n) {
            throw ParseError("gram csv: row " + std::to_string(i) + " has " + std::to_string(j) +
                             " cells, expected " + std::to_string(k.n));
        }
    }
    return k;
}

}  // namespace qids::kernel
