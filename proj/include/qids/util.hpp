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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qids {

/// Error raised when an input file cannot be read or an output cannot be written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Error raised when a config, CSV, or JSON document is malformed.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Error raised when a numerical procedure cannot produce a trustworthy result
/// (singular solve, non-finite loss, degenerate statistics).
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace util {

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t splitmix64(std::uint64_t x);

/// Combine a master seed with a stream identifier into an independent stream seed.
std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t stream);
std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b);
std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// Worker count for embarrassingly parallel loops: QIDS_WORKERS env var,
/// falling back to 1. Results must not depend on this value.
int worker_count();

/// Run fn(begin, end) over [0, n) split into contiguous chunks, one per worker.
/// With a single worker this degenerates to a plain call on [0, n).
void parallel_chunks(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& fn);

std::string read_text_file(const std::filesystem::path& path);

/// Write via a temp file in the same directory, then rename into place.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal form that round-trips a double ("%.17g" with trailing cleanup).
std::string format_double(double v);

/// Fixed-point form used in report tables ("%.6f").
std::string format_metric(double v);

}  // namespace util
}  // namespace qids
