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

#include "qids/util.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

namespace qids::util {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return seed_mix(seed_mix(seed, a), b);
}

std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return seed_mix(seed_mix(seed, a, b), c);
}

int worker_count() {
    if (const char* env = std::getenv("QIDS_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v <= 256) return static_cast<int>(v);
    }
    return 1;
}

void parallel_chunks(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        fn(0, n);
        return;
    }
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    const std::size_t chunk = (n + w - 1) / w;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t begin = k * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw IoError("read failure on: " + path.string());
    return out.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open file for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failure on: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_metric(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace qids::util
