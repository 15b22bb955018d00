// Copyright 2026 The bosonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace bosonlab {

using Rng = std::mt19937_64;

namespace detail {

inline uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Combines integer keys into a single stream id. Experiments key their trials
/// by (family, index, ...) so that every work item owns an independent stream.
inline uint64_t stream_key(uint64_t a, uint64_t b) {
    uint64_t s = a * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
    uint64_t h = detail::splitmix64(s);
    s = h ^ (b + 0x9E3779B97F4A7C15ULL);
    return detail::splitmix64(s);
}

inline uint64_t stream_key(uint64_t a, uint64_t b, uint64_t c) {
    return stream_key(stream_key(a, b), c);
}

/// Deterministic generator for the pair (seed, stream_id). The 64-bit inputs are
/// expanded through splitmix64 into a seed sequence, so streams with adjacent ids
/// are decorrelated and the same pair always reproduces the same draws.
inline Rng make_stream(uint64_t seed, uint64_t stream_id) {
    uint64_t state = seed ^ (stream_id * 0xA24BAED4963EE407ULL);
    uint64_t mixed = stream_id;
    std::seed_seq seq{
        static_cast<uint32_t>(detail::splitmix64(state)), static_cast<uint32_t>(detail::splitmix64(state)),
        static_cast<uint32_t>(detail::splitmix64(mixed)), static_cast<uint32_t>(detail::splitmix64(mixed)),
        static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
        static_cast<uint32_t>(stream_id), static_cast<uint32_t>(stream_id >> 32)};
    return Rng(seq);
}

}  // namespace bosonlab
