// mimoq - uplink massive MIMO dynamic scheduling and power control simulator
// Copyright (C) 2026 the mimoq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mimoq
{

// Derives an independent substream seed from a master seed via splitmix64.
// Substreams (scenario geometry, per-user traffic, mobility, ...) must stay
// decoupled so that e.g. changing the traffic draw does not perturb the
// channel realization of the same run.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream)
{
    return std::mt19937_64(mix_seed(seed, stream));
}

// Uniform double in [0,1) with exactly 53 random bits; avoids the
// implementation-defined behavior of std::generate_canonical.
inline double uniform01(std::mt19937_64 &engine)
{
    return std::ldexp(static_cast<double>(engine() >> 11), -53);
}

// Stream identifiers for the simulator substreams
namespace stream
{
constexpr std::uint64_t positions = 1;
constexpr std::uint64_t shadowing = 2;
constexpr std::uint64_t mobility = 3;
constexpr std::uint64_t traffic_base = 1000; // + user index
} // namespace stream

} // namespace mimoq
