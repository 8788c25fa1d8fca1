// SPDX-License-Identifier: Apache-2.0
//
// wow-uwb -- stochastic UWB channel simulator for hurricane conditions
// Copyright (C) 2026 the wow-uwb authors
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
// ------------------------------------------------------------------------

#ifndef WOWUWB_RNG_HPP
#define WOWUWB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace wowuwb {

// Counter-seeded xoshiro256++ stream. The standard library distributions are
// implementation-defined, so all transforms are spelled out here; identical
// (seed, stream, draw order) gives identical output on every platform.
//
// Streams are derived from (master seed, scan index, purpose) through a
// splitmix64 chain, so scans can be generated on any number of workers in any
// order without changing a single draw.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t scan_index, std::uint64_t purpose)
    {
        std::uint64_t x = master_seed;
        x = splitmix(x + 0x9E3779B97F4A7C15ULL * (scan_index + 1));
        x = splitmix(x + 0x9E3779B97F4A7C15ULL * (purpose + 1));
        for (auto &word : state_)
        {
            x += 0x9E3779B97F4A7C15ULL;
            word = splitmix(x);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
            state_[0] = 1; // all-zero state is the one forbidden xoshiro state
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [0, high).
    double uniform(double high) { return uniform() * high; }

    // Standard normal via Box-Muller, spare value cached.
    double normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Exponential with the given rate (mean 1/rate).
    double exponential(double rate)
    {
        return -std::log1p(-uniform()) / rate;
    }

  private:
    static std::uint64_t splitmix(std::uint64_t x)
    {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

    static std::uint64_t rotl(std::uint64_t x, int k)
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Fixed purpose ids; the set is append-only so existing outputs stay stable.
namespace rng_purpose {
constexpr std::uint64_t cluster_count = 1;
constexpr std::uint64_t cluster_arrivals = 2;
constexpr std::uint64_t ray_arrivals = 3;
constexpr std::uint64_t amplitudes = 4;
constexpr std::uint64_t phases = 5;
constexpr std::uint64_t pdp_jitter = 6;
constexpr std::uint64_t diffuse_power = 7;
constexpr std::uint64_t direct_power = 8;
constexpr std::uint64_t large_scale = 9;
constexpr std::uint64_t rain = 10;
constexpr std::uint64_t arrival_jitter = 11;
} // namespace rng_purpose

} // namespace wowuwb

#endif
