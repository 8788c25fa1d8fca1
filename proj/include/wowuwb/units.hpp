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

#ifndef WOWUWB_UNITS_HPP
#define WOWUWB_UNITS_HPP

#include <cmath>

namespace wowuwb {

// Repo-wide dB conventions:
//   power_dB     = 10 * log10(power_linear)
//   a dB sigma on an amplitude maps to natural-log std  sigma_dB * ln(10)/20
//   a dB sigma on a power    maps to natural-log std  sigma_dB * ln(10)/10

constexpr double kLn10 = 2.302585092994045684;

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double p) { return 10.0 * std::log10(p); }
inline double db_amp_to_log_std(double db) { return db * (kLn10 / 20.0); }
inline double db_pow_to_log_std(double db) { return db * (kLn10 / 10.0); }

// Delay grid: 100 ns scan sampled at 61 ps.
constexpr double kScanDurationNs = 100.0;
constexpr double kBinWidthNs = 0.061;
constexpr int kScanBins = 1639; // floor(100 / 0.061)

inline int delay_to_bin(double delay_ns)
{
    int b = static_cast<int>(std::lround(delay_ns / kBinWidthNs));
    if (b < 0)
        b = 0;
    if (b >= kScanBins)
        b = kScanBins - 1;
    return b;
}

} // namespace wowuwb

#endif
