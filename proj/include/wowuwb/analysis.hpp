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

#ifndef WOWUWB_ANALYSIS_HPP
#define WOWUWB_ANALYSIS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "wowuwb/synthesis.hpp"

namespace wowuwb {

// Power delay profile on the 61 ps grid, linear units.
struct Pdp {
    std::vector<double> bins; // length kScanBins, nonnegative
    Scenario scenario;

    double total_energy() const;
};

struct ClusterSegment {
    int start_bin = 0;
    int end_bin = 0; // inclusive
    double peak_power = 0.0;
};

struct ClusterSegmentation {
    std::vector<ClusterSegment> segments;
    std::size_t count() const { return segments.size(); }
};

struct AttenuationSample {
    double wind_mph = 0.0;
    double attenuation_db = 0.0;
    Scenario scenario;
};

// Sliding-window cluster detector: the PDP is smoothed in the dB domain, bins
// below floor_rel * peak are silence, a silence run of min_gap_ns ends the
// current cluster, and inside an active cluster a local maximum that exceeds
// the cluster's fitted exponential-decay envelope by margin_db (and trails the
// cluster peak by at least min_gap_ns) starts a new one.
struct ClusterIdConfig {
    double margin_db = 6.0;
    double min_gap_ns = 1.0;
    double floor_rel = 1e-6;
    int smooth_bins = 9; // odd moving-average width in the dB domain
};

// Bin-wise accumulation of effective tap powers; total energy matches the
// tap-power sum exactly.
Pdp compute_pdp(const Cir &cir);

// A_e = 10 log10(sum of reference energy / sum of ensemble energy), summed
// over all scans and bins. Throws on empty or zero-energy input.
AttenuationSample empirical_attenuation(const std::vector<Pdp> &ensemble,
                                        const std::vector<Pdp> &reference);

ClusterSegmentation identify_clusters(const Pdp &pdp, const ClusterIdConfig &config = {});

// Taps with amplitude >= threshold_fraction * max amplitude.
int count_significant_mpcs(std::span<const double> amplitudes,
                           double threshold_fraction = 0.15);
int count_significant_mpcs(const Cir &cir, double threshold_fraction = 0.15);

// CLEAN deconvolution: repeatedly take the best-correlated template shift out
// of the residual until its peak falls below stop_fraction of the original
// peak. Returned taps are sorted by delay; a negative match is encoded as
// phase pi.
struct CleanTap {
    double delay_ns = 0.0;
    double amplitude = 0.0; // > 0
    double phase_rad = 0.0; // 0 or pi
};
std::vector<CleanTap> clean_deconvolve(const ScanWaveform &waveform,
                                       const PulseTemplate &pulse,
                                       double stop_fraction = 0.10,
                                       int max_iters = 200);

// The measurement-chain MPC count: render, CLEAN, then threshold at
// threshold_fraction of the largest recovered amplitude.
int significant_mpcs_via_clean(const Cir &cir, const PulseTemplate &pulse,
                               double stop_fraction = 0.10,
                               double threshold_fraction = 0.15,
                               int max_iters = 200);

// Moment-based Rician K estimate from envelope samples (>= 100, nonnegative).
// Near-constant input saturates; a detection floor proportional to the
// sampling noise of the moment ratio pins Rayleigh-like input to K = 0.
struct KFactorEstimate {
    double k_linear = 0.0;
    double k_db = 0.0; // -inf when k_linear == 0, +inf when saturated
    bool saturated = false;
};
KFactorEstimate estimate_k_factor(std::span<const double> amplitude_samples);

// Coherent envelope |sum a e^{j phi}| of one scan; the observable the
// K-factor is estimated from across a scan ensemble.
double coherent_envelope(const Cir &cir);

// Per-bin subtraction clamped at zero. Throws on grid mismatch.
std::vector<Pdp> static_background_subtract(const std::vector<Pdp> &ensemble,
                                            const Pdp &background);

// Wind-driven-rain law on a PDP (see apply_rain_bins).
Pdp apply_rain(const Pdp &pdp, double beta, double sigma_r_db, RngStream &rng);

} // namespace wowuwb

#endif
