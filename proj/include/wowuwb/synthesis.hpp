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

#ifndef WOWUWB_SYNTHESIS_HPP
#define WOWUWB_SYNTHESIS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "wowuwb/params.hpp"
#include "wowuwb/rng.hpp"
#include "wowuwb/units.hpp"

namespace wowuwb {

// One multipath component. Amplitudes are the diffuse draw; for LOS scans the
// direct-component power B0 is recorded on the Cir and folded onto the first
// tap only at the point of use (energy, PDP, rendering), which keeps the tap
// list bit-identical between a LOS realization and its direct-suppressed twin.
struct Tap {
    double delay_ns = 0.0;
    double amplitude = 0.0;
    double phase_rad = 0.0;
    int cluster_index = 1; // 1-based
    int ray_index = 1;     // 1-based
};

struct Cluster {
    double arrival_ns = 0.0;
    std::vector<Tap> taps;
};

// One synthesized scan.
struct Cir {
    Scenario scenario;
    std::uint64_t master_seed = 0;
    std::uint64_t scan_index = 0;
    std::vector<Cluster> clusters;
    double b0_power = 0.0;          // direct-component power (0 for NLOS)
    double a0_power = 0.0;          // realized diffuse power target
    double large_scale_db = 0.0;    // applied attenuation A_w(v) draw, 0 if none
    bool cluster_truncated = false; // cluster sequence was cut by the scan end
    double scan_duration_ns = kScanDurationNs;
    double bin_width_ps = 61.0;

    std::size_t tap_count() const;
    double diffuse_energy() const;                 // sum of a^2
    double total_energy() const;                   // diffuse + b0_power
    double effective_power(const Tap &t) const;    // a^2, + b0 on the first tap
    double effective_amplitude(const Tap &t) const;
    bool is_first_tap(const Tap &t) const
    {
        return t.cluster_index == 1 && t.ray_index == 1;
    }
};

// Dense real waveform on the 61 ps grid.
struct ScanWaveform {
    std::vector<double> samples; // length kScanBins
    Scenario scenario;
};

// Sounding pulse. The default is a raised-cosine-windowed sinusoid with 1 ns
// support (16 samples) and unit peak.
struct PulseTemplate {
    std::vector<double> samples;

    static PulseTemplate default_pulse();
    static PulseTemplate impulse();
    static PulseTemplate from_csv(const std::string &path);
};

struct SynthesisOptions {
    // Per-scan perturbation of the mean arrival times (X_c, X_m), floored at
    // 10% of nominal. Off by default: at the published sigma_c magnitudes the
    // positivity floor inflates the realized mean gap well beyond the
    // round-trip tolerance, so it is an opt-in modeling knob.
    bool arrival_jitter = false;

    // Lognormal jitter on cluster target powers (X_P, one draw per cluster)
    // and ray target powers (X_mp, per ray), mean-preserving.
    bool pdp_jitter = true;

    // Derive rates and mean cluster count from the hurricane scaling relation
    // instead of the table rates.
    bool use_hurricane_scaling = false;

    // Suppress the direct-component injection on a LOS scenario, producing
    // the matched NLOS-mode realization.
    bool suppress_direct = false;

    // Large-scale attenuation applied to hurricane scans (reference scans are
    // never attenuated). Unset disables the scaling.
    std::optional<LargeScaleParams> large_scale;

    // Oracle-construction knobs: resample cluster gaps below the minimum, and
    // cap the ray span of each cluster short of its horizon (0 = no cap).
    double forced_cluster_gap_min_ns = 0.0;
    double ray_span_cap_ns = 0.0;
    std::optional<double> sigma_a_db_override;
};

// N = max(1, round(n_bar + Normal(0, sigma_nbar^2))).
int draw_cluster_count(double n_bar, double sigma_nbar, RngStream &rng);

struct ScaledArrivalMeans {
    double gamma_bar_ns = 0.0; // mean cluster gap
    double tau_bar_ns = 0.0;   // mean ray gap
    double gamma_rate = 0.0;   // 1 / gamma_bar
    double zeta_rate = 0.0;    // 1 / tau_bar
};

// Hurricane inflation of the base-case mean arrival times. Throws on
// violated constraints (c_m >= c_c, values outside [0,1), bad base case).
ScaledArrivalMeans apply_hurricane_scaling(const HurricaneScaling &scaling);

// Mean cluster count under the hurricane scaling relation.
double scaled_mean_cluster_count(const HurricaneScaling &scaling);

struct ClusterArrivals {
    std::vector<double> arrivals_ns; // strictly increasing, first at 0
    bool truncated = false;          // the drawn sequence exceeded the scan
};

// First cluster at 0, then i.i.d. Exponential(gamma_rate) gaps; arrivals past
// the scan end are dropped (never leaves the list empty).
ClusterArrivals draw_cluster_arrivals(double gamma_rate, int n_clusters, RngStream &rng,
                                      double min_gap_ns = 0.0,
                                      double scan_ns = kScanDurationNs);

// Ray delay offsets within one cluster: first at 0, Exponential(zeta_rate)
// gaps, stopping at the horizon.
std::vector<double> draw_ray_arrivals(double zeta_rate, double cluster_start_ns,
                                      double horizon_ns, RngStream &rng);

// Lognormal amplitude with E[a^2] = target_mean_power.
double draw_tap_amplitude(double target_mean_power, double sigma_a_db, RngStream &rng);

// Full scan synthesis. Deterministic in (scenario, params, scaling, options,
// master_seed, scan_index); scans are independent streams, so ensembles can
// be generated in any order on any number of workers.
Cir synthesize_cir(const Scenario &scenario, const MultipathParams &params,
                   const HurricaneScaling &scaling, const SynthesisOptions &options,
                   std::uint64_t master_seed, std::uint64_t scan_index = 0);

// Wind-driven-rain law on a dense power vector: each bin scaled by beta plus
// a zero-mean Gaussian perturbation with std sigma_r_db * ln(10)/20 relative
// to the attenuated bin power, clamped at 0. beta = 1 with sigma = 0 is the
// bit-exact identity.
std::vector<double> apply_rain_bins(const std::vector<double> &bins, double beta,
                                    double sigma_r_db, RngStream &rng);

// Tap list convolved with the pulse template, nearest-bin placement.
ScanWaveform render_waveform(const Cir &cir, const PulseTemplate &pulse);

// Attenuation samples drawn from the large-scale regression law, the forward
// model for the Table I round trip.
struct AttenuationDraw {
    double wind_mph;
    double attenuation_db;
};
std::vector<AttenuationDraw> sample_large_scale(const LargeScaleParams &params,
                                                const std::vector<double> &velocities,
                                                int reps_per_velocity, RngStream &rng);

} // namespace wowuwb

#endif
