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

#include "wowuwb/synthesis.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wowuwb/kernels.hpp"

namespace wowuwb {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::size_t Cir::tap_count() const
{
    std::size_t n = 0;
    for (const auto &c : clusters)
        n += c.taps.size();
    return n;
}

double Cir::diffuse_energy() const
{
    double e = 0.0;
    for (const auto &c : clusters)
        for (const auto &t : c.taps)
            e += t.amplitude * t.amplitude;
    return e;
}

double Cir::total_energy() const { return diffuse_energy() + b0_power; }

double Cir::effective_power(const Tap &t) const
{
    double p = t.amplitude * t.amplitude;
    return is_first_tap(t) ? p + b0_power : p;
}

double Cir::effective_amplitude(const Tap &t) const
{
    return is_first_tap(t) ? std::sqrt(t.amplitude * t.amplitude + b0_power)
                           : t.amplitude;
}

PulseTemplate PulseTemplate::default_pulse()
{
    // 16 samples at 61 ps = 0.976 ns support, 4.2 GHz carrier under a raised
    // cosine, normalized to unit peak.
    constexpr int n = 16;
    constexpr double f0_ghz = 4.2;
    PulseTemplate p;
    p.samples.resize(n);
    double peak = 0.0;
    for (int k = 0; k < n; ++k)
    {
        double w = 0.5 * (1.0 - std::cos(kTwoPi * (k + 0.5) / n));
        double s = w * std::sin(kTwoPi * f0_ghz * (k + 0.5) * kBinWidthNs);
        p.samples[k] = s;
        peak = std::max(peak, std::fabs(s));
    }
    for (auto &s : p.samples)
        s /= peak;
    return p;
}

PulseTemplate PulseTemplate::impulse()
{
    PulseTemplate p;
    p.samples = {1.0};
    return p;
}

PulseTemplate PulseTemplate::from_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open template file: " + path);
    PulseTemplate p;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        p.samples.push_back(std::stod(line));
    }
    if (p.samples.empty())
        throw std::runtime_error("template file has no samples: " + path);
    if (p.samples.size() > static_cast<std::size_t>(kScanBins))
        throw std::runtime_error("template longer than the scan grid");
    return p;
}

int draw_cluster_count(double n_bar, double sigma_nbar, RngStream &rng)
{
    if (n_bar < 1.0)
        throw std::invalid_argument("draw_cluster_count: n_bar must be >= 1");
    if (sigma_nbar < 0.0)
        throw std::invalid_argument("draw_cluster_count: sigma_nbar must be >= 0");
    double x = n_bar + (sigma_nbar > 0.0 ? rng.normal(0.0, sigma_nbar) : 0.0);
    long n = std::lround(x);
    return n < 1 ? 1 : static_cast<int>(n);
}

ScaledArrivalMeans apply_hurricane_scaling(const HurricaneScaling &scaling)
{
    if (!(scaling.c_c >= 0.0 && scaling.c_c < 1.0) ||
        !(scaling.c_m >= 0.0 && scaling.c_m < 1.0))
        throw std::invalid_argument("hurricane scaling constants must lie in [0,1)");
    if (scaling.c_m >= scaling.c_c && !(scaling.c_c == 0.0 && scaling.c_m == 0.0))
        throw std::invalid_argument("c_c must exceed c_m");
    if (scaling.gamma_bar_b_ns <= 0.0 || scaling.tau_bar_b_ns <= 0.0)
        throw std::invalid_argument("base-case mean arrival times must be positive");
    ScaledArrivalMeans out;
    out.gamma_bar_ns = (1.0 + scaling.c_c) * scaling.gamma_bar_b_ns;
    out.tau_bar_ns = (1.0 + scaling.c_m) * scaling.tau_bar_b_ns;
    out.gamma_rate = 1.0 / out.gamma_bar_ns;
    out.zeta_rate = 1.0 / out.tau_bar_ns;
    return out;
}

double scaled_mean_cluster_count(const HurricaneScaling &scaling)
{
    if (scaling.c_r <= 0.0 || scaling.c_p <= 0.0 || scaling.c_j < 0.0)
        throw std::invalid_argument("cluster-count constants out of range");
    return (1.0 + scaling.c_j * scaling.c_p / scaling.c_r) * scaling.n_bar_b;
}

ClusterArrivals draw_cluster_arrivals(double gamma_rate, int n_clusters, RngStream &rng,
                                      double min_gap_ns, double scan_ns)
{
    if (gamma_rate <= 0.0)
        throw std::invalid_argument("draw_cluster_arrivals: rate must be positive");
    if (n_clusters < 1)
        throw std::invalid_argument("draw_cluster_arrivals: need at least one cluster");
    ClusterArrivals out;
    out.arrivals_ns.push_back(0.0);
    double t = 0.0;
    for (int i = 1; i < n_clusters; ++i)
    {
        double gap;
        do
        {
            gap = rng.exponential(gamma_rate);
        } while (gap <= 0.0 || gap < min_gap_ns);
        t += gap;
        if (t >= scan_ns)
        {
            out.truncated = true;
            break;
        }
        out.arrivals_ns.push_back(t);
    }
    return out;
}

std::vector<double> draw_ray_arrivals(double zeta_rate, double cluster_start_ns,
                                      double horizon_ns, RngStream &rng)
{
    if (zeta_rate <= 0.0)
        throw std::invalid_argument("draw_ray_arrivals: rate must be positive");
    if (cluster_start_ns >= horizon_ns)
        throw std::invalid_argument("draw_ray_arrivals: cluster start beyond horizon");
    std::vector<double> offsets;
    offsets.push_back(0.0);
    const double span = horizon_ns - cluster_start_ns;
    double t = 0.0;
    for (;;)
    {
        double gap;
        do
        {
            gap = rng.exponential(zeta_rate);
        } while (gap <= 0.0);
        t += gap;
        if (t >= span)
            break;
        offsets.push_back(t);
    }
    return offsets;
}

double draw_tap_amplitude(double target_mean_power, double sigma_a_db, RngStream &rng)
{
    if (target_mean_power <= 0.0)
        throw std::invalid_argument("draw_tap_amplitude: target power must be positive");
    if (sigma_a_db < 0.0)
        throw std::invalid_argument("draw_tap_amplitude: sigma must be >= 0");
    if (sigma_a_db == 0.0)
        return std::sqrt(target_mean_power);
    const double s = db_amp_to_log_std(sigma_a_db);
    const double mu = 0.5 * std::log(target_mean_power) - s * s;
    return std::exp(mu + s * rng.normal());
}

Cir synthesize_cir(const Scenario &scenario, const MultipathParams &params,
                   const HurricaneScaling &scaling, const SynthesisOptions &options,
                   std::uint64_t master_seed, std::uint64_t scan_index)
{
    validate_wind(scenario.wind_mph);
    if (auto report = validate(params); !report.empty())
        throw std::invalid_argument("invalid multipath parameters: " + report.front());

    const bool los = scenario.path_kind() == PathKind::LOS;
    const bool has_direct = params.mu_dr_db && params.sigma_dr_db;
    if (!los && has_direct)
        throw std::invalid_argument(
            "NLOS scenario cannot carry direct-component statistics");
    if (los && !options.suppress_direct && !has_direct)
        throw std::invalid_argument(
            "LOS synthesis requires direct-component statistics (mu_dr, sigma_dr)");

    double n_bar = params.n_bar;
    double gamma_rate = params.gamma_rate;
    double zeta_rate = params.zeta_rate;
    if (options.use_hurricane_scaling)
    {
        const auto means = apply_hurricane_scaling(scaling);
        gamma_rate = means.gamma_rate;
        zeta_rate = means.zeta_rate;
        n_bar = scaled_mean_cluster_count(scaling);
    }

    if (options.arrival_jitter)
    {
        RngStream jit(master_seed, scan_index, rng_purpose::arrival_jitter);
        double gap_c = 1.0 / gamma_rate + jit.normal(0.0, params.sigma_c_ns);
        double gap_m = 1.0 / zeta_rate + jit.normal(0.0, params.sigma_m_ns);
        gap_c = std::max(gap_c, 0.1 / gamma_rate);
        gap_m = std::max(gap_m, 0.1 / zeta_rate);
        gamma_rate = 1.0 / gap_c;
        zeta_rate = 1.0 / gap_m;
    }

    Cir cir;
    cir.scenario = scenario;
    cir.master_seed = master_seed;
    cir.scan_index = scan_index;

    RngStream count_rng(master_seed, scan_index, rng_purpose::cluster_count);
    const int n_drawn = draw_cluster_count(n_bar, params.sigma_nbar, count_rng);

    RngStream arrival_rng(master_seed, scan_index, rng_purpose::cluster_arrivals);
    auto arrivals = draw_cluster_arrivals(gamma_rate, n_drawn, arrival_rng,
                                          options.forced_cluster_gap_min_ns);
    cir.cluster_truncated = arrivals.truncated;
    const std::size_t n_clusters = arrivals.arrivals_ns.size();

    RngStream ray_rng(master_seed, scan_index, rng_purpose::ray_arrivals);
    cir.clusters.resize(n_clusters);
    for (std::size_t i = 0; i < n_clusters; ++i)
    {
        const double start = arrivals.arrivals_ns[i];
        double horizon = (i + 1 < n_clusters) ? arrivals.arrivals_ns[i + 1]
                                              : kScanDurationNs;
        if (options.ray_span_cap_ns > 0.0)
            horizon = std::min(horizon, start + options.ray_span_cap_ns);
        auto offsets = draw_ray_arrivals(zeta_rate, start, horizon, ray_rng);
        auto &cluster = cir.clusters[i];
        cluster.arrival_ns = start;
        cluster.taps.resize(offsets.size());
        for (std::size_t l = 0; l < offsets.size(); ++l)
        {
            auto &tap = cluster.taps[l];
            tap.delay_ns = start + offsets[l];
            tap.cluster_index = static_cast<int>(i) + 1;
            tap.ray_index = static_cast<int>(l) + 1;
        }
    }

    // Skeleton weights from the dual-exponential decay, optionally jittered
    // (mean-preserving) per cluster and per ray.
    RngStream jitter_rng(master_seed, scan_index, rng_purpose::pdp_jitter);
    const double sp_log = db_pow_to_log_std(params.sigma_p_db);
    const double smp_log = db_pow_to_log_std(params.sigma_mp_db);
    std::vector<std::vector<double>> weights(n_clusters);
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < n_clusters; ++i)
    {
        const auto &cluster = cir.clusters[i];
        double cluster_factor = std::exp(-cluster.arrival_ns / params.lambda_cap_ns);
        if (options.pdp_jitter && sp_log > 0.0)
            cluster_factor *= std::exp(sp_log * jitter_rng.normal() - 0.5 * sp_log * sp_log);
        auto &w = weights[i];
        w.resize(cluster.taps.size());
        for (std::size_t l = 0; l < cluster.taps.size(); ++l)
        {
            double offset = cluster.taps[l].delay_ns - cluster.arrival_ns;
            double ray_factor = std::exp(-offset / params.lambda_ray_ns);
            if (options.pdp_jitter && smp_log > 0.0)
                ray_factor *= std::exp(smp_log * jitter_rng.normal() - 0.5 * smp_log * smp_log);
            w[l] = cluster_factor * ray_factor;
            weight_sum += w[l];
        }
    }

    // Diffuse power scale: the skeleton is normalized so the expected total
    // diffuse energy equals the per-scan A0 draw.
    RngStream diffuse_rng(master_seed, scan_index, rng_purpose::diffuse_power);
    double a0 = db_to_power(diffuse_rng.normal(params.mu_df_db, params.sigma_df_db));

    double b0 = 0.0;
    if (los && !options.suppress_direct)
    {
        RngStream direct_rng(master_seed, scan_index, rng_purpose::direct_power);
        b0 = db_to_power(direct_rng.normal(*params.mu_dr_db, *params.sigma_dr_db));
    }

    double energy_scale = 1.0;
    if (options.large_scale && !scenario.is_reference())
    {
        // One shadowing draw per (seed, velocity) block: the deviation X_A
        // describes a measurement session at one wind setting, so all scans
        // of that block share it and an ensemble's energy ratio against the
        // reference recovers the regression line.
        const auto block =
            static_cast<std::uint64_t>(std::llround(scenario.wind_mph * 1000.0));
        RngStream ls_rng(master_seed, block, rng_purpose::large_scale);
        const auto &ls = *options.large_scale;
        double a_w = ls.a_w0_db + ls.alpha * scenario.wind_mph +
                     ls_rng.normal(0.0, ls.sigma_a_db);
        cir.large_scale_db = a_w;
        energy_scale = db_to_power(-a_w);
    }
    a0 *= energy_scale;
    b0 *= energy_scale;

    const double sigma_a = options.sigma_a_db_override.value_or(params.sigma_a_db);
    RngStream amp_rng(master_seed, scan_index, rng_purpose::amplitudes);
    RngStream phase_rng(master_seed, scan_index, rng_purpose::phases);
    for (std::size_t i = 0; i < n_clusters; ++i)
    {
        auto &cluster = cir.clusters[i];
        for (std::size_t l = 0; l < cluster.taps.size(); ++l)
        {
            double target = a0 * weights[i][l] / weight_sum;
            cluster.taps[l].amplitude = draw_tap_amplitude(target, sigma_a, amp_rng);
            cluster.taps[l].phase_rad = phase_rng.uniform(kTwoPi);
        }
    }

    cir.a0_power = a0;
    cir.b0_power = b0;
    return cir;
}

std::vector<double> apply_rain_bins(const std::vector<double> &bins, double beta,
                                    double sigma_r_db, RngStream &rng)
{
    if (!(beta > 0.0) || beta > 1.0)
        throw std::invalid_argument("apply_rain: beta must lie in (0, 1]");
    if (beta == 1.0 && sigma_r_db != 0.0)
        throw std::invalid_argument("apply_rain: beta = 1 is only valid as the identity");
    if (sigma_r_db < 0.0)
        throw std::invalid_argument("apply_rain: sigma_r_db must be >= 0");
    for (double b : bins)
        if (b < 0.0)
            throw std::invalid_argument("apply_rain: PDP bins must be nonnegative");

    std::vector<double> out(bins.size());
    if (sigma_r_db == 0.0)
    {
        if (beta == 1.0)
        {
            out = bins;
            return out;
        }
        std::vector<double> zeros(bins.size(), 0.0);
        kernels::scale_jitter_clamp0(out.data(), bins.data(), zeros.data(),
                                     bins.size(), beta, 0.0);
        return out;
    }
    const double rel = db_amp_to_log_std(sigma_r_db);
    std::vector<double> z(bins.size());
    for (auto &v : z)
        v = rng.normal();
    kernels::scale_jitter_clamp0(out.data(), bins.data(), z.data(), bins.size(),
                                 beta, beta * rel);
    return out;
}

ScanWaveform render_waveform(const Cir &cir, const PulseTemplate &pulse)
{
    if (pulse.samples.empty())
        throw std::invalid_argument("render_waveform: empty template");
    if (pulse.samples.size() > static_cast<std::size_t>(kScanBins))
        throw std::invalid_argument("render_waveform: template longer than the scan");
    ScanWaveform wf;
    wf.scenario = cir.scenario;
    wf.samples.assign(kScanBins, 0.0);
    for (const auto &cluster : cir.clusters)
        for (const auto &tap : cluster.taps)
        {
            const int bin = delay_to_bin(tap.delay_ns);
            const double gain = cir.effective_amplitude(tap) * std::cos(tap.phase_rad);
            const std::size_t room = static_cast<std::size_t>(kScanBins - bin);
            const std::size_t m = std::min(pulse.samples.size(), room);
            for (std::size_t k = 0; k < m; ++k)
                wf.samples[bin + k] += gain * pulse.samples[k];
        }
    return wf;
}

std::vector<AttenuationDraw> sample_large_scale(const LargeScaleParams &params,
                                                const std::vector<double> &velocities,
                                                int reps_per_velocity, RngStream &rng)
{
    if (velocities.empty() || reps_per_velocity < 1)
        throw std::invalid_argument("sample_large_scale: empty design");
    std::vector<AttenuationDraw> out;
    out.reserve(velocities.size() * static_cast<std::size_t>(reps_per_velocity));
    for (double v : velocities)
        for (int r = 0; r < reps_per_velocity; ++r)
        {
            double noise = params.sigma_a_db > 0.0 ? rng.normal(0.0, params.sigma_a_db) : 0.0;
            out.push_back({v, params.a_w0_db + params.alpha * v + noise});
        }
    return out;
}

} // namespace wowuwb
