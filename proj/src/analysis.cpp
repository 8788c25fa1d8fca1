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

#include "wowuwb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>

#include "wowuwb/kernels.hpp"

namespace wowuwb {

double Pdp::total_energy() const
{
    return kernels::sum(bins.data(), bins.size());
}

Pdp compute_pdp(const Cir &cir)
{
    Pdp pdp;
    pdp.scenario = cir.scenario;
    pdp.bins.assign(kScanBins, 0.0);
    for (const auto &cluster : cir.clusters)
        for (const auto &tap : cluster.taps)
            pdp.bins[delay_to_bin(tap.delay_ns)] += cir.effective_power(tap);
    return pdp;
}

AttenuationSample empirical_attenuation(const std::vector<Pdp> &ensemble,
                                        const std::vector<Pdp> &reference)
{
    if (ensemble.empty() || reference.empty())
        throw std::invalid_argument("empirical_attenuation: empty ensemble");
    double e_v = 0.0, e_ref = 0.0;
    for (const auto &p : ensemble)
        e_v += p.total_energy();
    for (const auto &p : reference)
        e_ref += p.total_energy();
    if (e_v <= 0.0 || e_ref <= 0.0)
        throw std::invalid_argument("empirical_attenuation: zero-energy ensemble");
    AttenuationSample s;
    s.scenario = ensemble.front().scenario;
    s.wind_mph = s.scenario.wind_mph;
    s.attenuation_db = 10.0 * std::log10(e_ref / e_v);
    return s;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Moving geometric mean: dB-domain average over the window, silent bins
// excluded.
std::vector<double> smooth_db(const std::vector<double> &bins, double floor_power,
                              int width)
{
    const int n = static_cast<int>(bins.size());
    const int half = width / 2;
    std::vector<double> db(n, kNegInf);
    for (int i = 0; i < n; ++i)
        if (bins[i] >= floor_power)
            db[i] = 10.0 * std::log10(bins[i]);
    std::vector<double> out(n, kNegInf);
    for (int i = 0; i < n; ++i)
    {
        double acc = 0.0;
        int cnt = 0;
        for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j)
            if (db[j] != kNegInf)
            {
                acc += db[j];
                ++cnt;
            }
        if (cnt > 0)
            out[i] = acc / cnt;
    }
    return out;
}

struct RunningFit {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    void add(double x, double y)
    {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    // dB per ns, clamped to decay; 0 until two points exist.
    double decay_slope() const
    {
        if (n < 2)
            return 0.0;
        double denom = n * sxx - sx * sx;
        if (denom <= 0.0)
            return 0.0;
        double slope = (n * sxy - sx * sy) / denom;
        return std::min(slope, 0.0);
    }
};

} // namespace

ClusterSegmentation identify_clusters(const Pdp &pdp, const ClusterIdConfig &config)
{
    ClusterSegmentation seg;
    const int n = static_cast<int>(pdp.bins.size());
    if (n == 0)
        return seg;
    double peak = 0.0;
    for (double b : pdp.bins)
        peak = std::max(peak, b);
    if (peak <= 0.0)
        return seg;

    const double floor_power = peak * config.floor_rel;
    const int gap_bins = std::max(1, static_cast<int>(std::lround(config.min_gap_ns / kBinWidthNs)));
    const auto s = smooth_db(pdp.bins, floor_power, config.smooth_bins);

    bool open = false;
    int start = 0, last_active = 0, silence = 0;
    int peak_bin = 0;
    double peak_db = kNegInf;
    RunningFit fit;

    auto close_segment = [&](int end_bin) {
        double seg_peak = 0.0;
        for (int j = start; j <= end_bin; ++j)
            seg_peak = std::max(seg_peak, pdp.bins[j]);
        seg.segments.push_back({start, end_bin, seg_peak});
    };
    auto open_segment = [&](int at) {
        open = true;
        start = at;
        last_active = at;
        peak_bin = at;
        peak_db = s[at];
        fit = RunningFit{};
        fit.add(at * kBinWidthNs, s[at]);
    };

    for (int i = 0; i < n; ++i)
    {
        const bool active = pdp.bins[i] >= floor_power;
        if (!active)
        {
            if (open)
                ++silence;
            continue;
        }
        if (!open)
        {
            open_segment(i);
            silence = 0;
            continue;
        }
        if (silence >= gap_bins)
        {
            close_segment(last_active);
            open_segment(i);
            silence = 0;
            continue;
        }
        silence = 0;

        // Split on a smoothed local maximum that breaks the decay envelope.
        const bool local_max = i > 0 && i + 1 < n && s[i] != kNegInf &&
                               s[i] > s[i - 1] && s[i] >= s[i + 1];
        if (local_max && (i - peak_bin) >= gap_bins)
        {
            const double env = peak_db + fit.decay_slope() * (i - peak_bin) * kBinWidthNs;
            if (s[i] > env + config.margin_db)
            {
                // Back up to the dip this rise started from.
                int b = i;
                while (b > start + 1 && s[b - 1] != kNegInf && s[b - 1] <= s[b] &&
                       pdp.bins[b - 1] >= floor_power)
                    --b;
                if (b <= start)
                    b = i;
                close_segment(b - 1 >= start ? b - 1 : start);
                open_segment(b);
                // Re-walk forward over [b, i] to restore the running state.
                for (int j = b + 1; j <= i; ++j)
                    if (pdp.bins[j] >= floor_power)
                    {
                        last_active = j;
                        if (s[j] > peak_db)
                        {
                            peak_db = s[j];
                            peak_bin = j;
                        }
                        fit.add(j * kBinWidthNs, s[j]);
                    }
                continue;
            }
        }

        last_active = i;
        if (s[i] > peak_db)
        {
            peak_db = s[i];
            peak_bin = i;
        }
        fit.add(i * kBinWidthNs, s[i]);
    }
    if (open)
        close_segment(last_active);
    return seg;
}

int count_significant_mpcs(std::span<const double> amplitudes, double threshold_fraction)
{
    if (amplitudes.empty())
        throw std::invalid_argument("count_significant_mpcs: no taps");
    double max_amp = 0.0;
    for (double a : amplitudes)
        max_amp = std::max(max_amp, a);
    const double threshold = threshold_fraction * max_amp;
    int count = 0;
    for (double a : amplitudes)
        if (a >= threshold)
            ++count;
    return count;
}

int count_significant_mpcs(const Cir &cir, double threshold_fraction)
{
    std::vector<double> amps;
    amps.reserve(cir.tap_count());
    for (const auto &c : cir.clusters)
        for (const auto &t : c.taps)
            amps.push_back(cir.effective_amplitude(t));
    return count_significant_mpcs(amps, threshold_fraction);
}

std::vector<CleanTap> clean_deconvolve(const ScanWaveform &waveform,
                                       const PulseTemplate &pulse,
                                       double stop_fraction, int max_iters)
{
    const auto &t = pulse.samples;
    if (t.empty())
        throw std::invalid_argument("clean_deconvolve: empty template");
    const double t_energy = kernels::sum_sq(t.data(), t.size());
    if (t_energy <= 0.0)
        throw std::invalid_argument("clean_deconvolve: zero template");
    const std::size_t n = waveform.samples.size();
    if (n < t.size())
        throw std::invalid_argument("clean_deconvolve: waveform shorter than template");
    for (double v : waveform.samples)
        if (!std::isfinite(v))
            throw std::invalid_argument("clean_deconvolve: non-finite waveform sample");

    std::vector<double> residual = waveform.samples;
    const double original_peak =
        std::fabs(residual[kernels::peak_abs_index(residual.data(), n)]);
    std::map<std::size_t, double> taps; // lag -> signed amplitude
    if (original_peak > 0.0)
    {
        const double stop_level = stop_fraction * original_peak;
        std::vector<double> corr(n - t.size() + 1);
        for (int it = 0; it < max_iters; ++it)
        {
            const std::size_t peak_at = kernels::peak_abs_index(residual.data(), n);
            if (std::fabs(residual[peak_at]) < stop_level)
                break;
            kernels::xcorr(residual.data(), n, t.data(), t.size(), corr.data());
            const std::size_t lag = kernels::peak_abs_index(corr.data(), corr.size());
            const double amp = corr[lag] / t_energy;
            if (amp == 0.0)
                break;
            for (std::size_t k = 0; k < t.size(); ++k)
                residual[lag + k] -= amp * t[k];
            taps[lag] += amp;
        }
    }

    std::vector<CleanTap> out;
    out.reserve(taps.size());
    for (const auto &[lag, amp] : taps)
    {
        if (amp == 0.0)
            continue;
        CleanTap tap;
        tap.delay_ns = static_cast<double>(lag) * kBinWidthNs;
        tap.amplitude = std::fabs(amp);
        tap.phase_rad = amp >= 0.0 ? 0.0 : 3.14159265358979323846;
        out.push_back(tap);
    }
    return out;
}

int significant_mpcs_via_clean(const Cir &cir, const PulseTemplate &pulse,
                               double stop_fraction, double threshold_fraction,
                               int max_iters)
{
    const auto wf = render_waveform(cir, pulse);
    const auto taps = clean_deconvolve(wf, pulse, stop_fraction, max_iters);
    if (taps.empty())
        return 0;
    std::vector<double> amps;
    amps.reserve(taps.size());
    for (const auto &t : taps)
        amps.push_back(t.amplitude);
    return count_significant_mpcs(amps, threshold_fraction);
}

KFactorEstimate estimate_k_factor(std::span<const double> amplitude_samples)
{
    const std::size_t n = amplitude_samples.size();
    if (n < 100)
        throw std::invalid_argument("estimate_k_factor: need at least 100 samples");
    for (double a : amplitude_samples)
        if (a < 0.0 || !std::isfinite(a))
            throw std::invalid_argument("estimate_k_factor: samples must be nonnegative");

    double m2 = 0.0, m4 = 0.0;
    kernels::moments24(amplitude_samples.data(), n, &m2, &m4);
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    KFactorEstimate est;
    if (m2 <= 0.0)
    {
        est.saturated = true;
        est.k_db = std::numeric_limits<double>::infinity();
        est.k_linear = std::numeric_limits<double>::infinity();
        return est;
    }

    // Rician moment ratio r = m4/m2^2: 2 at Rayleigh, falling toward 1 as K grows.
    // The detection floor absorbs the O(1/sqrt(n)) sampling noise of r at
    // K = 0 so Rayleigh input reports exactly zero.
    const double r = m4 / (m2 * m2);
    const double gate = 2.0 - 3.29 / std::sqrt(static_cast<double>(n));
    const double d = 2.0 * m2 * m2 - m4;
    if (d <= 0.0 || r >= gate)
    {
        est.k_linear = 0.0;
        est.k_db = -std::numeric_limits<double>::infinity();
        return est;
    }
    const double direct = std::sqrt(d);    // nu^2
    const double diffuse = m2 - direct;    // 2 sigma^2
    if (diffuse <= 1e-12 * m2)
    {
        est.saturated = true;
        est.k_linear = std::numeric_limits<double>::infinity();
        est.k_db = std::numeric_limits<double>::infinity();
        return est;
    }
    est.k_linear = direct / diffuse;
    est.k_db = 10.0 * std::log10(est.k_linear);
    return est;
}

double coherent_envelope(const Cir &cir)
{
    std::complex<double> acc(0.0, 0.0);
    for (const auto &c : cir.clusters)
        for (const auto &t : c.taps)
            acc += std::polar(cir.effective_amplitude(t), t.phase_rad);
    return std::abs(acc);
}

Pdp apply_rain(const Pdp &pdp, double beta, double sigma_r_db, RngStream &rng)
{
    Pdp out;
    out.scenario = pdp.scenario;
    out.bins = apply_rain_bins(pdp.bins, beta, sigma_r_db, rng);
    return out;
}

std::vector<Pdp> static_background_subtract(const std::vector<Pdp> &ensemble,
                                            const Pdp &background)
{
    std::vector<Pdp> out;
    out.reserve(ensemble.size());
    for (const auto &p : ensemble)
    {
        if (p.bins.size() != background.bins.size())
            throw std::invalid_argument("static_background_subtract: grid mismatch");
        Pdp r;
        r.scenario = p.scenario;
        r.bins.resize(p.bins.size());
        kernels::sub_clamp0(r.bins.data(), p.bins.data(), background.bins.data(),
                            p.bins.size());
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace wowuwb
