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

#include "wowuwb/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>

namespace wowuwb {

FitResult fit_large_scale(const std::vector<AttenuationSample> &samples)
{
    std::vector<double> velocities;
    for (const auto &s : samples)
        if (std::find(velocities.begin(), velocities.end(), s.wind_mph) == velocities.end())
            velocities.push_back(s.wind_mph);
    if (velocities.size() < 2)
        throw std::invalid_argument("degenerate design: need at least two distinct wind velocities");

    const double n = static_cast<double>(samples.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &s : samples)
    {
        sx += s.wind_mph;
        sy += s.attenuation_db;
        sxx += s.wind_mph * s.wind_mph;
        sxy += s.wind_mph * s.attenuation_db;
    }
    const double sxx_c = sxx - sx * sx / n;
    const double sxy_c = sxy - sx * sy / n;
    const double alpha = sxy_c / sxx_c;
    const double a_w0 = (sy - alpha * sx) / n;

    double ssr = 0.0;
    for (const auto &s : samples)
    {
        double r = s.attenuation_db - (a_w0 + alpha * s.wind_mph);
        ssr += r * r;
    }
    const double dof = n > 2 ? n - 2 : 1.0;
    const double sigma = std::sqrt(ssr / dof);

    FitResult fit;
    fit.n_samples = samples.size();
    fit.residual_norm = std::sqrt(ssr);
    fit.estimates["alpha"] = alpha;
    fit.estimates["a_w0_db"] = a_w0;
    fit.estimates["sigma_a_db"] = sigma;
    fit.standard_errors["alpha"] = sigma / std::sqrt(sxx_c);
    fit.standard_errors["a_w0_db"] = sigma * std::sqrt(1.0 / n + (sx / n) * (sx / n) / sxx_c);
    return fit;
}

NakagamiFit fit_nakagami(std::span<const double> samples)
{
    if (samples.size() < 100)
        throw std::invalid_argument("fit_nakagami: need at least 100 samples");
    double s2 = 0.0, s4 = 0.0;
    for (double w : samples)
    {
        if (!(w > 0.0))
            throw std::invalid_argument("fit_nakagami: samples must be positive");
        double p = w * w;
        s2 += p;
        s4 += p * p;
    }
    const double n = static_cast<double>(samples.size());
    const double mean_p = s2 / n;
    const double var_p = s4 / n - mean_p * mean_p;
    if (var_p <= 0.0)
        throw std::invalid_argument("fit_nakagami: degenerate (deterministic) input");
    return {mean_p * mean_p / var_p, mean_p};
}

LognormalMStats lognormal_m_statistics(const std::vector<NakagamiFit> &per_scan_fits)
{
    if (per_scan_fits.size() < 30)
        throw std::invalid_argument("lognormal_m_statistics: need at least 30 per-scan fits");
    std::vector<double> m_db, o_db;
    m_db.reserve(per_scan_fits.size());
    o_db.reserve(per_scan_fits.size());
    for (const auto &f : per_scan_fits)
    {
        if (!(f.m > 0.0) || !(f.omega > 0.0))
            throw std::invalid_argument("lognormal_m_statistics: nonpositive m or omega");
        m_db.push_back(10.0 * std::log10(f.m));
        o_db.push_back(10.0 * std::log10(f.omega));
    }
    auto mean_std = [](const std::vector<double> &v) {
        const double n = static_cast<double>(v.size());
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double ss = 0.0;
        for (double x : v)
            ss += (x - mean) * (x - mean);
        return std::pair<double, double>{mean, n > 1 ? std::sqrt(ss / (n - 1)) : 0.0};
    };
    auto [mu_m, sd_m] = mean_std(m_db);
    auto [mu_o, sd_o] = mean_std(o_db);
    return {mu_m, sd_m, mu_o, sd_o};
}

double k_to_m(double k_linear)
{
    if (k_linear < 0.0)
        throw std::invalid_argument("k_to_m: K must be nonnegative");
    return (k_linear + 1.0) * (k_linear + 1.0) / (2.0 * k_linear + 1.0);
}

FitResult fit_exponential_rate(std::span<const double> gaps, std::span<const double> censored)
{
    if (gaps.empty())
        throw std::invalid_argument("fit_exponential_rate: no gaps");
    double total = 0.0;
    for (double g : gaps)
    {
        if (!(g >= 0.0))
            throw std::invalid_argument("fit_exponential_rate: negative gap");
        total += g;
    }
    for (double c : censored)
    {
        if (!(c >= 0.0))
            throw std::invalid_argument("fit_exponential_rate: negative censored spell");
        total += c;
    }
    if (total <= 0.0)
        throw std::invalid_argument("fit_exponential_rate: zero total exposure");
    const double n = static_cast<double>(gaps.size());
    const double rate = n / total;
    FitResult fit;
    fit.n_samples = gaps.size();
    fit.estimates["rate"] = rate;
    fit.standard_errors["rate"] = 1.0 / (rate * std::sqrt(n));
    return fit;
}

FitResult fit_poisson_rates(std::span<const Cir> ensemble)
{
    if (ensemble.empty())
        throw std::invalid_argument("fit_poisson_rates: empty ensemble");
    double cl_events = 0.0, cl_exposure = 0.0;
    double ray_events = 0.0, ray_exposure = 0.0;
    for (const auto &cir : ensemble)
    {
        const std::size_t nc = cir.clusters.size();
        cl_events += static_cast<double>(nc) - 1.0;
        cl_exposure += cir.cluster_truncated ? cir.scan_duration_ns
                                             : cir.clusters.back().arrival_ns;
        for (std::size_t i = 0; i < nc; ++i)
        {
            const double start = cir.clusters[i].arrival_ns;
            const double horizon =
                (i + 1 < nc) ? cir.clusters[i + 1].arrival_ns : cir.scan_duration_ns;
            ray_events += static_cast<double>(cir.clusters[i].taps.size()) - 1.0;
            ray_exposure += horizon - start;
        }
    }
    if (cl_events <= 0.0 || cl_exposure <= 0.0)
        throw std::runtime_error("fit_poisson_rates: no complete cluster gaps observed");
    if (ray_events <= 0.0 || ray_exposure <= 0.0)
        throw std::runtime_error("fit_poisson_rates: no complete ray gaps observed");
    FitResult fit;
    fit.n_samples = ensemble.size();
    fit.estimates["gamma_hat"] = cl_events / cl_exposure;
    fit.estimates["zeta_hat"] = ray_events / ray_exposure;
    fit.standard_errors["gamma_hat"] =
        1.0 / (fit.estimates["gamma_hat"] * std::sqrt(cl_events));
    fit.standard_errors["zeta_hat"] =
        1.0 / (fit.estimates["zeta_hat"] * std::sqrt(ray_events));
    return fit;
}

void DecayAccumulator::add(const Pdp &pdp, const ClusterSegmentation &seg)
{
    // Cluster level: one (delay, log start power) point per segment, centered
    // within this scan.
    {
        std::vector<std::pair<double, double>> pts;
        for (const auto &segment : seg.segments)
        {
            const double p0 = pdp.bins[segment.start_bin];
            if (p0 > 0.0)
                pts.emplace_back(segment.start_bin * kBinWidthNs, std::log(p0));
        }
        if (pts.size() >= 2)
        {
            double mx = 0, my = 0;
            for (const auto &[x, y] : pts)
            {
                mx += x;
                my += y;
            }
            mx /= static_cast<double>(pts.size());
            my /= static_cast<double>(pts.size());
            for (const auto &[x, y] : pts)
            {
                cl_sxx_ += (x - mx) * (x - mx);
                cl_sxy_ += (x - mx) * (y - my);
            }
            cl_n_ += pts.size();
        }
    }

    // Ray level: occupied bins after the start bin, centered per cluster.
    for (const auto &segment : seg.segments)
    {
        std::vector<std::pair<double, double>> pts;
        for (int b = segment.start_bin + 1; b <= segment.end_bin; ++b)
        {
            const double p = pdp.bins[b];
            if (p > 0.0)
                pts.emplace_back((b - segment.start_bin) * kBinWidthNs, std::log(p));
        }
        if (pts.size() < 2)
            continue;
        double mx = 0, my = 0;
        for (const auto &[x, y] : pts)
        {
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(pts.size());
        my /= static_cast<double>(pts.size());
        for (const auto &[x, y] : pts)
        {
            ray_sxx_ += (x - mx) * (x - mx);
            ray_sxy_ += (x - mx) * (y - my);
        }
        ray_n_ += pts.size();
    }
}

void DecayAccumulator::add_taps(const Cir &cir)
{
    // Cluster level: first-tap diffuse power per cluster, centered within the
    // scan. The direct-component power is stored separately on the Cir and
    // never enters the decay law.
    if (cir.clusters.size() >= 2)
    {
        double mx = 0, my = 0;
        std::vector<std::pair<double, double>> pts;
        pts.reserve(cir.clusters.size());
        for (const auto &c : cir.clusters)
        {
            const double x = c.arrival_ns;
            const double y = 2.0 * std::log(c.taps.front().amplitude);
            pts.emplace_back(x, y);
            mx += x;
            my += y;
        }
        mx /= static_cast<double>(pts.size());
        my /= static_cast<double>(pts.size());
        for (const auto &[x, y] : pts)
        {
            cl_sxx_ += (x - mx) * (x - mx);
            cl_sxy_ += (x - mx) * (y - my);
        }
        cl_n_ += pts.size();
    }

    // Ray level: per-tap powers against the ray offset, centered per cluster.
    for (const auto &c : cir.clusters)
    {
        if (c.taps.size() < 2)
            continue;
        double mx = 0, my = 0;
        for (const auto &t : c.taps)
        {
            mx += t.delay_ns - c.arrival_ns;
            my += 2.0 * std::log(t.amplitude);
        }
        mx /= static_cast<double>(c.taps.size());
        my /= static_cast<double>(c.taps.size());
        for (const auto &t : c.taps)
        {
            const double x = t.delay_ns - c.arrival_ns;
            const double y = 2.0 * std::log(t.amplitude);
            ray_sxx_ += (x - mx) * (x - mx);
            ray_sxy_ += (x - mx) * (y - my);
        }
        ray_n_ += c.taps.size();
    }
}

void DecayAccumulator::merge(const DecayAccumulator &o)
{
    cl_sxx_ += o.cl_sxx_;
    cl_sxy_ += o.cl_sxy_;
    cl_n_ += o.cl_n_;
    ray_sxx_ += o.ray_sxx_;
    ray_sxy_ += o.ray_sxy_;
    ray_n_ += o.ray_n_;
}

FitResult DecayAccumulator::finish() const
{
    FitResult fit;
    double slope;
    auto slope_of = [&](double sxx, double sxy, std::size_t n) {
        if (n < 2 || sxx <= 0.0)
            return false;
        slope = sxy / sxx;
        return true;
    };
    if (slope_of(cl_sxx_, cl_sxy_, cl_n_) && slope < 0.0)
    {
        fit.estimates["lambda_cap_ns"] = -1.0 / slope;
        fit.n_samples += cl_n_;
    }
    else
        fit.flags.push_back("lambda_cap_ns: insufficient clusters or non-decaying trend");
    if (slope_of(ray_sxx_, ray_sxy_, ray_n_) && slope < 0.0)
    {
        fit.estimates["lambda_ray_ns"] = -1.0 / slope;
        fit.n_samples += ray_n_;
    }
    else
        fit.flags.push_back("lambda_ray_ns: insufficient ray points or non-decaying trend");
    if (fit.estimates.count("lambda_cap_ns") && fit.estimates.count("lambda_ray_ns") &&
        fit.estimates["lambda_cap_ns"] <= fit.estimates["lambda_ray_ns"])
        fit.flags.push_back("inconsistent: lambda_cap <= lambda_ray");
    return fit;
}

FitResult fit_decay_constants(const std::vector<Pdp> &ensemble,
                              const std::vector<ClusterSegmentation> &segmentations)
{
    if (ensemble.size() != segmentations.size())
        throw std::invalid_argument("fit_decay_constants: ensemble/segmentation size mismatch");
    if (ensemble.empty())
        throw std::invalid_argument("fit_decay_constants: empty ensemble");
    DecayAccumulator acc;
    for (std::size_t i = 0; i < ensemble.size(); ++i)
        acc.add(ensemble[i], segmentations[i]);
    return acc.finish();
}

namespace {

// Solve a 3x3 system by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 4>, 3> m)
{
    double scale = 0.0;
    for (const auto &row : m)
        for (int j = 0; j < 3; ++j)
            scale = std::max(scale, std::fabs(row[j]));
    if (scale == 0.0)
        throw std::invalid_argument("rank-deficient design matrix");
    for (int col = 0; col < 3; ++col)
    {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col]))
                pivot = r;
        std::swap(m[col], m[pivot]);
        if (std::fabs(m[col][col]) < 1e-10 * scale)
            throw std::invalid_argument("rank-deficient design matrix");
        for (int r = col + 1; r < 3; ++r)
        {
            const double f = m[r][col] / m[col][col];
            for (int j = col; j < 4; ++j)
                m[r][j] -= f * m[col][j];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r)
    {
        double acc = m[r][3];
        for (int j = r + 1; j < 3; ++j)
            acc -= m[r][j] * x[j];
        x[r] = acc / m[r][r];
    }
    return x;
}

} // namespace

FitResult fit_diffuse_power_lse(const std::vector<double> &a0_observations,
                                const std::vector<std::array<double, 3>> &design_rows,
                                double a_b)
{
    if (a0_observations.size() != design_rows.size())
        throw std::invalid_argument("fit_diffuse_power_lse: observation/design size mismatch");
    if (design_rows.size() < 3)
        throw std::invalid_argument("fit_diffuse_power_lse: need at least 3 rows");

    std::array<std::array<double, 4>, 3> normal{}; // [M^T M | M^T y]
    for (std::size_t i = 0; i < design_rows.size(); ++i)
    {
        const auto &row = design_rows[i];
        const double y = a0_observations[i] - a_b;
        for (int r = 0; r < 3; ++r)
        {
            for (int c = 0; c < 3; ++c)
                normal[r][c] += row[r] * row[c];
            normal[r][3] += row[r] * y;
        }
    }
    const auto c = solve3(normal);

    double ssr = 0.0;
    for (std::size_t i = 0; i < design_rows.size(); ++i)
    {
        const auto &row = design_rows[i];
        const double fitted = row[0] * c[0] + row[1] * c[1] + row[2] * c[2];
        const double r = (a0_observations[i] - a_b) - fitted;
        ssr += r * r;
    }
    const double n = static_cast<double>(design_rows.size());
    const double dof = n > 3 ? n - 3 : 1.0;

    FitResult fit;
    fit.n_samples = design_rows.size();
    fit.residual_norm = std::sqrt(ssr);
    const char *names[3] = {"c_r0", "c_p0", "c_w0"};
    for (int i = 0; i < 3; ++i)
    {
        double v = c[i];
        if (v < 0.0)
        {
            fit.flags.push_back(std::string("clamped: ") + names[i]);
            v = 0.0;
        }
        fit.estimates[names[i]] = v;
    }
    fit.estimates["sigma_a0_db"] = std::sqrt(ssr / dof);
    return fit;
}

namespace {

// E[min(N, 1 + Poisson(mu))] with N = max(1, round(n_bar + sigma Z)).
double expected_realized_clusters(double n_bar, double sigma_nbar, double mu)
{
    const int jmax = static_cast<int>(std::ceil(n_bar + 8.0 * sigma_nbar)) + 4;

    // P(C >= c) for the censoring count C = 1 + Poisson(mu).
    std::vector<double> c_ge(static_cast<std::size_t>(jmax) + 2, 0.0);
    {
        std::vector<double> pmf(static_cast<std::size_t>(jmax) + 2, 0.0);
        double p = std::exp(-mu);
        double tail = 1.0;
        for (int k = 0; k <= jmax; ++k)
        {
            pmf[k] = p;
            tail -= p;
            p *= mu / (k + 1);
        }
        // c_ge[c] = P(C >= c), C = K+1
        double acc = std::max(tail, 0.0);
        for (int c = jmax + 1; c >= 1; --c)
        {
            acc += pmf[c - 1];
            c_ge[c] = std::min(acc, 1.0);
        }
    }
    // E[min(j, C)] = sum_{c=1..j} P(C >= c)
    std::vector<double> e_min(static_cast<std::size_t>(jmax) + 1, 0.0);
    for (int j = 1; j <= jmax; ++j)
        e_min[j] = e_min[j - 1] + c_ge[std::min(j, jmax + 1)];

    auto phi = [](double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); };
    double expectation = 0.0;
    for (int j = 1; j <= jmax; ++j)
    {
        double p_j;
        if (sigma_nbar > 0.0)
        {
            const double hi = phi((j + 0.5 - n_bar) / sigma_nbar);
            const double lo = phi((j - 0.5 - n_bar) / sigma_nbar);
            p_j = (j == 1) ? hi : hi - lo;
        }
        else
            p_j = (j == std::max<long>(1, std::lround(n_bar))) ? 1.0 : 0.0;
        expectation += p_j * e_min[j];
    }
    return expectation;
}

} // namespace

double fit_mean_cluster_count(double observed_mean, double sigma_nbar, double gamma_rate,
                              double scan_ns)
{
    if (observed_mean < 1.0)
        throw std::invalid_argument("fit_mean_cluster_count: realized mean below 1");
    if (gamma_rate <= 0.0)
        throw std::invalid_argument("fit_mean_cluster_count: gamma must be positive");
    const double mu = gamma_rate * scan_ns;
    double lo = 1.0, hi = 60.0;
    if (expected_realized_clusters(hi, sigma_nbar, mu) <= observed_mean)
        return hi;
    if (expected_realized_clusters(lo, sigma_nbar, mu) >= observed_mean)
        return lo;
    for (int it = 0; it < 60; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (expected_realized_clusters(mid, sigma_nbar, mu) < observed_mean)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool RoundtripReport::all_within_tolerance() const
{
    for (const auto &row : rows)
        if (row.tolerance && row.status != "ok")
            return false;
    return true;
}

namespace {

struct ScanStats {
    std::size_t n_clusters = 0;
    bool truncated = false;
    double last_arrival = 0.0;
    double ray_events = 0.0;
    double ray_exposure = 0.0;
    DecayAccumulator decay;
    std::optional<NakagamiFit> nakagami;
    double envelope = 0.0;
};

ScanStats analyze_scan(const Cir &cir)
{
    ScanStats st;
    st.n_clusters = cir.clusters.size();
    st.truncated = cir.cluster_truncated;
    st.last_arrival = cir.clusters.back().arrival_ns;
    for (std::size_t i = 0; i < cir.clusters.size(); ++i)
    {
        const double start = cir.clusters[i].arrival_ns;
        const double horizon = (i + 1 < cir.clusters.size())
                                   ? cir.clusters[i + 1].arrival_ns
                                   : cir.scan_duration_ns;
        st.ray_events += static_cast<double>(cir.clusters[i].taps.size()) - 1.0;
        st.ray_exposure += horizon - start;
    }
    st.decay.add_taps(cir);
    std::vector<double> amps;
    amps.reserve(cir.tap_count());
    for (const auto &c : cir.clusters)
        for (const auto &t : c.taps)
            amps.push_back(cir.effective_amplitude(t));
    if (amps.size() >= 100)
        st.nakagami = fit_nakagami(amps);
    st.envelope = coherent_envelope(cir);
    return st;
}

RoundtripRow checked_row(const std::string &name, double table, double estimate,
                         double tolerance)
{
    RoundtripRow row;
    row.parameter = name;
    row.table_value = table;
    row.estimate = estimate;
    row.rel_error = std::fabs(estimate - table) / std::fabs(table);
    row.tolerance = tolerance;
    row.status = *row.rel_error <= tolerance ? "ok" : "fail";
    return row;
}

RoundtripRow info_row(const std::string &name, std::optional<double> table,
                      std::optional<double> estimate, const std::string &status = "info")
{
    RoundtripRow row;
    row.parameter = name;
    row.table_value = table;
    row.estimate = estimate;
    row.status = status;
    return row;
}

} // namespace

RoundtripReport roundtrip_report(const Scenario &scenario, std::size_t n_scans,
                                 std::uint64_t seed, const RoundtripOptions &options)
{
    if (n_scans == 0)
        throw std::invalid_argument("roundtrip_report: scan count must be >= 1");
    const auto &params = builtin_params(scenario);
    const auto &mp = params.multipath;
    const HurricaneScaling scaling; // defaults; the table rates drive synthesis

    RoundtripReport report;
    report.scenario = scenario;
    report.n_scans = n_scans;
    report.seed = seed;

    std::vector<ScanStats> stats(n_scans);
    const int n_threads = std::max(1, options.threads);
    if (n_threads == 1)
    {
        for (std::size_t s = 0; s < n_scans; ++s)
            stats[s] = analyze_scan(
                synthesize_cir(scenario, mp, scaling, options.synthesis, seed, s));
    }
    else
    {
        std::vector<std::future<void>> work;
        const std::size_t chunk = (n_scans + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t)
        {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n_scans, lo + chunk);
            if (lo >= hi)
                break;
            work.push_back(std::async(std::launch::async, [&, lo, hi]() {
                for (std::size_t s = lo; s < hi; ++s)
                    stats[s] = analyze_scan(
                        synthesize_cir(scenario, mp, scaling, options.synthesis, seed, s));
            }));
        }
        for (auto &w : work)
            w.get();
    }

    // Ordered merge keeps every reduction independent of the thread count.
    double cl_events = 0.0, cl_exposure = 0.0, ray_events = 0.0, ray_exposure = 0.0;
    double count_sum = 0.0;
    DecayAccumulator decay;
    std::vector<NakagamiFit> nak_fits;
    std::vector<double> envelopes;
    envelopes.reserve(n_scans);
    for (const auto &st : stats)
    {
        cl_events += static_cast<double>(st.n_clusters) - 1.0;
        cl_exposure += st.truncated ? kScanDurationNs : st.last_arrival;
        ray_events += st.ray_events;
        ray_exposure += st.ray_exposure;
        count_sum += static_cast<double>(st.n_clusters);
        decay.merge(st.decay);
        if (st.nakagami)
            nak_fits.push_back(*st.nakagami);
        envelopes.push_back(st.envelope);
    }

    // Arrival rates.
    if (cl_events > 0.0 && cl_exposure > 0.0)
    {
        const double gamma_hat = cl_events / cl_exposure;
        report.rows.push_back(
            checked_row("gamma_rate", mp.gamma_rate, gamma_hat, options.rate_tolerance));
        try
        {
            const double nbar_hat = fit_mean_cluster_count(
                count_sum / static_cast<double>(n_scans), mp.sigma_nbar, gamma_hat);
            report.rows.push_back(
                checked_row("n_bar", mp.n_bar, nbar_hat, options.rate_tolerance));
        }
        catch (const std::exception &e)
        {
            report.rows.push_back(info_row("n_bar", mp.n_bar, std::nullopt, e.what()));
        }
    }
    else
    {
        report.rows.push_back(
            info_row("gamma_rate", mp.gamma_rate, std::nullopt, "no cluster gaps observed"));
        report.rows.push_back(info_row("n_bar", mp.n_bar, std::nullopt, "not estimated"));
    }
    if (ray_events > 0.0 && ray_exposure > 0.0)
        report.rows.push_back(checked_row("zeta_rate", mp.zeta_rate,
                                          ray_events / ray_exposure,
                                          options.rate_tolerance));
    else
        report.rows.push_back(
            info_row("zeta_rate", mp.zeta_rate, std::nullopt, "no ray gaps observed"));

    // Decay constants.
    auto decay_fit = decay.finish();
    if (decay_fit.estimates.count("lambda_cap_ns"))
        report.rows.push_back(checked_row("lambda_cap_ns", mp.lambda_cap_ns,
                                          decay_fit.estimates["lambda_cap_ns"],
                                          options.decay_tolerance));
    else
        report.rows.push_back(info_row("lambda_cap_ns", mp.lambda_cap_ns, std::nullopt,
                                       decay_fit.flags.empty() ? "not estimated"
                                                               : decay_fit.flags.front()));
    if (decay_fit.estimates.count("lambda_ray_ns"))
        report.rows.push_back(checked_row("lambda_ray_ns", mp.lambda_ray_ns,
                                          decay_fit.estimates["lambda_ray_ns"],
                                          options.decay_tolerance));
    else
        report.rows.push_back(info_row("lambda_ray_ns", mp.lambda_ray_ns, std::nullopt,
                                       "not estimated"));

    // Small-scale dB statistics (documented convention; informational).
    try
    {
        const auto stats_db = lognormal_m_statistics(nak_fits);
        report.rows.push_back(
            info_row("mu_mf_db", params.small_scale.mu_mf_db, stats_db.mu_mf_db));
        report.rows.push_back(
            info_row("sigma_mf_db", params.small_scale.sigma_mf_db, stats_db.sigma_mf_db));
        report.rows.push_back(
            info_row("mu_sc_db", params.small_scale.mu_sc_db, stats_db.mu_sc_db));
        report.rows.push_back(
            info_row("sigma_sc_db", params.small_scale.sigma_sc_db, stats_db.sigma_sc_db));
    }
    catch (const std::exception &e)
    {
        report.rows.push_back(
            info_row("mu_mf_db", params.small_scale.mu_mf_db, std::nullopt, e.what()));
    }

    // K factor: only defined on LOS paths.
    if (scenario.path_kind() == PathKind::LOS)
    {
        try
        {
            const auto k = estimate_k_factor(envelopes);
            report.rows.push_back(info_row("mu_k_db", mp.mu_k_db,
                                           k.saturated ? std::nullopt
                                                       : std::optional<double>(k.k_db)));
        }
        catch (const std::exception &e)
        {
            report.rows.push_back(info_row("mu_k_db", mp.mu_k_db, std::nullopt, e.what()));
        }
    }
    else
    {
        report.rows.push_back(
            info_row("mu_k_db", std::nullopt, std::nullopt, "absent (NLOS)"));
        report.rows.push_back(
            info_row("sigma_k_db", std::nullopt, std::nullopt, "absent (NLOS)"));
    }
    return report;
}

} // namespace wowuwb
