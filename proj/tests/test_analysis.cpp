#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "wowuwb/analysis.hpp"

using namespace wowuwb;

namespace {

Scenario p1s1_scenario()
{
    Scenario sc;
    sc.position = Position::P1;
    sc.rain = RainState::S1_NoRain;
    sc.wind_mph = 90;
    return sc;
}

Cir single_tap_cir(double delay_ns, double amplitude, double phase = 0.0)
{
    Cir cir;
    cir.scenario = p1s1_scenario();
    Cluster c;
    c.arrival_ns = delay_ns;
    Tap t;
    t.delay_ns = delay_ns;
    t.amplitude = amplitude;
    t.phase_rad = phase;
    c.taps.push_back(t);
    cir.clusters.push_back(std::move(c));
    return cir;
}

// Deterministic dual-exponential burst train: clusters with given start
// delays, rays spaced ray_step over span_ns, powers following the decay.
Cir burst_cir(const std::vector<double> &cluster_starts, double lambda_cap,
              double lambda_ray, double span_ns, double ray_step = 0.2)
{
    Cir cir;
    cir.scenario = p1s1_scenario();
    int ci = 1;
    for (double start : cluster_starts)
    {
        Cluster c;
        c.arrival_ns = start;
        int ri = 1;
        for (double off = 0.0; off < span_ns; off += ray_step)
        {
            Tap t;
            t.delay_ns = start + off;
            t.amplitude = std::sqrt(std::exp(-start / lambda_cap) *
                                    std::exp(-off / lambda_ray));
            t.cluster_index = ci;
            t.ray_index = ri++;
            c.taps.push_back(t);
        }
        cir.clusters.push_back(std::move(c));
        ++ci;
    }
    return cir;
}

} // namespace

TEST_CASE("compute_pdp: |a|^2 binning and exact energy conservation")
{
    auto cir = single_tap_cir(5.0, 2.0);
    auto pdp = compute_pdp(cir);
    CHECK(pdp.bins[82] == 4.0);
    CHECK(pdp.total_energy() == 4.0);

    cir = single_tap_cir(0.0, 1.0);
    CHECK(compute_pdp(cir).total_energy() == 1.0);

    // Random CIR: total energy equals the direct tap-power sum to 1e-12.
    RngStream rng(31, 0, 0);
    Cir rnd;
    rnd.scenario = p1s1_scenario();
    Cluster c;
    c.arrival_ns = 0.0;
    for (int i = 0; i < 500; ++i)
    {
        Tap t;
        t.delay_ns = rng.uniform(99.9);
        t.amplitude = std::exp(rng.normal());
        t.ray_index = i + 1;
        c.taps.push_back(t);
    }
    rnd.clusters.push_back(c);
    double direct = 0.0;
    for (const auto &t : rnd.clusters[0].taps)
        direct += t.amplitude * t.amplitude;
    CHECK(compute_pdp(rnd).total_energy() ==
          doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("empirical_attenuation: ratio identities and errors")
{
    auto cir = single_tap_cir(5.0, 1.0);
    auto pdp = compute_pdp(cir);
    std::vector<Pdp> ens = {pdp, pdp};

    CHECK(empirical_attenuation(ens, ens).attenuation_db == doctest::Approx(0.0));

    Pdp tenth = pdp;
    for (auto &b : tenth.bins)
        b /= 10.0;
    std::vector<Pdp> weak = {tenth, tenth};
    CHECK(empirical_attenuation(weak, ens).attenuation_db == doctest::Approx(10.0));

    std::vector<Pdp> empty;
    CHECK_THROWS(empirical_attenuation(empty, ens));
    Pdp zero = pdp;
    for (auto &b : zero.bins)
        b = 0.0;
    std::vector<Pdp> zeros = {zero};
    CHECK_THROWS(empirical_attenuation(zeros, ens));
}

TEST_CASE("identify_clusters: burst oracles")
{
    // Two exponential bursts separated by a 20 ns silent gap.
    auto two = compute_pdp(burst_cir({5.0, 30.0}, 2.3, 0.8, 5.0));
    CHECK(identify_clusters(two).count() == 2);

    auto one = compute_pdp(burst_cir({5.0}, 2.3, 0.8, 5.0));
    CHECK(identify_clusters(one).count() == 1);

    Pdp silent;
    silent.scenario = p1s1_scenario();
    silent.bins.assign(kScanBins, 0.0);
    CHECK(identify_clusters(silent).count() == 0);

    // Six well-separated equal-head bursts (a long inter-cluster decay keeps
    // every head above the relative noise floor).
    auto six = compute_pdp(burst_cir({0.0, 15.0, 30.0, 45.0, 60.0, 75.0}, 1e9, 0.8, 5.0));
    CHECK(identify_clusters(six).count() == 6);

    // Segments are ordered, non-overlapping, and every supra-floor bin is
    // inside exactly one of them.
    auto seg = identify_clusters(two);
    REQUIRE(seg.count() == 2);
    CHECK(seg.segments[0].end_bin < seg.segments[1].start_bin);
    double peak = 0;
    for (double b : two.bins)
        peak = std::max(peak, b);
    for (int i = 0; i < kScanBins; ++i)
        if (two.bins[i] >= 1e-6 * peak)
        {
            bool inside = false;
            for (const auto &s : seg.segments)
                if (i >= s.start_bin && i <= s.end_bin)
                    inside = true;
            CHECK(inside);
        }
}

TEST_CASE("count_significant_mpcs: threshold rule and scale invariance")
{
    std::vector<double> amps = {1.0, 0.2, 0.1};
    CHECK(count_significant_mpcs(amps) == 2);
    std::vector<double> one = {1.0};
    CHECK(count_significant_mpcs(one) == 1);

    // Scaling all amplitudes leaves the count unchanged.
    RngStream rng(32, 0, 0);
    std::vector<double> rnd(50);
    for (auto &a : rnd)
        a = std::exp(rng.normal());
    const int base = count_significant_mpcs(rnd);
    for (double c : {1e-6, 0.5, 3.0, 1e9})
    {
        auto scaled = rnd;
        for (auto &a : scaled)
            a *= c;
        CHECK(count_significant_mpcs(scaled) == base);
    }
    std::vector<double> none;
    CHECK_THROWS(count_significant_mpcs(none));
}

TEST_CASE("clean_deconvolve: single component, zeros, zero template")
{
    const auto impulse = PulseTemplate::impulse();
    auto cir = single_tap_cir(5.0, 1.0);
    auto wf = render_waveform(cir, impulse);
    auto taps = clean_deconvolve(wf, impulse);
    REQUIRE(taps.size() == 1);
    CHECK(taps[0].amplitude == doctest::Approx(1.0));
    CHECK(taps[0].delay_ns == doctest::Approx(82 * kBinWidthNs));

    ScanWaveform zeros;
    zeros.scenario = p1s1_scenario();
    zeros.samples.assign(kScanBins, 0.0);
    CHECK(clean_deconvolve(zeros, impulse).empty());

    PulseTemplate dead;
    dead.samples = {0.0, 0.0};
    CHECK_THROWS(clean_deconvolve(wf, dead));
}

TEST_CASE("clean_deconvolve inverts render_waveform on separated taps")
{
    const auto pulse = PulseTemplate::default_pulse();
    Cir cir;
    cir.scenario = p1s1_scenario();
    Cluster c;
    c.arrival_ns = 10.0;
    const double amps[3] = {1.0, 0.5, 0.3};
    const double delays[3] = {10.0, 20.0, 33.0};
    for (int i = 0; i < 3; ++i)
    {
        Tap t;
        t.delay_ns = delays[i];
        t.amplitude = amps[i];
        t.phase_rad = 0.0;
        t.ray_index = i + 1;
        c.taps.push_back(t);
    }
    cir.clusters.push_back(c);
    const auto wf = render_waveform(cir, pulse);
    const auto taps = clean_deconvolve(wf, pulse);
    REQUIRE(taps.size() == 3);
    for (int i = 0; i < 3; ++i)
    {
        CHECK(std::fabs(taps[i].amplitude - amps[i]) / amps[i] < 0.01);
        CHECK(std::fabs(taps[i].delay_ns - delays[i]) <= kBinWidthNs + 1e-12);
    }
}

TEST_CASE("estimate_k_factor: Rayleigh floor, Rician recovery, saturation, errors")
{
    RngStream rng(33, 0, 0);
    const auto rayleigh = testsup::rayleigh_samples(100000, 2.7, rng);
    const auto k0 = estimate_k_factor(rayleigh);
    CHECK(!k0.saturated);
    CHECK(k0.k_linear < 0.05);

    // K = 6 dB: nu^2/(2 sigma^2) = 10^0.6 with sigma = 1.
    const double k_lin = std::pow(10.0, 0.6);
    const double nu = std::sqrt(2.0 * k_lin);
    const auto rician = testsup::rician_samples(100000, nu, 1.0, rng);
    const auto k6 = estimate_k_factor(rician);
    CHECK(!k6.saturated);
    CHECK(std::fabs(k6.k_db - 6.0) < 1.0);

    std::vector<double> constant(200, 3.3);
    const auto sat = estimate_k_factor(constant);
    CHECK(sat.saturated);

    std::vector<double> few(50, 1.0);
    CHECK_THROWS(estimate_k_factor(few));
    std::vector<double> neg(200, 1.0);
    neg[7] = -0.1;
    CHECK_THROWS(estimate_k_factor(neg));
}

TEST_CASE("static_background_subtract: mean removal, identity, clamping")
{
    auto base = compute_pdp(single_tap_cir(5.0, 1.0));
    auto other = compute_pdp(single_tap_cir(7.0, 2.0));
    std::vector<Pdp> ens = {base, other};

    // Background equal to the ensemble mean zeroes the residual mean per bin
    // (identical scans, so no clamp fires).
    std::vector<Pdp> uniform = {base, base};
    const auto residual = static_background_subtract(uniform, base);
    for (int i = 0; i < kScanBins; ++i)
        CHECK(0.5 * (residual[0].bins[i] + residual[1].bins[i]) == 0.0);

    Pdp zero;
    zero.scenario = base.scenario;
    zero.bins.assign(kScanBins, 0.0);
    const auto same = static_background_subtract(ens, zero);
    CHECK(same[0].bins == base.bins);
    CHECK(same[1].bins == other.bins);

    Pdp big = base;
    for (auto &b : big.bins)
        b += 100.0;
    const auto clamped = static_background_subtract(ens, big);
    for (double b : clamped[0].bins)
        CHECK(b == 0.0);

    Pdp short_grid;
    short_grid.bins.assign(10, 0.0);
    CHECK_THROWS(static_background_subtract(ens, short_grid));
}

TEST_CASE("apply_rain on a Pdp mirrors the bin-level law")
{
    auto pdp = compute_pdp(single_tap_cir(5.0, 2.0));
    RngStream rng(34, 0, 0);
    const auto same = apply_rain(pdp, 1.0, 0.0, rng);
    CHECK(same.bins == pdp.bins);
    const auto halved = apply_rain(pdp, 0.5, 0.0, rng);
    CHECK(halved.total_energy() == doctest::Approx(0.5 * pdp.total_energy()));
    CHECK(halved.scenario == pdp.scenario);
}

TEST_CASE("coherent_envelope matches the tap sum on simple cases")
{
    auto cir = single_tap_cir(5.0, 2.0);
    CHECK(coherent_envelope(cir) == doctest::Approx(2.0));
    Tap t;
    t.delay_ns = 6.0;
    t.amplitude = 1.0;
    t.phase_rad = 3.14159265358979323846;
    t.ray_index = 2;
    cir.clusters[0].taps.push_back(t);
    CHECK(coherent_envelope(cir) == doctest::Approx(1.0));
}
