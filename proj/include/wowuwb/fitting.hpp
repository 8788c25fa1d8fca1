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

#ifndef WOWUWB_FITTING_HPP
#define WOWUWB_FITTING_HPP

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wowuwb/analysis.hpp"
#include "wowuwb/params.hpp"
#include "wowuwb/synthesis.hpp"

namespace wowuwb {

struct FitResult {
    std::map<std::string, double> estimates;
    std::map<std::string, double> standard_errors;
    std::size_t n_samples = 0;
    double residual_norm = 0.0;
    std::vector<std::string> flags;
};

struct NakagamiFit {
    double m = 1.0;
    double omega = 1.0;
};

// OLS of attenuation on wind velocity: estimates alpha, a_w0_db and the
// residual spread sigma_a_db. Needs at least two distinct velocities.
FitResult fit_large_scale(const std::vector<AttenuationSample> &samples);

// Moment estimates m = E^2[W^2]/Var[W^2], Omega = E[W^2]. Needs >= 100
// positive samples with nonzero variance of W^2.
NakagamiFit fit_nakagami(std::span<const double> samples);

// Mean and spread of 10 log10(m) and 10 log10(Omega) across per-scan fits.
// Convention: mu_* is the sample mean of the dB values, sigma_* the sample
// standard deviation (which is nonnegative by construction; the published
// table's negative "variance" entries are not reproducible under any
// spread-like reading and are compared by sign of the means only).
struct LognormalMStats {
    double mu_mf_db = 0.0;
    double sigma_mf_db = 0.0;
    double mu_sc_db = 0.0;
    double sigma_sc_db = 0.0;
};
LognormalMStats lognormal_m_statistics(const std::vector<NakagamiFit> &per_scan_fits);

// m = (K+1)^2 / (2K+1) for linear K >= 0.
double k_to_m(double k_linear);

// Exponential-rate MLE with right-censored spells:
// rate = n_gaps / (sum gaps + sum censored). The censored list may be empty,
// which reduces to 1 / mean gap. Reported standard error is 1/(rate sqrt(n)).
FitResult fit_exponential_rate(std::span<const double> gaps,
                               std::span<const double> censored = {});

// Cluster and ray arrival-rate MLEs pooled over a scan ensemble. Complete
// gaps come from consecutive arrivals; the censored exposure of the cluster
// process is the tail of the scan when the drawn sequence was truncated, and
// every cluster's ray process is censored at its horizon.
FitResult fit_poisson_rates(std::span<const Cir> ensemble);

// Log-linear regression of cluster start powers against cluster delay
// (slope -1/Lambda) and of within-cluster powers against ray offset
// (slope -1/lambda). Both regressions are centered within their group (scan
// for Lambda, cluster for lambda), which removes the per-scan power scale and
// the cluster-level offsets from the slope. Two input paths:
//   add(pdp, seg)  - binned route on the 61 ps grid. Start-bin powers pick up
//                    rays that merge across the bin boundary, which tilts the
//                    Lambda slope when cluster gaps are short relative to the
//                    grid occupancy; fine for well-separated constructions.
//   add_taps(cir)  - tap-domain route on the continuous delays (first-tap
//                    power per cluster, per-ray powers inside each cluster);
//                    free of grid contamination, used by the round trip.
// Streaming accumulator; merging per-scan partials in scan order keeps
// results independent of worker count.
class DecayAccumulator {
  public:
    void add(const Pdp &pdp, const ClusterSegmentation &seg);
    void add_taps(const Cir &cir);
    void merge(const DecayAccumulator &other);
    FitResult finish() const;

  private:
    double cl_sxx_ = 0, cl_sxy_ = 0; // within-scan centered
    std::size_t cl_n_ = 0;
    double ray_sxx_ = 0, ray_sxy_ = 0; // within-cluster centered
    std::size_t ray_n_ = 0;
};

FitResult fit_decay_constants(const std::vector<Pdp> &ensemble,
                              const std::vector<ClusterSegmentation> &segmentations);

// Normal-equation solution of M c = (a0_obs - a_b) with nonnegativity
// enforced by clamping (flagged). sigma_a0_db is the residual spread of the
// unclamped fit. Throws on rank-deficient designs.
FitResult fit_diffuse_power_lse(const std::vector<double> &a0_observations,
                                const std::vector<std::array<double, 3>> &design_rows,
                                double a_b);

// Mean-cluster-count estimate corrected for scan-end truncation: solves
// E[min(N, 1 + Poisson(gamma T))] = observed mean for n_bar, with
// N = max(1, round(n_bar + Normal(0, sigma_nbar^2))).
double fit_mean_cluster_count(double observed_mean, double sigma_nbar,
                              double gamma_rate, double scan_ns = kScanDurationNs);

// One row of the generator-vs-table comparison.
struct RoundtripRow {
    std::string parameter;
    std::optional<double> table_value;
    std::optional<double> estimate;
    std::optional<double> rel_error;
    std::optional<double> tolerance; // set on checked rows
    std::string status;              // "ok", "fail", "absent (NLOS)", "info", error text
};

struct RoundtripReport {
    Scenario scenario;
    std::size_t n_scans = 0;
    std::uint64_t seed = 0;
    std::vector<RoundtripRow> rows;
    bool all_within_tolerance() const;
};

struct RoundtripOptions {
    double rate_tolerance = 0.10;  // gamma, zeta, n_bar
    double decay_tolerance = 0.15; // lambda_cap, lambda_ray
    SynthesisOptions synthesis;
    int threads = 1;
};

// Synthesizes n_scans scans of the builtin scenario column, runs the
// estimators and compares against the table.
RoundtripReport roundtrip_report(const Scenario &scenario, std::size_t n_scans,
                                 std::uint64_t seed, const RoundtripOptions &options = {});

} // namespace wowuwb

#endif
