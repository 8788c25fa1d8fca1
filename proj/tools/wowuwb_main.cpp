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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wowuwb/analysis.hpp"
#include "wowuwb/fitting.hpp"
#include "wowuwb/io.hpp"
#include "wowuwb/params.hpp"
#include "wowuwb/synthesis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wowuwb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Values from a --config JSON file override the corresponding flags.
void merge_config_file(json &cfg, const std::string &path)
{
    if (path.empty())
        return;
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file: " + path);
    json file;
    try
    {
        in >> file;
    }
    catch (const json::exception &e)
    {
        throw UsageError("config file " + path + ": " + e.what());
    }
    for (const auto &[key, value] : file.items())
        cfg[key] = value;
}

std::vector<double> velocities_from(const json &cfg)
{
    std::vector<double> v = cfg.at("velocities").get<std::vector<double>>();
    if (v.empty())
        throw UsageError("velocity list must not be empty");
    for (double w : v)
        validate_wind(w);
    return v;
}

ParameterSet resolve_params(const json &cfg, const Scenario &sc)
{
    const std::string path = cfg.value("params", "");
    if (path.empty())
        return builtin_params(sc);
    auto tables = io::load_params_file(path);
    auto it = tables.find({sc.position, sc.rain});
    if (it == tables.end())
        throw std::runtime_error("parameter file has no column for " + sc.label());
    return it->second;
}

PulseTemplate resolve_template(const json &cfg)
{
    const std::string path = cfg.value("template", "");
    return path.empty() ? PulseTemplate::default_pulse() : PulseTemplate::from_csv(path);
}

SynthesisOptions synthesis_options_from(const json &cfg, const ParameterSet &params)
{
    SynthesisOptions opt;
    opt.pdp_jitter = cfg.value("pdp_jitter", true);
    opt.arrival_jitter = cfg.value("arrival_jitter", false);
    if (cfg.value("apply_large_scale", true))
        opt.large_scale = params.large_scale;
    return opt;
}

int run_synth(const json &cfg)
{
    Scenario scenario = scenario_from_label(cfg.at("scenario").get<std::string>());
    const auto params = resolve_params(cfg, scenario);
    const std::size_t n_scans = cfg.at("scans").get<std::size_t>();
    if (n_scans < 1)
        throw UsageError("scan count must be >= 1");
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const auto velocities = velocities_from(cfg);
    const std::size_t n_ref = cfg.value("reference_scans", n_scans);
    const int threads = std::max(1, cfg.value("threads", 1));
    const fs::path out_dir = cfg.at("out").get<std::string>();
    fs::create_directories(out_dir);

    const auto options = synthesis_options_from(cfg, params);
    const HurricaneScaling scaling;

    // Scan layout: one block per velocity, then the unattenuated reference
    // block; the global scan index alone determines every draw.
    struct Slot {
        double wind;
        bool reference;
    };
    std::vector<Slot> slots;
    for (double v : velocities)
        for (std::size_t s = 0; s < n_scans; ++s)
            slots.push_back({v, false});
    for (std::size_t s = 0; s < n_ref; ++s)
        slots.push_back({Scenario::kReferenceWindMph, true});

    std::vector<Cir> scans(slots.size());
    auto generate = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
        {
            Scenario sc = scenario;
            sc.wind_mph = slots[i].wind;
            SynthesisOptions opt = options;
            if (slots[i].reference)
                opt.large_scale.reset();
            scans[i] = synthesize_cir(sc, params.multipath, scaling, opt, seed, i);
        }
    };
    if (threads == 1)
        generate(0, slots.size());
    else
    {
        std::vector<std::future<void>> work;
        const std::size_t chunk = (slots.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t)
        {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(slots.size(), lo + chunk);
            if (lo >= hi)
                break;
            work.push_back(std::async(std::launch::async, generate, lo, hi));
        }
        for (auto &w : work)
            w.get();
    }

    io::ScanFileHeader header;
    header.schema = io::kScansSchema;
    header.config = cfg;
    // Placement and scheduling knobs must not change a single output byte.
    header.config.erase("threads");
    header.config.erase("out");
    header.config["path_kind"] =
        scenario.path_kind() == PathKind::NLOS ? "NLOS" : "LOS";
    header.config_hash = io::config_hash(header.config);
    header.scenario = scenario;
    header.master_seed = seed;

    const auto scan_path = (out_dir / "scans.jsonl").string();
    io::write_scan_file(scan_path, header, scans);
    io::write_manifest((out_dir / "manifest.json").string(), "synth", header.config,
                       {"scans.jsonl"});
    std::cout << "wrote " << scans.size() << " scans to " << scan_path << "\n";
    return kExitOk;
}

int run_analyze(const json &cfg)
{
    const std::string in_path = cfg.at("in").get<std::string>();
    const fs::path out_dir = cfg.at("out").get<std::string>();
    const auto pulse = resolve_template(cfg);
    const auto file = io::read_scan_file(in_path);
    if (file.scans.empty())
        throw std::runtime_error(in_path + ": no scans");
    fs::create_directories(out_dir / "pdp");

    json eff_cfg = cfg;
    eff_cfg.erase("out");
    const std::string hash = io::config_hash(eff_cfg);

    // Per-scan PDPs.
    std::vector<Pdp> pdps;
    pdps.reserve(file.scans.size());
    for (const auto &cir : file.scans)
        pdps.push_back(compute_pdp(cir));
    for (std::size_t i = 0; i < pdps.size(); ++i)
    {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(pdps[i].bins.size());
        for (int b = 0; b < kScanBins; ++b)
            rows.push_back({io::format_double(b * kBinWidthNs),
                            io::format_double(pdps[i].bins[b])});
        char name[32];
        std::snprintf(name, sizeof name, "scan_%06zu.csv", i);
        io::write_csv((out_dir / "pdp" / name).string(), io::kPdpSchema, hash,
                      "bin_ns,power", rows);
    }

    // Cluster segmentations from the sliding-window detector.
    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < pdps.size(); ++i)
        {
            const auto seg = identify_clusters(pdps[i]);
            int ci = 1;
            for (const auto &s : seg.segments)
                rows.push_back({std::to_string(i), std::to_string(ci++),
                                io::format_double(s.start_bin * kBinWidthNs),
                                io::format_double(s.end_bin * kBinWidthNs),
                                io::format_double(s.peak_power)});
        }
        io::write_csv((out_dir / "segments.csv").string(), io::kPdpSchema, hash,
                      "scan_index,cluster,start_ns,end_ns,peak_power", rows);
    }

    // Group scans by wind velocity.
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < file.scans.size(); ++i)
        groups[file.scans[i].scenario.wind_mph].push_back(i);
    const auto ref_it = groups.find(Scenario::kReferenceWindMph);

    // Attenuation vs velocity (needs the reference block).
    {
        std::vector<std::vector<std::string>> rows;
        if (ref_it == groups.end())
            throw std::runtime_error(in_path + ": no reference scans (wind 1.86 mph); "
                                               "cannot compute attenuation");
        std::vector<Pdp> ref;
        for (auto i : ref_it->second)
            ref.push_back(pdps[i]);
        for (const auto &[wind, idx] : groups)
        {
            if (wind == Scenario::kReferenceWindMph)
                continue;
            std::vector<Pdp> ens;
            for (auto i : idx)
                ens.push_back(pdps[i]);
            const auto att = empirical_attenuation(ens, ref);
            rows.push_back({io::format_double(wind), io::format_double(att.attenuation_db)});
        }
        io::write_csv((out_dir / "attenuation.csv").string(), io::kAttenuationSchema, hash,
                      "wind_mph,attenuation_db", rows);
    }

    // Significant-MPC counts: the measurement-chain count (render + CLEAN)
    // next to the raw tap-domain count.
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto &[wind, idx] : groups)
        {
            double mean_clean = 0.0, mean_taps = 0.0;
            for (auto i : idx)
            {
                mean_clean += significant_mpcs_via_clean(file.scans[i], pulse);
                mean_taps += count_significant_mpcs(file.scans[i]);
            }
            mean_clean /= static_cast<double>(idx.size());
            mean_taps /= static_cast<double>(idx.size());
            rows.push_back({io::format_double(wind), io::format_double(mean_clean),
                            io::format_double(mean_taps),
                            std::to_string(idx.size())});
        }
        io::write_csv((out_dir / "mpc_summary.csv").string(), io::kMpcSchema, hash,
                      "wind_mph,mean_significant_mpcs_clean,mean_significant_mpcs_taps,n_scans",
                      rows);
    }

    // K-factor summary (LOS only; NLOS rows are explicit absent markers).
    // mean_model_k_db averages the per-scan defining ratio B0/(2 A0); the
    // envelope column is the moment estimate over the group's coherent scan
    // envelopes, which cross-scan power variation pushes toward its zero
    // floor.
    {
        std::vector<std::vector<std::string>> rows;
        const bool los = file.header.scenario.path_kind() == PathKind::LOS;
        for (const auto &[wind, idx] : groups)
        {
            if (!los)
            {
                rows.push_back({io::format_double(wind), "", "", "absent (NLOS)"});
                continue;
            }
            double k_model = 0.0;
            std::vector<double> env;
            env.reserve(idx.size());
            for (auto i : idx)
            {
                const auto &cir = file.scans[i];
                k_model += 10.0 * std::log10(cir.b0_power / (2.0 * cir.a0_power));
                env.push_back(coherent_envelope(cir));
            }
            k_model /= static_cast<double>(idx.size());
            std::string env_cell, status = "ok";
            if (env.size() < 100)
                status = "insufficient samples (<100)";
            else
            {
                const auto k = estimate_k_factor(env);
                if (k.saturated)
                    status = "saturated";
                else
                    env_cell = io::format_double(k.k_db);
            }
            rows.push_back({io::format_double(wind), io::format_double(k_model),
                            env_cell, status});
        }
        io::write_csv((out_dir / "kfactor.csv").string(), io::kKFactorSchema, hash,
                      "wind_mph,mean_model_k_db,envelope_k_db,status", rows);
    }

    io::write_manifest((out_dir / "manifest.json").string(), "analyze", eff_cfg,
                       {"pdp/", "segments.csv", "attenuation.csv", "mpc_summary.csv",
                        "kfactor.csv"});
    std::cout << "analyzed " << file.scans.size() << " scans into " << out_dir.string()
              << "\n";
    return kExitOk;
}

int run_fit(const json &cfg)
{
    const std::string in_path = cfg.at("in").get<std::string>();
    const fs::path out_dir = cfg.at("out").get<std::string>();
    const auto file = io::read_scan_file(in_path);
    if (file.scans.empty())
        throw std::runtime_error(in_path + ": no scans");
    fs::create_directories(out_dir);
    json eff_cfg = cfg;
    eff_cfg.erase("out");
    const std::string hash = io::config_hash(eff_cfg);

    json result = {{"schema", io::kFitSchema},
                   {"config_hash", hash},
                   {"scenario", file.header.scenario.label()}};
    std::vector<std::vector<std::string>> rows;
    auto add_row = [&](const std::string &name, double value, const std::string &status) {
        rows.push_back({name, io::format_double(value), status});
    };

    try
    {
        const auto rates = fit_poisson_rates(file.scans);
        result["rates"] = io::fit_result_to_json(rates);
        add_row("gamma_hat", rates.estimates.at("gamma_hat"), "ok");
        add_row("zeta_hat", rates.estimates.at("zeta_hat"), "ok");

        double mean_count = 0.0, ss = 0.0;
        for (const auto &cir : file.scans)
            mean_count += static_cast<double>(cir.clusters.size());
        mean_count /= static_cast<double>(file.scans.size());
        for (const auto &cir : file.scans)
        {
            double d = static_cast<double>(cir.clusters.size()) - mean_count;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / std::max<std::size_t>(1, file.scans.size() - 1));
        const double nbar =
            fit_mean_cluster_count(mean_count, sd, rates.estimates.at("gamma_hat"));
        result["n_bar_hat"] = nbar;
        result["mean_realized_clusters"] = mean_count;
        add_row("n_bar_hat", nbar, "ok");
    }
    catch (const std::exception &e)
    {
        rows.push_back({"rates", "", e.what()});
        result["rates_error"] = e.what();
    }

    // Decay constants on the tap-domain route (continuous delays from the
    // scan records; no grid contamination).
    {
        DecayAccumulator acc;
        for (const auto &cir : file.scans)
            acc.add_taps(cir);
        const auto decay = acc.finish();
        result["decay"] = io::fit_result_to_json(decay);
        for (const char *name : {"lambda_cap_ns", "lambda_ray_ns"})
        {
            auto it = decay.estimates.find(name);
            if (it != decay.estimates.end())
                add_row(name, it->second, "ok");
            else
                rows.push_back({name, "", "not estimated"});
        }
    }

    // Small-scale statistics.
    try
    {
        std::vector<NakagamiFit> fits;
        for (const auto &cir : file.scans)
        {
            std::vector<double> amps;
            amps.reserve(cir.tap_count());
            for (const auto &c : cir.clusters)
                for (const auto &t : c.taps)
                    amps.push_back(cir.effective_amplitude(t));
            if (amps.size() >= 100)
                fits.push_back(fit_nakagami(amps));
        }
        const auto stats = lognormal_m_statistics(fits);
        result["small_scale"] = {{"mu_mf_db", stats.mu_mf_db},
                                 {"sigma_mf_db", stats.sigma_mf_db},
                                 {"mu_sc_db", stats.mu_sc_db},
                                 {"sigma_sc_db", stats.sigma_sc_db},
                                 {"n_scans_fitted", fits.size()}};
        add_row("mu_mf_db", stats.mu_mf_db, "ok");
        add_row("sigma_mf_db", stats.sigma_mf_db, "ok");
        add_row("mu_sc_db", stats.mu_sc_db, "ok");
        add_row("sigma_sc_db", stats.sigma_sc_db, "ok");
    }
    catch (const std::exception &e)
    {
        rows.push_back({"small_scale", "", e.what()});
        result["small_scale_error"] = e.what();
    }

    // K factor from coherent envelopes (LOS only).
    if (file.header.scenario.path_kind() == PathKind::LOS)
    {
        try
        {
            std::vector<double> env;
            env.reserve(file.scans.size());
            for (const auto &cir : file.scans)
                env.push_back(coherent_envelope(cir));
            const auto k = estimate_k_factor(env);
            result["k_factor"] = {{"k_linear", k.saturated ? -1.0 : k.k_linear},
                                  {"saturated", k.saturated}};
            if (!k.saturated && k.k_linear > 0.0)
                add_row("k_db", k.k_db, "ok");
            else
                rows.push_back({"k_db", "", k.saturated ? "saturated" : "zero"});
        }
        catch (const std::exception &e)
        {
            rows.push_back({"k_db", "", e.what()});
        }
    }
    else
        rows.push_back({"k_db", "", "absent (NLOS)"});

    {
        std::ofstream out(out_dir / "fit.json", std::ios::binary);
        out << result.dump(2) << "\n";
    }
    io::write_csv((out_dir / "fit.csv").string(), io::kFitSchema, hash,
                  "parameter,estimate,status", rows);
    io::write_manifest((out_dir / "manifest.json").string(), "fit", eff_cfg,
                       {"fit.json", "fit.csv"});
    std::cout << "fit results written to " << (out_dir / "fit.csv").string() << "\n";
    return kExitOk;
}

int run_roundtrip(const json &cfg)
{
    Scenario scenario = scenario_from_label(cfg.at("scenario").get<std::string>());
    scenario.wind_mph = 90.0; // rates and decays are velocity-free
    const std::size_t n_scans = cfg.at("scans").get<std::size_t>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const fs::path out_dir = cfg.at("out").get<std::string>();
    fs::create_directories(out_dir);

    RoundtripOptions options;
    options.threads = std::max(1, cfg.value("threads", 1));
    if (cfg.contains("tolerance"))
    {
        const double tol = cfg.at("tolerance").get<double>();
        if (tol <= 0.0)
            throw UsageError("tolerance must be positive");
        options.rate_tolerance = tol;
        options.decay_tolerance = tol;
    }
    options.synthesis.pdp_jitter = cfg.value("pdp_jitter", true);

    const auto report = roundtrip_report(scenario, n_scans, seed, options);

    json eff_cfg = cfg;
    eff_cfg.erase("threads");
    eff_cfg.erase("out");
    const std::string hash = io::config_hash(eff_cfg);
    io::write_roundtrip_csv((out_dir / "roundtrip.csv").string(), hash, report);
    {
        std::ofstream out(out_dir / "roundtrip.json", std::ios::binary);
        out << io::roundtrip_to_json(report, hash).dump(2) << "\n";
    }
    io::write_manifest((out_dir / "manifest.json").string(), "roundtrip", eff_cfg,
                       {"roundtrip.csv", "roundtrip.json"});

    for (const auto &row : report.rows)
    {
        std::cout << row.parameter;
        if (row.table_value)
            std::cout << " table=" << io::format_double(*row.table_value);
        if (row.estimate)
            std::cout << " estimate=" << io::format_double(*row.estimate);
        if (row.rel_error)
            std::cout << " rel_error=" << io::format_double(*row.rel_error);
        std::cout << " [" << row.status << "]\n";
    }
    const bool pass = report.all_within_tolerance();
    std::cout << (pass ? "PASS" : "FAIL") << " " << scenario.label() << " over "
              << n_scans << " scans\n";
    return pass ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"wow-uwb: stochastic UWB channel simulator for hurricane conditions"};
    app.require_subcommand(1);

    // synth
    auto *synth = app.add_subcommand("synth", "generate a scan ensemble");
    std::string synth_scenario = "P1,S1", synth_out = "out", synth_params, synth_config;
    std::uint64_t synth_seed = 1;
    std::size_t synth_scans = 100;
    std::vector<double> synth_velocities = hurricane_wind_steps();
    int synth_threads = 1;
    synth->add_option("--scenario", synth_scenario, "scenario label, e.g. P1,S1");
    synth->add_option("--scans", synth_scans, "scans per velocity")->check(CLI::Range(1u, 10000000u));
    synth->add_option("--seed", synth_seed, "master seed");
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--params", synth_params, "parameter-set JSON file");
    synth->add_option("--velocities", synth_velocities, "wind velocities (mph)")
        ->delimiter(',');
    synth->add_option("--threads", synth_threads, "worker threads");
    synth->add_option("--config", synth_config, "JSON config file (overrides flags)");

    // analyze
    auto *analyze = app.add_subcommand("analyze", "derive PDPs, attenuation, MPC and K summaries");
    std::string an_in, an_out = "out", an_template, an_config;
    analyze->add_option("--in", an_in, "scans.jsonl from synth")->required();
    analyze->add_option("--out", an_out, "output directory");
    analyze->add_option("--template", an_template, "pulse template CSV");
    analyze->add_option("--config", an_config, "JSON config file (overrides flags)");

    // fit
    auto *fit = app.add_subcommand("fit", "estimate model parameters from an ensemble");
    std::string fit_in, fit_out = "out", fit_config;
    fit->add_option("--in", fit_in, "scans.jsonl from synth")->required();
    fit->add_option("--out", fit_out, "output directory");
    fit->add_option("--config", fit_config, "JSON config file (overrides flags)");

    // roundtrip
    auto *rt = app.add_subcommand("roundtrip", "synthesize and recover the table column");
    std::string rt_scenario = "P1,S1", rt_out = "out", rt_config;
    std::uint64_t rt_seed = 1;
    std::size_t rt_scans = 10000;
    double rt_tolerance = -1.0;
    int rt_threads = 1;
    rt->add_option("--scenario", rt_scenario, "scenario label, e.g. P1,S1");
    rt->add_option("--scans", rt_scans, "ensemble size")->check(CLI::Range(1u, 10000000u));
    rt->add_option("--seed", rt_seed, "master seed");
    rt->add_option("--out", rt_out, "output directory");
    rt->add_option("--tolerance", rt_tolerance, "override all checked tolerances");
    rt->add_option("--threads", rt_threads, "worker threads");
    rt->add_option("--config", rt_config, "JSON config file (overrides flags)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (synth->parsed())
        {
            json cfg = {{"scenario", synth_scenario}, {"scans", synth_scans},
                        {"seed", synth_seed},         {"out", synth_out},
                        {"params", synth_params},     {"velocities", synth_velocities},
                        {"threads", synth_threads}};
            merge_config_file(cfg, synth_config);
            return run_synth(cfg);
        }
        if (analyze->parsed())
        {
            json cfg = {{"in", an_in}, {"out", an_out}, {"template", an_template}};
            merge_config_file(cfg, an_config);
            return run_analyze(cfg);
        }
        if (fit->parsed())
        {
            json cfg = {{"in", fit_in}, {"out", fit_out}};
            merge_config_file(cfg, fit_config);
            return run_fit(cfg);
        }
        if (rt->parsed())
        {
            json cfg = {{"scenario", rt_scenario}, {"scans", rt_scans},
                        {"seed", rt_seed},         {"out", rt_out},
                        {"threads", rt_threads}};
            if (rt_tolerance > 0.0)
                cfg["tolerance"] = rt_tolerance;
            merge_config_file(cfg, rt_config);
            return run_roundtrip(cfg);
        }
    }
    catch (const UsageError &e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}
