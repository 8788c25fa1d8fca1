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

#include "wowuwb/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wowuwb::io {

using nlohmann::json;

std::string config_hash(const json &config)
{
    const std::string dump = config.dump(); // nlohmann objects iterate sorted
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : dump)
    {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

json opt_to_json(const std::optional<double> &v)
{
    return v ? json(*v) : json(nullptr);
}

std::optional<double> opt_from_json(const json &j, const char *key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace

json to_json(const MultipathParams &p)
{
    return {{"n_bar", p.n_bar},
            {"gamma_rate", p.gamma_rate},
            {"zeta_rate", p.zeta_rate},
            {"lambda_cap_ns", p.lambda_cap_ns},
            {"lambda_ray_ns", p.lambda_ray_ns},
            {"sigma_a_db", p.sigma_a_db},
            {"sigma_nbar", p.sigma_nbar},
            {"sigma_c_ns", p.sigma_c_ns},
            {"sigma_m_ns", p.sigma_m_ns},
            {"sigma_p_db", p.sigma_p_db},
            {"sigma_mp_db", p.sigma_mp_db},
            {"sigma_r_db", opt_to_json(p.sigma_r_db)},
            {"sigma_a0_db", p.sigma_a0_db},
            {"sigma_df_db", p.sigma_df_db},
            {"mu_df_db", p.mu_df_db},
            {"sigma_dr_db", opt_to_json(p.sigma_dr_db)},
            {"mu_dr_db", opt_to_json(p.mu_dr_db)},
            {"sigma_k_db", opt_to_json(p.sigma_k_db)},
            {"mu_k_db", opt_to_json(p.mu_k_db)}};
}

json to_json(const LargeScaleParams &p)
{
    return {{"alpha", p.alpha}, {"a_w0_db", p.a_w0_db}, {"sigma_a_db", p.sigma_a_db}};
}

json to_json(const SmallScaleParams &p)
{
    return {{"mu_mf_db", p.mu_mf_db},
            {"sigma_mf_db", p.sigma_mf_db},
            {"mu_sc_db", p.mu_sc_db},
            {"sigma_sc_db", p.sigma_sc_db}};
}

json to_json(const ParameterSet &p)
{
    return {{"multipath", to_json(p.multipath)},
            {"large_scale", to_json(p.large_scale)},
            {"small_scale", to_json(p.small_scale)}};
}

MultipathParams multipath_from_json(const json &j)
{
    MultipathParams p;
    p.n_bar = j.at("n_bar").get<double>();
    p.gamma_rate = j.at("gamma_rate").get<double>();
    p.zeta_rate = j.at("zeta_rate").get<double>();
    p.lambda_cap_ns = j.at("lambda_cap_ns").get<double>();
    p.lambda_ray_ns = j.at("lambda_ray_ns").get<double>();
    p.sigma_a_db = j.at("sigma_a_db").get<double>();
    p.sigma_nbar = j.at("sigma_nbar").get<double>();
    p.sigma_c_ns = j.at("sigma_c_ns").get<double>();
    p.sigma_m_ns = j.at("sigma_m_ns").get<double>();
    p.sigma_p_db = j.at("sigma_p_db").get<double>();
    p.sigma_mp_db = j.at("sigma_mp_db").get<double>();
    p.sigma_r_db = opt_from_json(j, "sigma_r_db");
    p.sigma_a0_db = j.at("sigma_a0_db").get<double>();
    p.sigma_df_db = j.at("sigma_df_db").get<double>();
    p.mu_df_db = j.at("mu_df_db").get<double>();
    p.sigma_dr_db = opt_from_json(j, "sigma_dr_db");
    p.mu_dr_db = opt_from_json(j, "mu_dr_db");
    p.sigma_k_db = opt_from_json(j, "sigma_k_db");
    p.mu_k_db = opt_from_json(j, "mu_k_db");
    return p;
}

LargeScaleParams large_scale_from_json(const json &j)
{
    return {j.at("alpha").get<double>(), j.at("a_w0_db").get<double>(),
            j.at("sigma_a_db").get<double>()};
}

SmallScaleParams small_scale_from_json(const json &j)
{
    return {j.at("mu_mf_db").get<double>(), j.at("sigma_mf_db").get<double>(),
            j.at("mu_sc_db").get<double>(), j.at("sigma_sc_db").get<double>()};
}

ParameterSet parameter_set_from_json(const json &j)
{
    return {multipath_from_json(j.at("multipath")),
            large_scale_from_json(j.at("large_scale")),
            small_scale_from_json(j.at("small_scale"))};
}

json params_file_to_json(const std::map<ScenarioKey, ParameterSet> &tables)
{
    json columns = json::object();
    for (const auto &[key, set] : tables)
    {
        const std::string label = to_string(key.first) + "," + to_string(key.second);
        columns[label] = to_json(set);
    }
    return {{"schema", kParamsSchema}, {"columns", columns}};
}

std::map<ScenarioKey, ParameterSet> params_file_from_json(const json &j)
{
    if (!j.contains("schema") || j.at("schema") != kParamsSchema)
        throw std::runtime_error(std::string("parameter file schema mismatch (expected ") +
                                 kParamsSchema + ")");
    std::map<ScenarioKey, ParameterSet> tables;
    for (const auto &[label, value] : j.at("columns").items())
    {
        const Scenario sc = scenario_from_label(label);
        tables[{sc.position, sc.rain}] = parameter_set_from_json(value);
    }
    return tables;
}

void save_params_file(const std::string &path,
                      const std::map<ScenarioKey, ParameterSet> &tables)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << params_file_to_json(tables).dump(2) << "\n";
}

std::map<ScenarioKey, ParameterSet> load_params_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return params_file_from_json(j);
}

json cir_to_json(const Cir &cir)
{
    json clusters = json::array();
    for (const auto &c : cir.clusters)
    {
        json taps = json::array();
        for (const auto &t : c.taps)
            taps.push_back(json::array({t.delay_ns, t.amplitude, t.phase_rad}));
        clusters.push_back({{"arrival_ns", c.arrival_ns}, {"taps", std::move(taps)}});
    }
    return {{"scan_index", cir.scan_index},
            {"wind_mph", cir.scenario.wind_mph},
            {"b0_power", cir.b0_power},
            {"a0_power", cir.a0_power},
            {"large_scale_db", cir.large_scale_db},
            {"cluster_truncated", cir.cluster_truncated},
            {"clusters", std::move(clusters)}};
}

Cir cir_from_json(const json &j, const ScanFileHeader &header)
{
    Cir cir;
    cir.scenario = header.scenario;
    cir.scenario.wind_mph = j.at("wind_mph").get<double>();
    cir.master_seed = header.master_seed;
    cir.scan_index = j.at("scan_index").get<std::uint64_t>();
    cir.b0_power = j.at("b0_power").get<double>();
    cir.a0_power = j.at("a0_power").get<double>();
    cir.large_scale_db = j.value("large_scale_db", 0.0);
    cir.cluster_truncated = j.at("cluster_truncated").get<bool>();
    int ci = 1;
    for (const auto &jc : j.at("clusters"))
    {
        Cluster c;
        c.arrival_ns = jc.at("arrival_ns").get<double>();
        int ri = 1;
        for (const auto &jt : jc.at("taps"))
        {
            Tap t;
            t.delay_ns = jt.at(0).get<double>();
            t.amplitude = jt.at(1).get<double>();
            t.phase_rad = jt.at(2).get<double>();
            t.cluster_index = ci;
            t.ray_index = ri++;
            c.taps.push_back(t);
        }
        cir.clusters.push_back(std::move(c));
        ++ci;
    }
    return cir;
}

void write_scan_file(const std::string &path, const ScanFileHeader &header,
                     const std::vector<Cir> &scans)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    json h = {{"schema", kScansSchema},
              {"config_hash", header.config_hash},
              {"scenario", header.scenario.label()},
              {"master_seed", header.master_seed},
              {"n_scans", scans.size()},
              {"config", header.config}};
    out << h.dump() << "\n";
    for (const auto &cir : scans)
        out << cir_to_json(cir).dump() << "\n";
}

ScanFile read_scan_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    ScanFile file;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty scan file");
    ++line_no;
    json h;
    try
    {
        h = json::parse(line);
    }
    catch (const json::exception &e)
    {
        throw std::runtime_error(path + ": line 1: corrupt header: " + e.what());
    }
    if (!h.contains("schema") || h.at("schema") != kScansSchema)
        throw std::runtime_error(path + ": schema mismatch (expected " +
                                 std::string(kScansSchema) + ")");
    file.header.schema = h.at("schema").get<std::string>();
    file.header.config_hash = h.value("config_hash", "");
    file.header.scenario = scenario_from_label(h.at("scenario").get<std::string>());
    file.header.master_seed = h.at("master_seed").get<std::uint64_t>();
    file.header.config = h.value("config", json::object());
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        try
        {
            file.scans.push_back(cir_from_json(json::parse(line), file.header));
        }
        catch (const json::exception &e)
        {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": corrupt scan record: " + e.what());
        }
    }
    return file;
}

void write_csv(const std::string &path, const std::string &schema,
               const std::string &hash, const std::string &header_line,
               const std::vector<std::vector<std::string>> &rows)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "# schema=" << schema << " config_hash=" << hash << "\n";
    out << header_line << "\n";
    for (const auto &row : rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i)
                out << ",";
            out << row[i];
        }
        out << "\n";
    }
}

json fit_result_to_json(const FitResult &fit)
{
    json estimates = json::object(), ses = json::object();
    for (const auto &[k, v] : fit.estimates)
        estimates[k] = v;
    for (const auto &[k, v] : fit.standard_errors)
        ses[k] = v;
    return {{"estimates", estimates},
            {"standard_errors", ses},
            {"n_samples", fit.n_samples},
            {"residual_norm", fit.residual_norm},
            {"flags", fit.flags}};
}

json roundtrip_to_json(const RoundtripReport &report, const std::string &hash)
{
    json rows = json::array();
    for (const auto &row : report.rows)
        rows.push_back({{"parameter", row.parameter},
                        {"table_value", opt_to_json(row.table_value)},
                        {"estimate", opt_to_json(row.estimate)},
                        {"rel_error", opt_to_json(row.rel_error)},
                        {"tolerance", opt_to_json(row.tolerance)},
                        {"status", row.status}});
    return {{"schema", kRoundtripSchema},
            {"config_hash", hash},
            {"scenario", report.scenario.label()},
            {"n_scans", report.n_scans},
            {"seed", report.seed},
            {"rows", rows},
            {"pass", report.all_within_tolerance()}};
}

void write_roundtrip_csv(const std::string &path, const std::string &hash,
                         const RoundtripReport &report)
{
    std::vector<std::vector<std::string>> rows;
    auto cell = [](const std::optional<double> &v) {
        return v ? format_double(*v) : std::string();
    };
    for (const auto &row : report.rows)
        rows.push_back({row.parameter, cell(row.table_value), cell(row.estimate),
                        cell(row.rel_error), cell(row.tolerance), row.status});
    write_csv(path, kRoundtripSchema, hash,
              "parameter,table_value,estimate,rel_error,tolerance,status", rows);
}

void write_manifest(const std::string &path, const std::string &command,
                    const json &config, const std::vector<std::string> &outputs)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    json m = {{"schema", kManifestSchema},
              {"command", command},
              {"config", config},
              {"config_hash", config_hash(config)},
              {"outputs", outputs}};
    out << m.dump(2) << "\n";
}

} // namespace wowuwb::io
