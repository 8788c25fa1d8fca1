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

#include "wowuwb/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace wowuwb {

std::string to_string(Position p)
{
    switch (p)
    {
    case Position::P1:
        return "P1";
    case Position::P2:
        return "P2";
    default:
        return "P3";
    }
}

std::string to_string(RainState s)
{
    return s == RainState::S1_NoRain ? "S1" : "S2";
}

Position position_from_string(const std::string &s)
{
    if (s == "P1" || s == "p1")
        return Position::P1;
    if (s == "P2" || s == "p2")
        return Position::P2;
    if (s == "P3" || s == "p3")
        return Position::P3;
    throw std::invalid_argument("unknown position '" + s + "' (expected P1, P2 or P3)");
}

RainState rain_from_string(const std::string &s)
{
    if (s == "S1" || s == "s1")
        return RainState::S1_NoRain;
    if (s == "S2" || s == "s2")
        return RainState::S2_Rain;
    throw std::invalid_argument("unknown rain state '" + s + "' (expected S1 or S2)");
}

std::string Scenario::label() const
{
    return to_string(position) + "," + to_string(rain);
}

const std::vector<double> &hurricane_wind_steps()
{
    static const std::vector<double> steps = {90, 100, 110, 120, 130, 140};
    return steps;
}

void validate_wind(double wind_mph)
{
    if (wind_mph == Scenario::kReferenceWindMph)
        return;
    const auto &steps = hurricane_wind_steps();
    if (std::find(steps.begin(), steps.end(), wind_mph) == steps.end())
        throw std::invalid_argument(
            "wind velocity must be one of {90,...,140} mph or the 1.86 mph reference");
}

Scenario scenario_from_label(const std::string &label)
{
    std::string s;
    for (char c : label)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != ',' && c != '-' && c != '_')
            s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (s.size() != 4 || s[0] != 'P' || s[2] != 'S')
        throw std::invalid_argument("bad scenario '" + label + "' (expected e.g. \"P1,S1\")");
    Scenario sc;
    sc.position = position_from_string(s.substr(0, 2));
    sc.rain = rain_from_string(s.substr(2, 2));
    return sc;
}

namespace {

// The six published columns, in P1,S1 / P1,S2 / P2,S1 / P2,S2 / P3,S1 / P3,S2
// order. Absent cells stay unset.
std::map<ScenarioKey, ParameterSet> make_tables()
{
    auto mp = [](double n_bar, double gamma, double zeta, double lcap, double lray,
                 double sa, double snbar, double sc, double sm, double sp, double smp,
                 std::optional<double> sr, double sa0, double sdf, double mdf,
                 std::optional<double> sdr, std::optional<double> mdr,
                 std::optional<double> sk, std::optional<double> mk) {
        MultipathParams m;
        m.n_bar = n_bar;
        m.gamma_rate = gamma;
        m.zeta_rate = zeta;
        m.lambda_cap_ns = lcap;
        m.lambda_ray_ns = lray;
        m.sigma_a_db = sa;
        m.sigma_nbar = snbar;
        m.sigma_c_ns = sc;
        m.sigma_m_ns = sm;
        m.sigma_p_db = sp;
        m.sigma_mp_db = smp;
        m.sigma_r_db = sr;
        m.sigma_a0_db = sa0;
        m.sigma_df_db = sdf;
        m.mu_df_db = mdf;
        m.sigma_dr_db = sdr;
        m.mu_dr_db = mdr;
        m.sigma_k_db = sk;
        m.mu_k_db = mk;
        return m;
    };
    constexpr auto none = std::nullopt;

    std::map<ScenarioKey, ParameterSet> t;
    t[{Position::P1, RainState::S1_NoRain}] = {
        mp(5.2, 0.11, 16.32, 2.3, 0.8, 23.14, 1.59, 16.4, 0.287, 21.3, 55.14,
           none, 28.97, 18.83, 16.19, 11.53, 33.3, 14.64, 17.69),
        {0.182, -11.7, 12.39},
        {-2.69, -25.2, 0.92, 1.21}};
    t[{Position::P1, RainState::S2_Rain}] = {
        mp(4.0, 0.06, 12.6, 2.45, 0.91, 21.22, 0.98, 34.5, 0.268, 20.1, 38.44,
           5.77, 10.45, 17.79, 15.17, 10.97, 31.0, 14.5, 14.43),
        {0.122, -1.9, 10.09},
        {-2.96, -25.7, 2.28, 6.26}};
    t[{Position::P2, RainState::S1_NoRain}] = {
        mp(3.33, 0.043, 9.32, 2.38, 0.82, 21.56, 0.836, 43.93, 0.277, 20.03, 33.22,
           none, 8.44, 17.6, 15.28, 10.64, 30.7, 11.2, 16.0),
        {0.15, -5.5, 13.0},
        {-2.47, -27.2, 1.29, -1.75}};
    t[{Position::P2, RainState::S2_Rain}] = {
        mp(3.1, 0.027, 5.61, 2.47, 0.85, 18.51, 0.837, 49.47, 0.265, 19.72, 26.77,
           6.39, 0.219, 15.3, 13.54, 9.6, 27.86, 6.44, 13.79),
        {0.06, 9.73, 11.53},
        {-3.25, -31.5, -3.07, -3.85}};
    t[{Position::P3, RainState::S1_NoRain}] = {
        mp(1.67, 0.017, 2.33, 1.72, 0.54, 15.12, 0.53, 51.63, 0.28, 17.41, 20.17,
           none, 6.46, 12.78, 11.78, none, none, none, none),
        {-0.01, 23.0, 18.32},
        {-2.55, -20.5, -9.21, -16.5}};
    t[{Position::P3, RainState::S2_Rain}] = {
        mp(1.67, 0.017, 0.3, 1.86, 0.61, 13.2, 0.516, 52.14, 0.253, 14.1, 15.22,
           7.31, 0.959, 11.45, 10.9, none, none, none, none),
        {-0.005, 25.0, 16.75},
        {-2.92, -19.9, -10.6, -27.0}};
    return t;
}

} // namespace

const std::map<ScenarioKey, ParameterSet> &builtin_tables()
{
    static const auto tables = make_tables();
    return tables;
}

const ParameterSet &builtin_params(Position p, RainState r)
{
    return builtin_tables().at({p, r});
}

std::vector<std::string> validate(const MultipathParams &p)
{
    std::vector<std::string> report;
    auto require = [&](bool ok, const std::string &msg) {
        if (!ok)
            report.push_back(msg);
    };
    require(p.n_bar >= 1.0, "n_bar >= 1");
    require(p.gamma_rate > 0.0, "gamma_rate > 0");
    require(p.zeta_rate > 0.0, "zeta_rate > 0");
    require(p.lambda_cap_ns > 0.0, "lambda_cap_ns > 0");
    require(p.lambda_ray_ns > 0.0, "lambda_ray_ns > 0");
    require(p.lambda_cap_ns > p.lambda_ray_ns, "lambda_cap > lambda_ray");
    require(p.sigma_a_db >= 0.0, "sigma_a_db >= 0");
    require(p.sigma_nbar >= 0.0, "sigma_nbar >= 0");
    require(p.sigma_c_ns >= 0.0, "sigma_c_ns >= 0");
    require(p.sigma_m_ns >= 0.0, "sigma_m_ns >= 0");
    require(p.sigma_p_db >= 0.0, "sigma_p_db >= 0");
    require(p.sigma_mp_db >= 0.0, "sigma_mp_db >= 0");
    if (p.sigma_r_db)
        require(*p.sigma_r_db >= 0.0, "sigma_r_db >= 0");
    require(p.sigma_a0_db >= 0.0, "sigma_a0_db >= 0");
    require(p.sigma_df_db >= 0.0, "sigma_df_db >= 0");
    if (p.sigma_dr_db)
        require(*p.sigma_dr_db >= 0.0, "sigma_dr_db >= 0");
    if (p.sigma_k_db)
        require(*p.sigma_k_db >= 0.0, "sigma_k_db >= 0");
    // The direct component and the K statistics come as a block.
    bool has_any_direct = p.sigma_dr_db || p.mu_dr_db || p.sigma_k_db || p.mu_k_db;
    bool has_all_direct = p.sigma_dr_db && p.mu_dr_db && p.sigma_k_db && p.mu_k_db;
    require(!has_any_direct || has_all_direct,
            "direct-component statistics (sigma_dr, mu_dr, sigma_k, mu_k) are all-or-none");
    for (double v : {p.n_bar, p.gamma_rate, p.zeta_rate, p.lambda_cap_ns, p.lambda_ray_ns,
                     p.sigma_a_db, p.sigma_nbar, p.sigma_c_ns, p.sigma_m_ns, p.sigma_p_db,
                     p.sigma_mp_db, p.sigma_a0_db, p.sigma_df_db, p.mu_df_db})
        if (!std::isfinite(v))
        {
            report.push_back("all fields finite");
            break;
        }
    return report;
}

std::vector<std::string> validate(const HurricaneScaling &s)
{
    std::vector<std::string> report;
    auto require = [&](bool ok, const std::string &msg) {
        if (!ok)
            report.push_back(msg);
    };
    require(s.c_c >= 0.0 && s.c_c < 1.0, "c_c in [0,1)");
    require(s.c_m >= 0.0 && s.c_m < 1.0, "c_m in [0,1)");
    // both-zero is the allowed no-hurricane identity
    require(s.c_c > s.c_m || (s.c_c == 0.0 && s.c_m == 0.0), "c_c must exceed c_m");
    require(s.gamma_bar_b_ns > 0.0, "gamma_bar_b_ns > 0");
    require(s.tau_bar_b_ns > 0.0, "tau_bar_b_ns > 0");
    require(s.n_bar_b >= 1.0, "n_bar_b >= 1");
    require(s.c_j >= 0.0, "c_j >= 0");
    require(s.c_p > 0.0, "c_p > 0");
    require(s.c_r > 0.0, "c_r > 0");
    return report;
}

std::vector<std::string> validate(const DiffusePowerModel &m)
{
    std::vector<std::string> report;
    auto require = [&](bool ok, const std::string &msg) {
        if (!ok)
            report.push_back(msg);
    };
    require(m.c_r0 >= 0.0, "c_r0 >= 0");
    require(m.c_p0 >= 0.0, "c_p0 >= 0");
    require(m.c_w0 >= 0.0, "c_w0 >= 0");
    require(m.b_r0 == 0 || m.b_r0 == 1, "b_r0 binary");
    require(m.b_p0 == 0 || m.b_p0 == 1, "b_p0 binary");
    bool wind_ok = false;
    for (double v : hurricane_wind_steps())
        if (m.v_w0 == v)
            wind_ok = true;
    require(wind_ok, "v_w0 in {90,...,140}");
    require(m.sigma_a0_db >= 0.0, "sigma_a0_db >= 0");
    return report;
}

} // namespace wowuwb
