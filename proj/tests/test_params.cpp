#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "wowuwb/io.hpp"
#include "wowuwb/params.hpp"

using namespace wowuwb;

TEST_CASE("params: builtin tables carry the published values")
{
    const auto &tables = builtin_tables();
    CHECK(tables.size() == 6);

    const auto &p1s1 = builtin_params(Position::P1, RainState::S1_NoRain);
    CHECK(p1s1.large_scale.alpha == 0.182);
    CHECK(p1s1.large_scale.a_w0_db == -11.7);
    CHECK(p1s1.large_scale.sigma_a_db == 12.39);

    const auto &p3s2 = builtin_params(Position::P3, RainState::S2_Rain);
    CHECK(p3s2.multipath.n_bar == 1.67);
    CHECK(p3s2.multipath.gamma_rate == 0.017);
    CHECK(p3s2.multipath.zeta_rate == 0.3);
    CHECK(p3s2.multipath.lambda_cap_ns == 1.86);
    CHECK(p3s2.multipath.lambda_ray_ns == 0.61);

    const auto &p2s2 = builtin_params(Position::P2, RainState::S2_Rain);
    CHECK(p2s2.small_scale.mu_mf_db == -3.25);
    CHECK(p2s2.small_scale.sigma_mf_db == -31.5);
    CHECK(p2s2.small_scale.mu_sc_db == -3.07);
    CHECK(p2s2.small_scale.sigma_sc_db == -3.85);
}

TEST_CASE("params: absent cells are absent, not zero")
{
    for (const auto &[key, set] : builtin_tables())
    {
        const auto &[pos, rain] = key;
        const auto &mp = set.multipath;
        if (rain == RainState::S1_NoRain)
            CHECK(!mp.sigma_r_db.has_value());
        else
            CHECK(mp.sigma_r_db.has_value());
        if (pos == Position::P3)
        {
            CHECK(!mp.sigma_dr_db.has_value());
            CHECK(!mp.mu_dr_db.has_value());
            CHECK(!mp.sigma_k_db.has_value());
            CHECK(!mp.mu_k_db.has_value());
        }
        else
        {
            CHECK(mp.sigma_dr_db.has_value());
            CHECK(mp.mu_dr_db.has_value());
            CHECK(mp.sigma_k_db.has_value());
            CHECK(mp.mu_k_db.has_value());
        }
    }
}

TEST_CASE("params: every builtin column is self-consistent")
{
    for (const auto &[key, set] : builtin_tables())
    {
        CAPTURE(to_string(key.first) + "," + to_string(key.second));
        CHECK(validate(set.multipath).empty());
        CHECK(set.multipath.lambda_cap_ns > set.multipath.lambda_ray_ns);
        CHECK(set.multipath.gamma_rate < set.multipath.zeta_rate);
        CHECK(set.large_scale.sigma_a_db > 0.0);
    }
}

TEST_CASE("params: validate reports violations by field")
{
    MultipathParams p = builtin_params(Position::P1, RainState::S1_NoRain).multipath;
    p.lambda_cap_ns = 0.5;
    p.lambda_ray_ns = 0.8;
    auto report = validate(p);
    bool found = false;
    for (const auto &line : report)
        if (line.find("lambda_cap > lambda_ray") != std::string::npos)
            found = true;
    CHECK(found);

    p = builtin_params(Position::P1, RainState::S1_NoRain).multipath;
    p.gamma_rate = 0.0;
    report = validate(p);
    found = false;
    for (const auto &line : report)
        if (line.find("gamma_rate > 0") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("params: scenario derivations")
{
    Scenario sc;
    sc.position = Position::P3;
    CHECK(sc.path_kind() == PathKind::NLOS);
    sc.position = Position::P2;
    CHECK(sc.path_kind() == PathKind::LOS);
    sc.rain = RainState::S2_Rain;
    CHECK(sc.rain_intensity_mmh() == 223.5);
    sc.rain = RainState::S1_NoRain;
    CHECK(sc.rain_intensity_mmh() == 0.0);
    CHECK(sc.distance_m() == 12.0);

    CHECK_NOTHROW(validate_wind(90));
    CHECK_NOTHROW(validate_wind(140));
    CHECK_NOTHROW(validate_wind(1.86));
    CHECK_THROWS(validate_wind(95));

    CHECK(scenario_from_label("P1,S1").position == Position::P1);
    CHECK(scenario_from_label("p3s2").rain == RainState::S2_Rain);
    CHECK_THROWS(scenario_from_label("P9,S1"));
}

TEST_CASE("params: serialization round-trip is lossless bit-for-bit")
{
    const auto path = std::filesystem::temp_directory_path() / "wowuwb_params_test.json";
    io::save_params_file(path.string(), builtin_tables());
    const auto loaded = io::load_params_file(path.string());
    CHECK(loaded == builtin_tables());

    // Absent markers survive: a reloaded P3,S2 column still reports mu_k absent.
    const auto &mp = loaded.at({Position::P3, RainState::S2_Rain}).multipath;
    CHECK(!mp.mu_k_db.has_value());
    std::filesystem::remove(path);
}

TEST_CASE("params: diffuse-power model evaluation and validation")
{
    DiffusePowerModel m;
    m.a_b = 1.0;
    m.c_r0 = 1.0;
    m.c_p0 = 2.0;
    m.c_w0 = 0.1;
    CHECK(validate(m).empty());
    CHECK(m.evaluate(1, 0, 90.0) == doctest::Approx(1.0 + 1.0 + 9.0));
    CHECK(m.evaluate(0, 1, 140.0) == doctest::Approx(1.0 + 2.0 + 14.0));

    m.c_r0 = -0.5;
    CHECK(!validate(m).empty());
    m = DiffusePowerModel{};
    m.v_w0 = 95.0;
    CHECK(!validate(m).empty());
    m = DiffusePowerModel{};
    m.b_r0 = 2;
    CHECK(!validate(m).empty());
}

TEST_CASE("params: hurricane scaling validation")
{
    HurricaneScaling s; // defaults
    CHECK(validate(s).empty());
    s.c_m = 0.3; // now c_m > c_c = 0.2
    CHECK(!validate(s).empty());
    s = HurricaneScaling{};
    s.c_c = 0.0;
    s.c_m = 0.0; // identity case allowed
    CHECK(validate(s).empty());
}
