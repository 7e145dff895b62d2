// SPDX-License-Identifier: Apache-2.0
//
// spider-ris: movable RIS assisted mmWave hybrid beamforming simulator
// Copyright (C) 2026 The spider-ris authors
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

#include <catch_amalgamated.hpp>

#include "spider_ris/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace spider_ris;

namespace
{
    bool has_code(const std::vector<ConfigIssue> &issues, const std::string &code)
    {
        for (const auto &i : issues)
            if (i.code == code)
                return true;
        return false;
    }
}

TEST_CASE("Scenario - Defaults")
{
    Scenario s = default_config();
    const auto &c = s.config;
    const auto &g = s.geometry;

    CHECK(c.tx_antennas == ArrayDims{8, 8});
    CHECK(c.rx_antennas == ArrayDims{8, 8});
    CHECK(c.carrier_frequency_ghz == 28.0);
    CHECK(c.num_streams == 2);
    CHECK(c.num_paths == 10);
    CHECK(c.path_loss_exponent == 3.6);
    CHECK(c.spread_elevation_deg == 10.0);
    CHECK(c.spread_azimuth_deg == 10.0);
    CHECK(c.bandwidth_hz == 10e6);
    CHECK(c.noise_psd_dbm_per_hz == -174.0);
    CHECK(c.pso.iterations == 30);
    CHECK(c.pso.particles == 10);
    CHECK(c.element_spacing_wavelengths == 0.5);
    CHECK(c.monte_carlo_trials == 50);

    CHECK(g.tx_position == Vec3{0.0, 0.0, 2.0});
    CHECK(g.ue_position == Vec3{100.0, 100.0, 2.0});
    CHECK(g.platform_x_min == 40.0);
    CHECK(g.platform_x_max == 70.0);
    CHECK(g.platform_y_min == 40.0);
    CHECK(g.platform_y_max == 70.0);
    CHECK(g.ris_height == 5.0);
    CHECK(g.platform_center() == Vec3{55.0, 55.0, 5.0});

    CHECK(validate(s).empty());
}

TEST_CASE("Scenario - Noise power")
{
    // -174 dBm/Hz + 70 dB = -104 dBm
    CHECK(noise_power(-174.0, 10e6) == Catch::Approx(3.981071705534973e-14).epsilon(1e-12));
    CHECK(noise_power(-174.0, 1.0) == Catch::Approx(std::pow(10.0, -20.4)).epsilon(1e-12));
    CHECK(noise_power(0.0, 1000.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(noise_power(-174.0, 0.0));
    CHECK_THROWS(noise_power(-174.0, -1.0));

    double prev = 0.0;
    for (double b = 1.0; b < 1e9; b *= 3.7)
    {
        double n = noise_power(-174.0, b);
        CHECK(n > prev);
        prev = n;
    }
    prev = 0.0;
    for (double p = -200.0; p < 0.0; p += 7.5)
    {
        double n = noise_power(p, 1e6);
        CHECK(n > prev);
        prev = n;
    }
    CHECK(dbm_to_watts(30.0) == Catch::Approx(1.0));
}

TEST_CASE("Scenario - Validation")
{
    Scenario s = default_config();
    s.config.num_streams = 3;
    s.config.rf_chains = {2, 2};
    auto issues = validate(s);
    REQUIRE(has_code(issues, "streams_exceed_rf_chains"));
    bool msg = false;
    for (const auto &i : issues)
        msg = msg || i.message.find("streams exceed RF chains") != std::string::npos;
    CHECK(msg);
    CHECK_THROWS_AS(require_valid(s), InvalidConfig);

    s = default_config();
    s.geometry.platform_x_min = 70.0;
    s.geometry.platform_x_max = 40.0;
    issues = validate(s);
    REQUIRE(has_code(issues, "empty_range"));
    CHECK(issues.front().message.find("empty range") != std::string::npos);

    s = default_config();
    s.config.ris_elements = {0, 8};
    CHECK(has_code(validate(s), "count_below_one"));

    s = default_config();
    s.config.bandwidth_hz = 0.0;
    CHECK(has_code(validate(s), "bandwidth"));

    s = default_config();
    s.geometry.ris_height = -1.0;
    CHECK(has_code(validate(s), "ris_height"));

    s = default_config();
    s.config.pso.particles = 0;
    CHECK(has_code(validate(s), "pso_params"));
}

TEST_CASE("Scenario - Serialize round trip")
{
    Scenario s = default_config();
    CHECK(parse_scenario(serialize(s)) == s);

    s.config.tx_power_dbm = 0.1 + 0.2;
    s.geometry.ris_height = 1.0 / 3.0;
    s.config.rng_seed = 0xFFFFFFFFFFFFFFFFull;
    s.config.path_loss_model = PathLossModel::reference_db;
    Scenario back = parse_scenario(serialize(s));
    CHECK(back == s);
    CHECK(serialize(back) == serialize(s));
}

TEST_CASE("Scenario - Parser")
{
    Scenario s = parse_scenario("# comment\n\ntx_power_dbm = 12.5\nris_elements_x=4\n");
    CHECK(s.config.tx_power_dbm == 12.5);
    CHECK(s.config.ris_elements.x == 4);
    CHECK(s.config.ris_elements.y == 8);

    try
    {
        parse_scenario("tx_power_dbm = 1\nnot_a_key = 3\n");
        FAIL("unknown key accepted");
    }
    catch (const InvalidConfig &e)
    {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario("num_paths = ten\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_scenario("path_loss_model = magic\n"), InvalidConfig);
}

TEST_CASE("Scenario - Digest changes iff a field changes")
{
    const Scenario base = default_config();
    const std::string d0 = config_digest(base);
    CHECK(d0.size() == 16);
    CHECK(config_digest(default_config()) == d0);
    CHECK(config_digest(parse_scenario(serialize(base))) == d0);

    std::set<std::string> seen{d0};
    auto keys = config_keys();
    CHECK(keys.size() == 39);
    for (const auto &key : keys)
    {
        std::istringstream in(serialize(base));
        std::string line, value;
        while (std::getline(in, line))
            if (line.rfind(key + " = ", 0) == 0)
                value = line.substr(key.size() + 3);
        REQUIRE_FALSE(value.empty());

        std::string changed;
        if (key == "path_loss_model")
            changed = value == "literal_product" ? "reference_db" : "literal_product";
        else
        {
            std::ostringstream os;
            os.precision(17);
            os << std::stod(value) + 1.0;
            changed = os.str();
        }
        Scenario p = parse_scenario(key + " = " + changed + "\n", base);
        INFO(key);
        CHECK_FALSE(p == base);
        std::string d = config_digest(p);
        CHECK(d != d0);
        seen.insert(d);
    }
    CHECK(seen.size() == keys.size() + 1);
}
