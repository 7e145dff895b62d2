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

#include "spider_ris/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace spider_ris
{
    double PsoParams::inertia(int t) const noexcept
    {
        if (iterations <= 1)
            return inertia_start;
        double frac = double(t - 1) / double(iterations - 1);
        return inertia_start + (inertia_end - inertia_start) * frac;
    }

    std::string_view to_string(PathLossModel m) noexcept
    {
        switch (m)
        {
        case PathLossModel::reference_db:
            return "reference_db";
        case PathLossModel::literal_product:
            return "literal_product";
        }
        return "unknown";
    }

    PathLossModel path_loss_model_from_string(std::string_view s)
    {
        if (s == "reference_db")
            return PathLossModel::reference_db;
        if (s == "literal_product")
            return PathLossModel::literal_product;
        throw InvalidConfig("unknown path loss model '" + std::string(s) + "'");
    }

    Vec3 DeploymentGeometry::platform_center() const noexcept
    {
        return {0.5 * (platform_x_min + platform_x_max), 0.5 * (platform_y_min + platform_y_max), ris_height};
    }

    bool DeploymentGeometry::on_platform(double x, double y) const noexcept
    {
        return x >= platform_x_min && x <= platform_x_max && y >= platform_y_min && y <= platform_y_max;
    }

    Scenario default_config()
    {
        return Scenario{};
    }

    double dbm_to_watts(double dbm) noexcept
    {
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }

    double noise_power(double noise_psd_dbm_per_hz, double bandwidth_hz)
    {
        if (!(bandwidth_hz > 0.0))
            throw InvalidConfig("invalid config: bandwidth must be positive");
        return dbm_to_watts(noise_psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz));
    }

    std::vector<ConfigIssue> validate(const Scenario &scenario)
    {
        std::vector<ConfigIssue> issues;
        auto add = [&](const char *code, std::string message)
        { issues.push_back({code, std::move(message)}); };

        const auto &c = scenario.config;
        const auto &g = scenario.geometry;

        auto check_array = [&](const char *name, const ArrayDims &a)
        {
            if (a.x < 1 || a.y < 1)
                add("count_below_one", std::string(name) + " must have at least one element per axis");
        };
        check_array("tx_antennas", c.tx_antennas);
        check_array("rx_antennas", c.rx_antennas);
        check_array("ris_elements", c.ris_elements);

        if (c.num_streams < 1)
            add("count_below_one", "num_streams must be at least 1");
        if (c.num_paths < 1)
            add("count_below_one", "num_paths must be at least 1");
        if (c.monte_carlo_trials < 1)
            add("count_below_one", "monte_carlo_trials must be at least 1");

        if (c.num_streams > c.rf_chains.min_chains)
            add("streams_exceed_rf_chains", "streams exceed RF chains");
        if (c.rf_chains.max_chains < c.rf_chains.min_chains)
            add("rf_chain_policy", "rf_chains_max is smaller than rf_chains_min");
        int smallest_side = std::min(c.tx_antennas.count(), c.rx_antennas.count());
        if (c.rf_chains.min_chains > smallest_side)
            add("rf_chains_exceed_antennas", "RF chains exceed antennas per side");

        if (!(c.bandwidth_hz > 0.0))
            add("bandwidth", "bandwidth must be positive");
        if (!(c.path_loss_exponent > 0.0))
            add("path_loss_exponent", "path loss exponent must be positive");
        if (!(c.carrier_frequency_ghz > 0.0))
            add("carrier_frequency", "carrier frequency must be positive");
        if (!(c.element_spacing_wavelengths > 0.0))
            add("element_spacing", "element spacing must be positive");
        if (!(c.spread_elevation_deg >= 0.0 && c.spread_elevation_deg < 90.0))
            add("angular_spread", "elevation spread must lie in [0, 90) degrees");
        if (!(c.spread_azimuth_deg >= 0.0 && c.spread_azimuth_deg < 90.0))
            add("angular_spread", "azimuth spread must lie in [0, 90) degrees");
        if (!std::isfinite(c.tx_power_dbm))
            add("tx_power", "transmit power must be finite");
        if (!std::isfinite(c.noise_psd_dbm_per_hz))
            add("noise_psd", "noise PSD must be finite");

        const auto &p = c.pso;
        if (p.particles < 1 || p.iterations < 0)
            add("pso_params", "PSO needs at least one particle and a non-negative iteration count");
        if (!(p.social_weight >= 0.0 && p.cognitive_weight >= 0.0 && p.inertia_start >= 0.0 && p.inertia_end >= 0.0))
            add("pso_params", "PSO weights must be non-negative");
        if (!(p.velocity_clamp > 0.0 && p.velocity_clamp <= 1.0))
            add("pso_params", "PSO velocity clamp must lie in (0, 1]");

        if (!(g.platform_x_min < g.platform_x_max))
            add("empty_range", "empty range: platform x range");
        if (!(g.platform_y_min < g.platform_y_max))
            add("empty_range", "empty range: platform y range");
        if (!(g.ris_height > 0.0))
            add("ris_height", "RIS height must be positive");
        return issues;
    }

    void require_valid(const Scenario &scenario)
    {
        auto issues = validate(scenario);
        if (issues.empty())
            return;
        std::string msg = "invalid config:";
        for (const auto &i : issues)
            msg += " [" + i.message + "]";
        throw InvalidConfig(msg);
    }

    namespace
    {
        std::string format_double(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return buf;
        }

        template <typename T>
        T parse_number(std::string_view text, std::string_view key)
        {
            T value{};
            const char *first = text.data();
            const char *last = text.data() + text.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last)
                throw InvalidConfig("invalid value '" + std::string(text) + "' for key '" + std::string(key) + "'");
            return value;
        }

        struct Field
        {
            const char *key;
            std::function<std::string(const Scenario &)> get;
            std::function<void(Scenario &, std::string_view)> set;
        };

        template <typename T>
        Field number_field(const char *key, T Scenario::*group, auto member)
        {
            return Field{
                key,
                [=](const Scenario &s)
                {
                    auto v = (s.*group).*member;
                    if constexpr (std::is_floating_point_v<decltype(v)>)
                        return format_double(v);
                    else
                        return std::to_string(v);
                },
                [=](Scenario &s, std::string_view text)
                {
                    using V = std::remove_reference_t<decltype((s.*group).*member)>;
                    (s.*group).*member = parse_number<V>(text, key);
                }};
        }

        template <typename Getter>
        Field nested_field(const char *key, Getter ref)
        {
            return Field{
                key,
                [=](const Scenario &s)
                {
                    auto v = ref(const_cast<Scenario &>(s));
                    if constexpr (std::is_floating_point_v<decltype(v)>)
                        return format_double(v);
                    else
                        return std::to_string(v);
                },
                [=](Scenario &s, std::string_view text)
                {
                    auto &target = ref(s);
                    target = parse_number<std::remove_reference_t<decltype(target)>>(text, key);
                }};
        }

        const std::vector<Field> &fields()
        {
            using S = Scenario;
            static const std::vector<Field> table = {
                nested_field("tx_antennas_x", [](S &s) -> int & { return s.config.tx_antennas.x; }),
                nested_field("tx_antennas_y", [](S &s) -> int & { return s.config.tx_antennas.y; }),
                nested_field("rx_antennas_x", [](S &s) -> int & { return s.config.rx_antennas.x; }),
                nested_field("rx_antennas_y", [](S &s) -> int & { return s.config.rx_antennas.y; }),
                nested_field("ris_elements_x", [](S &s) -> int & { return s.config.ris_elements.x; }),
                nested_field("ris_elements_y", [](S &s) -> int & { return s.config.ris_elements.y; }),
                number_field("carrier_frequency_ghz", &S::config, &SystemConfig::carrier_frequency_ghz),
                number_field("bandwidth_hz", &S::config, &SystemConfig::bandwidth_hz),
                number_field("noise_psd_dbm_per_hz", &S::config, &SystemConfig::noise_psd_dbm_per_hz),
                number_field("path_loss_exponent", &S::config, &SystemConfig::path_loss_exponent),
                number_field("num_paths", &S::config, &SystemConfig::num_paths),
                number_field("spread_elevation_deg", &S::config, &SystemConfig::spread_elevation_deg),
                number_field("spread_azimuth_deg", &S::config, &SystemConfig::spread_azimuth_deg),
                number_field("element_spacing_wavelengths", &S::config, &SystemConfig::element_spacing_wavelengths),
                number_field("num_streams", &S::config, &SystemConfig::num_streams),
                nested_field("rf_chains_min", [](S &s) -> int & { return s.config.rf_chains.min_chains; }),
                nested_field("rf_chains_max", [](S &s) -> int & { return s.config.rf_chains.max_chains; }),
                nested_field("pso_particles", [](S &s) -> int & { return s.config.pso.particles; }),
                nested_field("pso_iterations", [](S &s) -> int & { return s.config.pso.iterations; }),
                nested_field("pso_social_weight", [](S &s) -> double & { return s.config.pso.social_weight; }),
                nested_field("pso_cognitive_weight", [](S &s) -> double & { return s.config.pso.cognitive_weight; }),
                nested_field("pso_inertia_start", [](S &s) -> double & { return s.config.pso.inertia_start; }),
                nested_field("pso_inertia_end", [](S &s) -> double & { return s.config.pso.inertia_end; }),
                nested_field("pso_velocity_clamp", [](S &s) -> double & { return s.config.pso.velocity_clamp; }),
                number_field("monte_carlo_trials", &S::config, &SystemConfig::monte_carlo_trials),
                number_field("rng_seed", &S::config, &SystemConfig::rng_seed),
                number_field("tx_power_dbm", &S::config, &SystemConfig::tx_power_dbm),
                Field{"path_loss_model",
                      [](const S &s) { return std::string(to_string(s.config.path_loss_model)); },
                      [](S &s, std::string_view v) { s.config.path_loss_model = path_loss_model_from_string(v); }},
                nested_field("tx_x", [](S &s) -> double & { return s.geometry.tx_position.x; }),
                nested_field("tx_y", [](S &s) -> double & { return s.geometry.tx_position.y; }),
                nested_field("tx_z", [](S &s) -> double & { return s.geometry.tx_position.z; }),
                nested_field("ue_x", [](S &s) -> double & { return s.geometry.ue_position.x; }),
                nested_field("ue_y", [](S &s) -> double & { return s.geometry.ue_position.y; }),
                nested_field("ue_z", [](S &s) -> double & { return s.geometry.ue_position.z; }),
                number_field("platform_x_min", &S::geometry, &DeploymentGeometry::platform_x_min),
                number_field("platform_x_max", &S::geometry, &DeploymentGeometry::platform_x_max),
                number_field("platform_y_min", &S::geometry, &DeploymentGeometry::platform_y_min),
                number_field("platform_y_max", &S::geometry, &DeploymentGeometry::platform_y_max),
                number_field("ris_height", &S::geometry, &DeploymentGeometry::ris_height),
            };
            return table;
        }

        std::string_view trim(std::string_view s)
        {
            const char *ws = " \t\r\n";
            auto b = s.find_first_not_of(ws);
            if (b == std::string_view::npos)
                return {};
            auto e = s.find_last_not_of(ws);
            return s.substr(b, e - b + 1);
        }
    }

    std::vector<std::string> config_keys()
    {
        std::vector<std::string> keys;
        for (const auto &f : fields())
            keys.emplace_back(f.key);
        return keys;
    }

    std::string serialize(const Scenario &scenario)
    {
        std::string out;
        for (const auto &f : fields())
        {
            out += f.key;
            out += " = ";
            out += f.get(scenario);
            out += '\n';
        }
        return out;
    }

    Scenario parse_scenario(std::string_view text, const Scenario &base)
    {
        Scenario s = base;
        std::size_t line_no = 0;
        while (!text.empty())
        {
            auto nl = text.find('\n');
            auto line = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            ++line_no;

            if (auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;

            auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw InvalidConfig("line " + std::to_string(line_no) + ": expected 'key = value'");
            auto key = trim(line.substr(0, eq));
            auto value = trim(line.substr(eq + 1));

            bool found = false;
            for (const auto &f : fields())
            {
                if (key == f.key)
                {
                    try
                    {
                        f.set(s, value);
                    }
                    catch (const InvalidConfig &e)
                    {
                        throw InvalidConfig("line " + std::to_string(line_no) + ": " + e.what());
                    }
                    found = true;
                    break;
                }
            }
            if (!found)
                throw InvalidConfig("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
        return s;
    }

    Scenario load_scenario(const std::filesystem::path &path, const Scenario &base)
    {
        std::ifstream in(path);
        if (!in)
            throw InvalidConfig("cannot open config file " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_scenario(buf.str(), base);
    }

    std::string config_digest(const Scenario &scenario)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : serialize(scenario))
        {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
}
