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

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spider_ris
{
    class InvalidConfig : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Uniform rectangular array size, elements along x and y.
    struct ArrayDims
    {
        int x = 1;
        int y = 1;

        [[nodiscard]] int count() const noexcept { return x * y; }
        bool operator==(const ArrayDims &) const = default;
    };

    struct Vec3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        bool operator==(const Vec3 &) const = default;
    };

    // Number of RF chains per side is the number of quantized beams that cover the angular
    // support, clamped to [min_chains, max_chains].
    struct RfChainPolicy
    {
        int min_chains = 2;
        int max_chains = 16;

        bool operator==(const RfChainPolicy &) const = default;
    };

    struct PsoParams
    {
        int particles = 10;           // swarm size
        int iterations = 30;          // number of velocity/position updates
        double social_weight = 2.0;    // pull towards the global best
        double cognitive_weight = 2.0; // pull towards the personal best
        double inertia_start = 0.9;    // inertia at t = 1, decays linearly
        double inertia_end = 0.4;      // inertia at t = T
        double velocity_clamp = 0.2;   // |v| bound per dimension, unit-cube units

        [[nodiscard]] double inertia(int t) const noexcept;
        bool operator==(const PsoParams &) const = default;
    };

    // How the large-scale loss of one link is turned into a linear power attenuation.
    //   reference_db     : 10^((alpha + 10 eta log10(tau)) / 10), alpha = 32.4 + 20 log10(fc) dB
    //   literal_product  : alpha * tau^eta with alpha taken as the number 32.4 + 20 log10(fc)
    enum class PathLossModel
    {
        reference_db,
        literal_product
    };

    std::string_view to_string(PathLossModel m) noexcept;
    PathLossModel path_loss_model_from_string(std::string_view s);

    struct SystemConfig
    {
        ArrayDims tx_antennas{8, 8};
        ArrayDims rx_antennas{8, 8};
        ArrayDims ris_elements{8, 8};
        double carrier_frequency_ghz = 28.0;
        double bandwidth_hz = 10e6;
        double noise_psd_dbm_per_hz = -174.0;
        double path_loss_exponent = 3.6;
        int num_paths = 10;
        double spread_elevation_deg = 10.0;
        double spread_azimuth_deg = 10.0;
        double element_spacing_wavelengths = 0.5;
        int num_streams = 2;
        RfChainPolicy rf_chains{};
        PsoParams pso{};
        int monte_carlo_trials = 50;
        std::uint64_t rng_seed = 1;
        double tx_power_dbm = 30.0;
        PathLossModel path_loss_model = PathLossModel::literal_product;

        bool operator==(const SystemConfig &) const = default;
    };

    struct DeploymentGeometry
    {
        Vec3 tx_position{0.0, 0.0, 2.0};
        Vec3 ue_position{100.0, 100.0, 2.0};
        double platform_x_min = 40.0;
        double platform_x_max = 70.0;
        double platform_y_min = 40.0;
        double platform_y_max = 70.0;
        double ris_height = 5.0;

        [[nodiscard]] Vec3 platform_center() const noexcept;
        [[nodiscard]] bool on_platform(double x, double y) const noexcept;
        bool operator==(const DeploymentGeometry &) const = default;
    };

    struct Scenario
    {
        SystemConfig config;
        DeploymentGeometry geometry;

        bool operator==(const Scenario &) const = default;
    };

    // Default simulation parameters (see README for the full list).
    Scenario default_config();

    double dbm_to_watts(double dbm) noexcept;

    // Thermal noise power in watts over the given bandwidth.
    double noise_power(double noise_psd_dbm_per_hz, double bandwidth_hz);

    struct ConfigIssue
    {
        std::string code;    // stable identifier, e.g. "streams_exceed_rf_chains"
        std::string message; // human readable, e.g. "streams exceed RF chains"
    };

    // Never throws. Empty result means the scenario is usable.
    std::vector<ConfigIssue> validate(const Scenario &scenario);

    // Throws InvalidConfig listing every issue when validate() is not empty.
    void require_valid(const Scenario &scenario);

    // Flat "key = value" text, one field per line. Doubles are written with 17 significant digits
    // so parse(serialize(s)) == s bit for bit.
    std::string serialize(const Scenario &scenario);

    // Fields missing from the text keep their value from base. Unknown keys and malformed values
    // throw InvalidConfig naming the line.
    Scenario parse_scenario(std::string_view text, const Scenario &base = default_config());
    Scenario load_scenario(const std::filesystem::path &path, const Scenario &base = default_config());

    // 16 hex digit FNV-1a digest of serialize(scenario).
    std::string config_digest(const Scenario &scenario);

    // Names of all serialized keys, in file order.
    std::vector<std::string> config_keys();
}
