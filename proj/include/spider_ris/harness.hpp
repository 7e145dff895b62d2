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

#include "spider_ris/baselines.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spider_ris
{
    enum class SweepKind
    {
        power,        // swept value is P_T in dBm
        elements,     // swept value is M_I, a perfect square (sqrt(M_I) x sqrt(M_I) panel)
        ue_scenarios, // swept value is the index into SweepSpec::ue_positions
        single        // one point at the configured P_T
    };

    std::string_view to_string(SweepKind kind) noexcept;
    SweepKind sweep_kind_from_string(std::string_view name);

    struct SweepSpec
    {
        SweepKind kind = SweepKind::single;
        std::vector<double> values;
        std::vector<Vec3> ue_positions; // used by ue_scenarios only
        std::vector<BaselineKind> baselines{all_baseline_kinds.begin(), all_baseline_kinds.end()};
        int trials = 50;
        std::uint64_t seed = 1;
        std::optional<std::uint64_t> pso_seed; // swarm streams from RandomStream(pso_seed).split(t)
    };

    // Values 0..40 dBm in 10 dB steps, M_I in {16, 36, 64, 100}, three UE positions, or the
    // configured P_T. Trials and seed are taken from the scenario.
    SweepSpec default_sweep(SweepKind kind, const Scenario &scenario);

    // Throws InvalidConfig on an empty value list, trials < 1, no baselines, a non-square M_I
    // or a UE index without a position.
    void validate_sweep(const SweepSpec &spec);

    // The scenario simulated at one swept value.
    Scenario point_scenario(const SweepSpec &spec, const Scenario &base, double value);

    struct RateResult
    {
        SweepKind sweep = SweepKind::single;
        double value = 0.0;
        BaselineKind baseline = BaselineKind::MovableRisJoint;
        double mean = 0.0;
        double stderr_mean = 0.0; // 0 when fewer than two trials succeeded
        int trials = 0;
        std::vector<double> rates; // per trial, NaN for a failed trial
        std::vector<std::string> errors; // per trial, empty when the trial succeeded
        int failed = 0;
        bool flagged = false; // more than 10 % of the trials failed
        std::string config_digest;
        std::uint64_t seed = 0;
        double ris_x = 0.0; // mean of the per-trial reported positions
        double ris_y = 0.0;
    };

    // Fills mean, standard error, failure count, flag and mean position from per-trial data.
    void summarize(RateResult &result, const std::vector<TrialOutcome> &outcomes);

    // Trial t runs on RandomStream(seed).split(t) at the scenario's P_T.
    RateResult monte_carlo_point(const Scenario &scenario, BaselineKind kind, int trials, std::uint64_t seed);

    struct ResultTable
    {
        SweepKind kind = SweepKind::single;
        Scenario base;
        std::vector<Vec3> ue_positions;
        std::vector<RateResult> rows; // ordered by (value, baseline)
    };

    struct SweepOptions
    {
        unsigned threads = 1;
        std::optional<std::filesystem::path> dump_channels; // channel files at the platform centre
    };

    // Every baseline at a given value sees the same trials. Per-trial results are assembled by
    // (value, baseline, trial) so the table does not depend on the thread count.
    ResultTable sweep(const SweepSpec &spec, const Scenario &base, const SweepOptions &options = {});

    inline constexpr std::string_view csv_header =
        "sweep_kind,swept_value,baseline,mean_rate_bpshz,stderr,trials,seed,config_digest,ris_x,ris_y";

    // Writes the CSV and a JSON sidecar next to it (same stem, .json). Empty tables are refused.
    void write_results(const ResultTable &table, const std::filesystem::path &csv_path);
    std::string format_csv(const ResultTable &table);
    std::string format_metadata(const ResultTable &table);

    // Reads the CSV columns back. Per-trial data lives in the sidecar only.
    std::vector<RateResult> read_results(const std::filesystem::path &csv_path);
    std::vector<RateResult> parse_csv(std::string_view text);

    // Matplotlib script that loads csv_name relative to its own directory. Tables mixing sweep
    // kinds are refused.
    std::string plot_script(const ResultTable &table, std::string_view csv_name);
    void emit_plot_script(const ResultTable &table, const std::filesystem::path &script_path,
                          std::string_view csv_name);

    // ---------------------------------------------------------------------------------------------
    // Swarm versus exhaustive search on a tiny instance (2 x 2 arrays, one or two RIS elements).

    Scenario tiny_scenario(const Scenario &base, int ris_elements);

    struct OracleCheck
    {
        int seeds = 0;
        int hits = 0;              // runs reaching ratio_threshold of the exhaustive optimum
        double ratio_threshold = 0.98;
        bool histories_monotone = true;
        std::vector<double> ratios; // swarm best / exhaustive best, per seed
        std::vector<int> elements;  // M_I used for each seed (alternates 1 and 2)
    };

    // Seed s draws its trial from RandomStream(seed).split(s) and runs the swarm with the given
    // particle and iteration counts.
    OracleCheck oracle_check(const Scenario &base, int seeds, std::uint64_t seed, int particles = 10,
                             int iterations = 50, int position_steps = 7, int phase_steps = 16);
}
