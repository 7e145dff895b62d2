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

#include "spider_ris/optimizer.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace spider_ris
{
    enum class BaselineKind
    {
        FixedRisOptPhase,
        FixedRisRandomPhase,
        MovableRisRandomPhase,
        MovableRisJoint,
        FdRelay,
        HdRelay
    };

    inline constexpr std::array<BaselineKind, 6> all_baseline_kinds = {
        BaselineKind::FixedRisOptPhase, BaselineKind::FixedRisRandomPhase, BaselineKind::MovableRisRandomPhase,
        BaselineKind::MovableRisJoint,  BaselineKind::FdRelay,             BaselineKind::HdRelay};

    std::string_view to_string(BaselineKind kind) noexcept;
    // Accepts the snake_case names printed by to_string(). Throws std::invalid_argument otherwise.
    BaselineKind baseline_from_string(std::string_view name);

    // One Monte Carlo trial shared by every scheme (common random numbers).
    struct TrialContext
    {
        Scenario scenario;
        double tx_power_w = 1.0;
        ChannelDraws draws;
        std::vector<double> random_phases; // one per RIS element, uniform in [0, 2 pi)
        RandomStream pso_stream;           // parent of the per-scheme search streams
    };

    // Channel draws come from trial_stream.split(0), random phases from split(1). The swarm streams
    // come from pso_stream when given, otherwise from trial_stream.split(2).
    TrialContext make_trial(const Scenario &scenario, double tx_power_w, RandomStream trial_stream,
                            std::optional<RandomStream> pso_stream = std::nullopt);

    struct TrialOutcome
    {
        double rate = 0.0;
        double x = 0.0; // RIS or relay position used for the reported rate
        double y = 0.0;
        std::vector<double> phases;
    };

    // RIS at the platform centre. With optimize_phase the swarm searches the M_I phases only,
    // otherwise the trial's random phases are used.
    TrialOutcome fixed_ris_rate(const TrialContext &trial, bool optimize_phase);

    // Random phases held fixed while the swarm searches the platform position.
    TrialOutcome movable_random_phase_rate(const TrialContext &trial);

    // Joint position and phase search.
    TrialOutcome movable_joint_rate(const TrialContext &trial);

    enum class Duplex
    {
        full,
        half
    };

    struct HopRates
    {
        double first = 0.0;  // Tx -> relay
        double second = 0.0; // relay -> Rx
    };

    // Ideal decode-and-forward relay on the platform with Tx/Rx sized arrays, reusing the trial's
    // path draws for its two hops.
    HopRates relay_hop_rates(const TrialContext &trial, double x, double y);

    struct RelayOutcome
    {
        TrialOutcome full_duplex; // min of the hop rates at the best position
        TrialOutcome half_duplex; // exactly half of the full-duplex rate
        HopRates hops;
    };

    RelayOutcome relay_outcome(const TrialContext &trial);
    TrialOutcome relay_rate(const TrialContext &trial, Duplex duplex);

    TrialOutcome run_baseline(BaselineKind kind, const TrialContext &trial);
}
