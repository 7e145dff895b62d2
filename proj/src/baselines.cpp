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

#include "spider_ris/baselines.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace spider_ris
{
    namespace
    {
        enum StreamTag : std::uint64_t
        {
            joint_tag = 100,
            fixed_phase_tag = 101,
            movable_random_tag = 102,
            relay_tag = 103
        };

        AngularSpread config_spread(const SystemConfig &c)
        {
            return {c.spread_elevation_deg * std::numbers::pi / 180.0, c.spread_azimuth_deg * std::numbers::pi / 180.0};
        }

        double hop_rate(const TrialContext &trial, const LinkDraw &draw, const Vec3 &from, ArrayFacing from_facing,
                        ArrayDims from_array, const Vec3 &to, ArrayFacing to_facing, ArrayDims to_array)
        {
            const auto &c = trial.scenario.config;
            LinkGeometry mean = mean_angles_from_geometry(from, to, from_facing, to_facing);
            PathSet paths = apply_draw(draw, mean, LinkTag::tx_ris);
            double loss = path_loss(c.path_loss_model, c.carrier_frequency_ghz, mean.distance, c.path_loss_exponent);
            CMatrix h = link_channel(paths, {from_array, to_array}, loss, c.element_spacing_wavelengths);

            AngularSpread spread = config_spread(c);
            LinkSupports supports{AngleSupport::from_mean(mean.departure, spread), AngleSupport::from_mean(mean.arrival, spread)};
            RfStages rf = design_rf(supports, from_array, to_array, c.element_spacing_wavelengths, c.rf_chains);
            double noise = noise_power(c.noise_psd_dbm_per_hz, c.bandwidth_hz);
            return design_hybrid(h, rf, trial.tx_power_w, c.num_streams, noise).rate.bits_per_hz;
        }
    }

    std::string_view to_string(BaselineKind kind) noexcept
    {
        switch (kind)
        {
        case BaselineKind::FixedRisOptPhase:
            return "fixed_ris_opt_phase";
        case BaselineKind::FixedRisRandomPhase:
            return "fixed_ris_random_phase";
        case BaselineKind::MovableRisRandomPhase:
            return "movable_ris_random_phase";
        case BaselineKind::MovableRisJoint:
            return "movable_ris_joint";
        case BaselineKind::FdRelay:
            return "fd_relay";
        case BaselineKind::HdRelay:
            return "hd_relay";
        }
        return "unknown";
    }

    BaselineKind baseline_from_string(std::string_view name)
    {
        for (auto k : all_baseline_kinds)
            if (to_string(k) == name)
                return k;
        throw std::invalid_argument("unknown baseline '" + std::string(name) + "'");
    }

    TrialContext make_trial(const Scenario &scenario, double tx_power_w, RandomStream trial_stream,
                            std::optional<RandomStream> pso_stream)
    {
        TrialContext t{scenario, tx_power_w, draw_channels(scenario.config, trial_stream.split(0)), {},
                       pso_stream ? *pso_stream : trial_stream.split(2)};
        RandomStream phase_rng = trial_stream.split(1);
        t.random_phases.resize(std::size_t(scenario.config.ris_elements.count()));
        for (auto &p : t.random_phases)
            p = phase_rng.uniform(0.0, 2.0 * std::numbers::pi);
        return t;
    }

    TrialOutcome fixed_ris_rate(const TrialContext &trial, bool optimize_phase)
    {
        RisProblem problem(trial.scenario, trial.draws, trial.tx_power_w);
        Vec3 center = trial.scenario.geometry.platform_center();
        auto prepared = problem.prepare(center.x, center.y);

        TrialOutcome out{0.0, center.x, center.y, trial.random_phases};
        if (!optimize_phase)
        {
            out.rate = problem.rate(prepared, trial.random_phases);
            return out;
        }

        const int n = problem.num_elements();
        std::vector<double> phases(static_cast<std::size_t>(n));
        auto objective = [&](std::span<const double> p)
        {
            for (int i = 0; i < n; ++i)
                phases[std::size_t(i)] = 2.0 * std::numbers::pi * p[std::size_t(i)];
            return problem.rate(prepared, phases);
        };
        PsoResult r = pso_run(n, trial.scenario.config.pso, trial.pso_stream.split(fixed_phase_tag), objective);
        std::vector<double> particle = {0.5, 0.5};
        particle.insert(particle.end(), r.best_position.begin(), r.best_position.end());
        out.phases = decode(particle, trial.scenario.geometry).phases;
        out.rate = r.best_value;
        return out;
    }

    TrialOutcome movable_random_phase_rate(const TrialContext &trial)
    {
        RisProblem problem(trial.scenario, trial.draws, trial.tx_power_w);
        const auto &g = trial.scenario.geometry;
        auto objective = [&](std::span<const double> p)
        {
            std::vector<double> particle(p.begin(), p.end());
            RisState s = decode(particle, g);
            return problem.rate(problem.prepare(s.x, s.y), trial.random_phases);
        };
        PsoResult r = pso_run(2, trial.scenario.config.pso, trial.pso_stream.split(movable_random_tag), objective);
        RisState best = decode(r.best_position, g);
        return {r.best_value, best.x, best.y, trial.random_phases};
    }

    TrialOutcome movable_joint_rate(const TrialContext &trial)
    {
        RisProblem problem(trial.scenario, trial.draws, trial.tx_power_w);
        JointResult r = run(problem, trial.scenario.config.pso, trial.pso_stream.split(joint_tag));
        return {r.best_rate, r.best.x, r.best.y, r.best.phases};
    }

    HopRates relay_hop_rates(const TrialContext &trial, double x, double y)
    {
        const auto &c = trial.scenario.config;
        const auto &g = trial.scenario.geometry;
        Vec3 relay{x, y, g.ris_height};
        HopRates h;
        h.first = hop_rate(trial, trial.draws.tx_ris, g.tx_position, ArrayFacing::up, c.tx_antennas, relay,
                           ArrayFacing::down, c.rx_antennas);
        h.second = hop_rate(trial, trial.draws.ris_rx, relay, ArrayFacing::down, c.tx_antennas, g.ue_position,
                            ArrayFacing::up, c.rx_antennas);
        return h;
    }

    RelayOutcome relay_outcome(const TrialContext &trial)
    {
        const auto &g = trial.scenario.geometry;
        auto objective = [&](std::span<const double> p)
        {
            RisState s = decode(p, g);
            HopRates h = relay_hop_rates(trial, s.x, s.y);
            return std::min(h.first, h.second);
        };
        PsoResult r = pso_run(2, trial.scenario.config.pso, trial.pso_stream.split(relay_tag), objective);
        RisState best = decode(r.best_position, g);

        RelayOutcome out;
        out.hops = relay_hop_rates(trial, best.x, best.y);
        out.full_duplex = {r.best_value, best.x, best.y, {}};
        out.half_duplex = {0.5 * r.best_value, best.x, best.y, {}};
        return out;
    }

    TrialOutcome relay_rate(const TrialContext &trial, Duplex duplex)
    {
        RelayOutcome r = relay_outcome(trial);
        return duplex == Duplex::full ? r.full_duplex : r.half_duplex;
    }

    TrialOutcome run_baseline(BaselineKind kind, const TrialContext &trial)
    {
        switch (kind)
        {
        case BaselineKind::FixedRisOptPhase:
            return fixed_ris_rate(trial, true);
        case BaselineKind::FixedRisRandomPhase:
            return fixed_ris_rate(trial, false);
        case BaselineKind::MovableRisRandomPhase:
            return movable_random_phase_rate(trial);
        case BaselineKind::MovableRisJoint:
            return movable_joint_rate(trial);
        case BaselineKind::FdRelay:
            return relay_rate(trial, Duplex::full);
        case BaselineKind::HdRelay:
            return relay_rate(trial, Duplex::half);
        }
        throw std::invalid_argument("unknown baseline kind");
    }
}
