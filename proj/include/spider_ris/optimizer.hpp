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

#include "spider_ris/beamforming.hpp"
#include "spider_ris/channel.hpp"
#include "spider_ris/random.hpp"
#include "spider_ris/scenario.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace spider_ris
{
    // RIS platform coordinates and per-element phases in [0, 2 pi).
    struct RisState
    {
        double x = 0.0;
        double y = 0.0;
        std::vector<double> phases;
    };

    // Unit-cube particle [p_x, p_y, p_phi_1 .. p_phi_MI] to a feasible RIS state.
    RisState decode(std::span<const double> particle, const DeploymentGeometry &geometry);
    std::vector<double> encode(const RisState &state, const DeploymentGeometry &geometry);

    // ---------------------------------------------------------------------------------------------
    // Particle swarm over [0, 1]^D, maximising an objective.

    using Objective = std::function<double(std::span<const double>)>;

    struct Particle
    {
        std::vector<double> position;
        std::vector<double> velocity;
        std::vector<double> best_position;
        double value = 0.0;
        double best_value = 0.0;
    };

    struct SwarmState
    {
        std::vector<Particle> particles;
        std::vector<double> global_best;
        double global_best_value = 0.0;
        int global_best_iteration = 0;
        std::vector<double> history; // global best value after initialisation and after each step
    };

    // Zero velocities, uniform positions, personal bests = initial positions.
    SwarmState pso_initialize(int dimension, const PsoParams &params, RandomStream &rng, const Objective &objective);

    // One velocity/position update for iteration t in 1..T, followed by the personal and global
    // best updates. Ties keep the earlier best, then the lower particle index.
    SwarmState pso_step(SwarmState state, const PsoParams &params, int t, RandomStream &rng, const Objective &objective);

    struct PsoResult
    {
        std::vector<double> best_position;
        double best_value = 0.0;
        std::vector<double> history;
        long evaluations = 0;
    };

    PsoResult pso_run(int dimension, const PsoParams &params, RandomStream rng, const Objective &objective);

    // ---------------------------------------------------------------------------------------------
    // Joint RIS position and phase problem on one frozen channel trial.

    class RisProblem
    {
    public:
        // Everything that depends on the RIS position only.
        struct Prepared
        {
            double x = 0.0;
            double y = 0.0;
            RfStages rf;
            CMatrix rx_side; // F2 H_IR, N_RF2 x M_I
            CMatrix tx_side; // H_TI F1, M_I x N_RF1
        };

        RisProblem(Scenario scenario, ChannelDraws draws, double tx_power_w);

        [[nodiscard]] const Scenario &scenario() const { return scenario_; }
        [[nodiscard]] const ChannelDraws &draws() const { return draws_; }
        [[nodiscard]] double tx_power() const { return tx_power_; }
        [[nodiscard]] double noise() const { return noise_; }
        [[nodiscard]] int num_elements() const { return scenario_.config.ris_elements.count(); }
        [[nodiscard]] int dimension() const { return num_elements() + 2; }

        [[nodiscard]] Prepared prepare(double x, double y) const;
        [[nodiscard]] double rate(const Prepared &prepared, std::span<const double> phases) const;
        [[nodiscard]] HybridDesign design(const Prepared &prepared, std::span<const double> phases) const;

        // Achievable rate of the state; the path draws stay frozen, only geometry follows the RIS.
        [[nodiscard]] double evaluate(const RisState &state) const;

        // Objective over the unit cube: decode, then evaluate.
        [[nodiscard]] double fitness(std::span<const double> particle) const;

    private:
        Scenario scenario_;
        ChannelDraws draws_;
        double tx_power_;
        double noise_;
    };

    struct JointResult
    {
        RisState best;
        double best_rate = 0.0;
        std::vector<double> history;
    };

    // Swarm search over position and phases.
    JointResult run(const RisProblem &problem, const PsoParams &params, RandomStream rng);

    class GridTooLarge : public std::invalid_argument
    {
    public:
        GridTooLarge(std::uint64_t count, std::uint64_t limit);
        std::uint64_t count;
    };

    // Unit-cube coordinate of grid step i out of n: 0.5 for n = 1, i / (n - 1) otherwise.
    double position_grid_point(int i, int steps);

    // Exhaustive search over position_steps^2 positions times phase_steps^M_I phase vectors with
    // phases 2 pi k / phase_steps. Refuses grids above max_points.
    JointResult brute_force_joint(const RisProblem &problem, int position_steps, int phase_steps,
                                  std::uint64_t max_points = 10'000'000);
}
