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

#include "spider_ris/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace spider_ris
{
    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        double wrap_phase(double phi)
        {
            double w = std::fmod(phi, two_pi);
            if (w < 0.0)
                w += two_pi;
            return w >= two_pi ? 0.0 : w;
        }

        AngularSpread config_spread(const SystemConfig &c)
        {
            return {c.spread_elevation_deg * std::numbers::pi / 180.0, c.spread_azimuth_deg * std::numbers::pi / 180.0};
        }
    }

    RisState decode(std::span<const double> particle, const DeploymentGeometry &geometry)
    {
        if (particle.size() < 2)
            throw std::invalid_argument("decode: particle needs at least the two position coordinates");
        RisState s;
        s.x = geometry.platform_x_min + particle[0] * (geometry.platform_x_max - geometry.platform_x_min);
        s.y = geometry.platform_y_min + particle[1] * (geometry.platform_y_max - geometry.platform_y_min);
        s.x = std::clamp(s.x, geometry.platform_x_min, geometry.platform_x_max);
        s.y = std::clamp(s.y, geometry.platform_y_min, geometry.platform_y_max);
        s.phases.resize(particle.size() - 2);
        for (std::size_t i = 2; i < particle.size(); ++i)
            s.phases[i - 2] = wrap_phase(two_pi * particle[i]);
        return s;
    }

    std::vector<double> encode(const RisState &state, const DeploymentGeometry &geometry)
    {
        std::vector<double> p(state.phases.size() + 2);
        p[0] = (state.x - geometry.platform_x_min) / (geometry.platform_x_max - geometry.platform_x_min);
        p[1] = (state.y - geometry.platform_y_min) / (geometry.platform_y_max - geometry.platform_y_min);
        for (std::size_t i = 0; i < state.phases.size(); ++i)
            p[i + 2] = wrap_phase(state.phases[i]) / two_pi;
        return p;
    }

    // ---------------------------------------------------------------------------------------------

    SwarmState pso_initialize(int dimension, const PsoParams &params, RandomStream &rng, const Objective &objective)
    {
        SwarmState s;
        const auto dim = std::size_t(dimension);
        s.particles.resize(std::size_t(std::max(params.particles, 1)));
        for (auto &p : s.particles)
        {
            p.position.resize(dim);
            for (auto &v : p.position)
                v = rng.uniform();
            p.velocity.assign(dim, 0.0);
        }
        for (auto &p : s.particles)
        {
            p.value = objective(p.position);
            p.best_position = p.position;
            p.best_value = p.value;
        }

        std::size_t best = 0;
        for (std::size_t z = 1; z < s.particles.size(); ++z)
            if (s.particles[z].best_value > s.particles[best].best_value)
                best = z;
        s.global_best = s.particles[best].best_position;
        s.global_best_value = s.particles[best].best_value;
        s.global_best_iteration = 0;
        s.history.push_back(s.global_best_value);
        return s;
    }

    SwarmState pso_step(SwarmState state, const PsoParams &params, int t, RandomStream &rng, const Objective &objective)
    {
        const double inertia = params.inertia(t);
        const double vmax = params.velocity_clamp;

        for (auto &p : state.particles)
        {
            for (std::size_t d = 0; d < p.position.size(); ++d)
            {
                double y1 = rng.uniform();
                double y2 = rng.uniform();
                double v = params.social_weight * y1 * (state.global_best[d] - p.position[d]) +
                           params.cognitive_weight * y2 * (p.best_position[d] - p.position[d]) + inertia * p.velocity[d];
                v = std::clamp(v, -vmax, vmax);
                double x = p.position[d] + v;
                if (x < 0.0)
                {
                    x = 0.0;
                    v = 0.0;
                }
                else if (x > 1.0)
                {
                    x = 1.0;
                    v = 0.0;
                }
                p.position[d] = x;
                p.velocity[d] = v;
            }
        }

        // Evaluations are independent; the reduction below runs in particle order.
        for (auto &p : state.particles)
            p.value = objective(p.position);

        for (auto &p : state.particles)
        {
            if (p.value > p.best_value)
            {
                p.best_value = p.value;
                p.best_position = p.position;
            }
        }
        for (const auto &p : state.particles)
        {
            if (p.best_value > state.global_best_value)
            {
                state.global_best_value = p.best_value;
                state.global_best = p.best_position;
                state.global_best_iteration = t;
            }
        }
        state.history.push_back(state.global_best_value);
        return state;
    }

    PsoResult pso_run(int dimension, const PsoParams &params, RandomStream rng, const Objective &objective)
    {
        long evaluations = 0;
        Objective counted = [&](std::span<const double> x)
        {
            ++evaluations;
            return objective(x);
        };
        SwarmState s = pso_initialize(dimension, params, rng, counted);
        for (int t = 1; t <= params.iterations; ++t)
            s = pso_step(std::move(s), params, t, rng, counted);
        return {s.global_best, s.global_best_value, s.history, evaluations};
    }

    // ---------------------------------------------------------------------------------------------

    RisProblem::RisProblem(Scenario scenario, ChannelDraws draws, double tx_power_w)
        : scenario_(std::move(scenario)), draws_(std::move(draws)), tx_power_(tx_power_w),
          noise_(noise_power(scenario_.config.noise_psd_dbm_per_hz, scenario_.config.bandwidth_hz))
    {
    }

    RisProblem::Prepared RisProblem::prepare(double x, double y) const
    {
        const auto &c = scenario_.config;
        ChannelRealization real = realize_channels(scenario_, draws_, x, y);
        AngularSpread spread = config_spread(c);
        LinkSupports supports{AngleSupport::from_mean(real.tx_ris_mean.departure, spread),
                              AngleSupport::from_mean(real.ris_rx_mean.arrival, spread)};

        Prepared p;
        p.x = x;
        p.y = y;
        p.rf = design_rf(supports, c.tx_antennas, c.rx_antennas, c.element_spacing_wavelengths, c.rf_chains);
        p.rx_side = p.rf.f2 * real.h_ir;
        p.tx_side = real.h_ti * p.rf.f1;
        return p;
    }

    HybridDesign RisProblem::design(const Prepared &prepared, std::span<const double> phases) const
    {
        if (Eigen::Index(phases.size()) != prepared.tx_side.rows())
            throw DimensionMismatch("RIS phase count does not match the number of elements");
        CMatrix scaled = prepared.tx_side;
        for (std::size_t i = 0; i < phases.size(); ++i)
            scaled.row(Eigen::Index(i)) *= std::polar(1.0, phases[i]);
        CMatrix effective = prepared.rx_side * scaled;
        return design_baseband(prepared.rf, effective, tx_power_, scenario_.config.num_streams, noise_);
    }

    double RisProblem::rate(const Prepared &prepared, std::span<const double> phases) const
    {
        return design(prepared, phases).rate.bits_per_hz;
    }

    double RisProblem::evaluate(const RisState &state) const
    {
        return rate(prepare(state.x, state.y), state.phases);
    }

    double RisProblem::fitness(std::span<const double> particle) const
    {
        if (int(particle.size()) != dimension())
            throw DimensionMismatch("particle length must be M_I + 2");
        return evaluate(decode(particle, scenario_.geometry));
    }

    JointResult run(const RisProblem &problem, const PsoParams &params, RandomStream rng)
    {
        PsoResult r = pso_run(problem.dimension(), params, rng, [&](std::span<const double> p)
                              { return problem.fitness(p); });
        JointResult out;
        out.best = decode(r.best_position, problem.scenario().geometry);
        out.best_rate = r.best_value;
        out.history = std::move(r.history);
        return out;
    }

    GridTooLarge::GridTooLarge(std::uint64_t n, std::uint64_t limit)
        : std::invalid_argument("grid too large: " + std::to_string(n) + " points exceeds the limit of " +
                                std::to_string(limit)),
          count(n)
    {
    }

    double position_grid_point(int i, int steps)
    {
        return steps <= 1 ? 0.5 : double(i) / double(steps - 1);
    }

    JointResult brute_force_joint(const RisProblem &problem, int position_steps, int phase_steps, std::uint64_t max_points)
    {
        if (position_steps < 1 || phase_steps < 1)
            throw std::invalid_argument("grid steps must be at least 1");
        const int n = problem.num_elements();
        // Overflow-safe product.
        double total = double(position_steps) * double(position_steps) * std::pow(double(phase_steps), double(n));
        if (total > double(max_points))
            throw GridTooLarge(total > 1.8e19 ? ~std::uint64_t(0) : std::uint64_t(total), max_points);

        const auto &g = problem.scenario().geometry;
        JointResult best;
        best.best_rate = -1.0;
        std::vector<int> digits(std::size_t(n), 0);
        std::vector<double> phases(std::size_t(n), 0.0);

        for (int ix = 0; ix < position_steps; ++ix)
        {
            for (int iy = 0; iy < position_steps; ++iy)
            {
                double x = g.platform_x_min + position_grid_point(ix, position_steps) * (g.platform_x_max - g.platform_x_min);
                double y = g.platform_y_min + position_grid_point(iy, position_steps) * (g.platform_y_max - g.platform_y_min);
                auto prepared = problem.prepare(x, y);

                std::fill(digits.begin(), digits.end(), 0);
                while (true)
                {
                    for (int i = 0; i < n; ++i)
                        phases[std::size_t(i)] = two_pi * double(digits[std::size_t(i)]) / double(phase_steps);
                    double r = problem.rate(prepared, phases);
                    if (r > best.best_rate)
                    {
                        best.best_rate = r;
                        best.best = {x, y, phases};
                    }
                    int k = 0;
                    while (k < n && ++digits[std::size_t(k)] == phase_steps)
                        digits[std::size_t(k++)] = 0;
                    if (k == n)
                        break;
                }
            }
        }
        best.history = {best.best_rate};
        return best;
    }
}
