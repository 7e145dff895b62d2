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

#include "spider_ris/baselines.hpp"

#include <cmath>

using namespace spider_ris;
using Catch::Approx;

namespace
{
    TrialContext trial_for(const Scenario &s, std::uint64_t seed)
    {
        return make_trial(s, dbm_to_watts(s.config.tx_power_dbm), RandomStream(seed));
    }
}

TEST_CASE("Baselines - Names")
{
    for (auto k : all_baseline_kinds)
        CHECK(baseline_from_string(to_string(k)) == k);
    CHECK_THROWS(baseline_from_string("fixed_ris"));
}

TEST_CASE("Baselines - Common random numbers")
{
    Scenario s = default_config();
    TrialContext a = trial_for(s, 5), b = trial_for(s, 5);
    REQUIRE(a.draws.tx_ris.size() == b.draws.tx_ris.size());
    for (std::size_t l = 0; l < a.draws.tx_ris.size(); ++l)
    {
        CHECK(a.draws.tx_ris[l].gain == b.draws.tx_ris[l].gain);
        CHECK(a.draws.ris_rx[l].arrival_azimuth == b.draws.ris_rx[l].arrival_azimuth);
    }
    CHECK(a.random_phases == b.random_phases);
    CHECK(a.random_phases.size() == 64);
    for (double p : a.random_phases)
    {
        CHECK(p >= 0.0);
        CHECK(p < 2.0 * std::numbers::pi);
    }

    auto fixed = realize_channels(s, a.draws, 55.0, 55.0);
    auto fixed2 = realize_channels(s, b.draws, 55.0, 55.0);
    CHECK(fixed.h_ti == fixed2.h_ti);
}

TEST_CASE("Baselines - One trial, all kinds")
{
    Scenario s = default_config();
    TrialContext t = trial_for(s, 1);
    for (auto k : all_baseline_kinds)
    {
        TrialOutcome o = run_baseline(k, t);
        INFO(to_string(k));
        CHECK(std::isfinite(o.rate));
        CHECK(o.rate >= 0.0);
        CHECK(s.geometry.on_platform(o.x, o.y));
    }
    TrialOutcome fixed = run_baseline(BaselineKind::FixedRisRandomPhase, t);
    CHECK(fixed.x == 55.0);
    CHECK(fixed.y == 55.0);
    CHECK(fixed.phases == t.random_phases);
}

TEST_CASE("Baselines - Joint baseline delegates to the optimizer")
{
    Scenario s = default_config();
    s.config.pso.iterations = 5;
    TrialContext t = trial_for(s, 8);
    TrialOutcome o = movable_joint_rate(t);
    RisProblem prob(s, t.draws, t.tx_power_w);
    JointResult r = run(prob, s.config.pso, t.pso_stream.split(100));
    CHECK(o.rate == r.best_rate);
    CHECK(o.x == r.best.x);
    CHECK(o.phases == r.best.phases);
    CHECK(prob.evaluate(r.best) == Approx(r.best_rate).epsilon(1e-12));
}

TEST_CASE("Baselines - Half duplex is exactly half of full duplex")
{
    Scenario s = default_config();
    s.config.pso.iterations = 5;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        TrialContext t = trial_for(s, seed);
        RelayOutcome r = relay_outcome(t);
        REQUIRE(r.half_duplex.rate == r.full_duplex.rate / 2.0);
        REQUIRE(r.full_duplex.rate == std::min(r.hops.first, r.hops.second));
        REQUIRE(relay_rate(t, Duplex::half).rate == relay_rate(t, Duplex::full).rate / 2.0);
    }
}

TEST_CASE("Baselines - Optimised phases beat random phases")
{
    Scenario s = default_config();
    double opt = 0.0, rnd = 0.0;
    const int n = 50;
    for (int k = 0; k < n; ++k)
    {
        TrialContext t = trial_for(s, std::uint64_t(k));
        opt += fixed_ris_rate(t, true).rate;
        rnd += fixed_ris_rate(t, false).rate;
    }
    CHECK(opt / n > rnd / n);

    // A single element: phase optimisation cannot change the rate.
    Scenario one = s;
    one.config.ris_elements = {1, 1};
    TrialContext t = trial_for(one, 3);
    CHECK(fixed_ris_rate(t, true).rate == Approx(fixed_ris_rate(t, false).rate).epsilon(1e-12));
}

TEST_CASE("Baselines - Relay on a mirror-symmetric geometry sits near the midline")
{
    Scenario s = default_config();
    s.geometry.tx_position = {0.0, 55.0, 2.0};
    s.geometry.ue_position = {110.0, 55.0, 2.0};
    s.config.num_paths = 1;

    TrialContext t = trial_for(s, 1);
    for (auto *draw : {&t.draws.tx_ris, &t.draws.ris_rx})
        for (auto &o : *draw)
            o = {{1.0, 0.0}, 0.0, 0.0, 0.0, 0.0};

    // Dense grid oracle along x on the symmetry line.
    double best_x = 0.0, best = -1.0;
    for (int i = 0; i <= 300; ++i)
    {
        double x = 40.0 + 0.1 * i;
        HopRates h = relay_hop_rates(t, x, 55.0);
        double r = std::min(h.first, h.second);
        if (r > best)
        {
            best = r;
            best_x = x;
        }
    }
    CHECK(std::abs(best_x - 55.0) <= 1.0);

    HopRates mid = relay_hop_rates(t, 55.0, 55.0);
    CHECK(mid.first == Approx(mid.second).epsilon(1e-9));

    RelayOutcome r = relay_outcome(t);
    CHECK(std::abs(r.full_duplex.x - 55.0) <= 3.0);
    CHECK(r.full_duplex.rate >= 0.99 * best);
}
