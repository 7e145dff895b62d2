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

#include "spider_ris/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

using namespace spider_ris;

namespace
{
    struct Common
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::string out = "results";
        std::string baselines;
        std::string dump_channels;
        std::optional<int> pso_particles;
        std::optional<int> pso_iters;
        std::optional<std::uint64_t> pso_seed;
        std::vector<double> values;
        unsigned threads = 1;
    };

    void add_common(CLI::App *app, Common &c, bool sweep_flags = true)
    {
        app->add_option("--config", c.config, "Scenario file (key = value)")->check(CLI::ExistingFile);
        app->add_option("--seed", c.seed, "Monte Carlo seed");
        app->add_option("--trials", c.trials, "Trials per point")->check(CLI::PositiveNumber);
        app->add_option("--pso-particles", c.pso_particles, "Swarm size")->check(CLI::PositiveNumber);
        app->add_option("--pso-iters", c.pso_iters, "Swarm iterations")->check(CLI::NonNegativeNumber);
        app->add_option("--pso-seed", c.pso_seed, "Separate seed for the swarm streams");
        if (!sweep_flags)
            return;
        app->add_option("--out", c.out, "Output directory")->capture_default_str();
        app->add_option("--baselines", c.baselines, "Comma separated baseline names (default: all)");
        app->add_option("--dump-channels", c.dump_channels, "Write H_TI and H_IR per trial into this directory");
        app->add_option("--values", c.values, "Swept values (P_T in dBm, M_I, or UE indices)")->delimiter(',');
        app->add_option("--threads", c.threads, "Worker threads per point")->check(CLI::PositiveNumber);
    }

    Scenario load(const Common &c)
    {
        Scenario s = c.config.empty() ? default_config() : load_scenario(c.config);
        if (c.seed)
            s.config.rng_seed = *c.seed;
        if (c.trials)
            s.config.monte_carlo_trials = *c.trials;
        if (c.pso_particles)
            s.config.pso.particles = *c.pso_particles;
        if (c.pso_iters)
            s.config.pso.iterations = *c.pso_iters;
        require_valid(s);
        return s;
    }

    std::vector<BaselineKind> parse_baselines(const std::string &list)
    {
        if (list.empty())
            return {all_baseline_kinds.begin(), all_baseline_kinds.end()};
        std::vector<BaselineKind> out;
        std::istringstream ss(list);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty())
                out.push_back(baseline_from_string(name));
        return out;
    }

    void print_table(const ResultTable &t)
    {
        std::printf("%-10s %-26s %12s %10s %8s %8s %s\n", "value", "baseline", "mean[b/Hz]", "stderr", "ris_x", "ris_y",
                    "flag");
        for (const auto &r : t.rows)
            std::printf("%-10g %-26s %12.4f %10.4f %8.2f %8.2f %s\n", r.value, std::string(to_string(r.baseline)).c_str(),
                        r.mean, r.stderr_mean, r.ris_x, r.ris_y, r.flagged ? "FLAGGED" : "");
    }

    int run_sweep(SweepKind kind, const Common &c)
    {
        Scenario s = load(c);
        SweepSpec spec = default_sweep(kind, s);
        spec.baselines = parse_baselines(c.baselines);
        spec.pso_seed = c.pso_seed;
        if (!c.values.empty())
            spec.values = c.values;

        SweepOptions opt;
        opt.threads = c.threads;
        if (!c.dump_channels.empty())
            opt.dump_channels = c.dump_channels;

        ResultTable table = sweep(spec, s, opt);
        std::filesystem::path dir(c.out);
        std::string stem = "sweep_" + std::string(to_string(kind));
        write_results(table, dir / (stem + ".csv"));
        emit_plot_script(table, dir / ("plot_" + stem + ".py"), stem + ".csv");

        print_table(table);
        std::printf("wrote %s\n", (dir / (stem + ".csv")).string().c_str());
        for (const auto &r : table.rows)
            if (r.flagged)
                return 3;
        return 0;
    }

    int run_oracle(const Common &c, int seeds)
    {
        Scenario s = load(c);
        int particles = c.pso_particles.value_or(10);
        int iters = c.pso_iters.value_or(50);
        OracleCheck r = oracle_check(s, seeds, s.config.rng_seed, particles, iters);
        for (std::size_t i = 0; i < r.ratios.size(); ++i)
            std::printf("seed %3zu  M_I %d  swarm/exhaustive %.6f\n", i, r.elements[i], r.ratios[i]);
        double frac = double(r.hits) / double(r.seeds);
        std::printf("%d of %d runs reach %.0f%% of the exhaustive optimum (%.1f%%), histories %s\n", r.hits, r.seeds,
                    100.0 * r.ratio_threshold, 100.0 * frac, r.histories_monotone ? "monotone" : "NOT monotone");
        return (frac >= 0.9 && r.histories_monotone) ? 0 : 1;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Movable RIS hybrid beamforming simulator"};
    app.require_subcommand(1);

    Common power, elements, ue, single, oracle;
    auto *sp = app.add_subcommand("sweep-power", "Rate versus transmit power");
    add_common(sp, power);
    auto *se = app.add_subcommand("sweep-elements", "Rate versus number of RIS elements");
    add_common(se, elements);
    auto *su = app.add_subcommand("ue-scenarios", "Rates and optimized RIS positions for several UE locations");
    add_common(su, ue);
    auto *ss = app.add_subcommand("single-run", "One Monte Carlo point at the configured transmit power");
    add_common(ss, single);
    auto *so = app.add_subcommand("oracle-check", "Swarm against exhaustive search on a tiny instance");
    add_common(so, oracle, false);
    int seeds = 50;
    so->add_option("--runs", seeds, "Number of instances")->check(CLI::PositiveNumber)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sp)
            return run_sweep(SweepKind::power, power);
        if (*se)
            return run_sweep(SweepKind::elements, elements);
        if (*su)
            return run_sweep(SweepKind::ue_scenarios, ue);
        if (*ss)
            return run_sweep(SweepKind::single, single);
        if (*so)
            return run_oracle(oracle, seeds);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
