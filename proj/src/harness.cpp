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

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace spider_ris
{
    namespace
    {
        std::string fmt17(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return buf;
        }

        int square_side(double m)
        {
            if (!(m >= 1.0) || m != std::floor(m))
                return -1;
            int side = int(std::lround(std::sqrt(m)));
            return side * side == int(m) ? side : -1;
        }

        bool needs_relay(BaselineKind k) { return k == BaselineKind::FdRelay || k == BaselineKind::HdRelay; }

        std::vector<std::string> split_csv_line(const std::string &line)
        {
            std::vector<std::string> out;
            std::string field;
            std::istringstream ss(line);
            while (std::getline(ss, field, ','))
                out.push_back(field);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            out << text;
            if (!out)
                throw std::runtime_error("error writing " + path.string());
        }

        void require_single_kind(const ResultTable &table)
        {
            if (table.rows.empty())
                throw std::invalid_argument("refusing to write an empty result table");
            for (const auto &r : table.rows)
                if (r.sweep != table.kind)
                    throw std::invalid_argument("result table mixes sweep kinds");
        }

        void dump_realization(const std::filesystem::path &dir, const Scenario &s, const ChannelDraws &draws,
                              std::size_t point, int trial)
        {
            std::filesystem::create_directories(dir);
            Vec3 c = s.geometry.platform_center();
            ChannelRealization r = realize_channels(s, draws, c.x, c.y);
            std::string stem = "point" + std::to_string(point) + "_trial" + std::to_string(trial);
            write_matrix_file(dir / (stem + "_h_ti.txt"), r.h_ti, "H_TI");
            write_matrix_file(dir / (stem + "_h_ir.txt"), r.h_ir, "H_IR");
        }
    }

    std::string_view to_string(SweepKind kind) noexcept
    {
        switch (kind)
        {
        case SweepKind::power:
            return "power";
        case SweepKind::elements:
            return "elements";
        case SweepKind::ue_scenarios:
            return "ue_scenarios";
        case SweepKind::single:
            return "single";
        }
        return "unknown";
    }

    SweepKind sweep_kind_from_string(std::string_view name)
    {
        for (auto k : {SweepKind::power, SweepKind::elements, SweepKind::ue_scenarios, SweepKind::single})
            if (to_string(k) == name)
                return k;
        throw std::invalid_argument("unknown sweep kind '" + std::string(name) + "'");
    }

    SweepSpec default_sweep(SweepKind kind, const Scenario &scenario)
    {
        SweepSpec spec;
        spec.kind = kind;
        spec.trials = scenario.config.monte_carlo_trials;
        spec.seed = scenario.config.rng_seed;
        switch (kind)
        {
        case SweepKind::power:
            spec.values = {0.0, 10.0, 20.0, 30.0, 40.0};
            break;
        case SweepKind::elements:
            spec.values = {16.0, 36.0, 64.0, 100.0};
            break;
        case SweepKind::ue_scenarios:
            spec.ue_positions = {{100.0, 100.0, 2.0}, {80.0, 60.0, 2.0}, {60.0, 90.0, 2.0}};
            spec.values = {0.0, 1.0, 2.0};
            break;
        case SweepKind::single:
            spec.values = {scenario.config.tx_power_dbm};
            break;
        }
        return spec;
    }

    void validate_sweep(const SweepSpec &spec)
    {
        if (spec.values.empty())
            throw InvalidConfig("sweep needs at least one value");
        if (spec.trials < 1)
            throw InvalidConfig("sweep needs at least one trial per point");
        if (spec.baselines.empty())
            throw InvalidConfig("sweep needs at least one baseline");
        for (double v : spec.values)
        {
            if (!std::isfinite(v))
                throw InvalidConfig("sweep value is not finite");
            if (spec.kind == SweepKind::elements && square_side(v) < 0)
                throw InvalidConfig("element count " + fmt17(v) + " is not a perfect square");
            if (spec.kind == SweepKind::ue_scenarios &&
                (v < 0.0 || v != std::floor(v) || std::size_t(v) >= spec.ue_positions.size()))
                throw InvalidConfig("UE scenario index " + fmt17(v) + " has no position");
        }
    }

    Scenario point_scenario(const SweepSpec &spec, const Scenario &base, double value)
    {
        Scenario s = base;
        switch (spec.kind)
        {
        case SweepKind::power:
            s.config.tx_power_dbm = value;
            break;
        case SweepKind::elements:
        {
            int side = square_side(value);
            if (side < 0)
                throw InvalidConfig("element count " + fmt17(value) + " is not a perfect square");
            s.config.ris_elements = {side, side};
            break;
        }
        case SweepKind::ue_scenarios:
            s.geometry.ue_position = spec.ue_positions.at(std::size_t(value));
            break;
        case SweepKind::single:
            s.config.tx_power_dbm = value;
            break;
        }
        return s;
    }

    void summarize(RateResult &result, const std::vector<TrialOutcome> &outcomes)
    {
        result.trials = int(outcomes.size());
        result.rates.assign(outcomes.size(), std::numeric_limits<double>::quiet_NaN());
        result.errors.resize(outcomes.size());

        double sum = 0.0, sx = 0.0, sy = 0.0;
        int ok = 0;
        for (std::size_t t = 0; t < outcomes.size(); ++t)
        {
            if (!result.errors[t].empty())
                continue;
            result.rates[t] = outcomes[t].rate;
            sum += outcomes[t].rate;
            sx += outcomes[t].x;
            sy += outcomes[t].y;
            ++ok;
        }
        result.failed = result.trials - ok;
        result.flagged = 10 * result.failed > result.trials;

        if (ok == 0)
        {
            result.mean = result.ris_x = result.ris_y = std::numeric_limits<double>::quiet_NaN();
            result.stderr_mean = 0.0;
            return;
        }
        result.mean = sum / ok;
        result.ris_x = sx / ok;
        result.ris_y = sy / ok;

        double ss = 0.0;
        for (double r : result.rates)
            if (!std::isnan(r))
                ss += (r - result.mean) * (r - result.mean);
        result.stderr_mean = ok > 1 ? std::sqrt(ss / double(ok - 1) / double(ok)) : 0.0;
    }

    RateResult monte_carlo_point(const Scenario &scenario, BaselineKind kind, int trials, std::uint64_t seed)
    {
        SweepSpec spec;
        spec.kind = SweepKind::single;
        spec.values = {scenario.config.tx_power_dbm};
        spec.baselines = {kind};
        spec.trials = trials;
        spec.seed = seed;
        return sweep(spec, scenario).rows.front();
    }

    ResultTable sweep(const SweepSpec &spec, const Scenario &base, const SweepOptions &options)
    {
        validate_sweep(spec);

        std::vector<double> values = spec.values;
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        std::vector<BaselineKind> kinds = spec.baselines;
        std::sort(kinds.begin(), kinds.end());
        kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
        const bool relay = std::any_of(kinds.begin(), kinds.end(), needs_relay);

        ResultTable table;
        table.kind = spec.kind;
        table.base = base;
        table.ue_positions = spec.ue_positions;

        const auto trials = std::size_t(spec.trials);
        const RandomStream root(spec.seed);

        for (std::size_t vi = 0; vi < values.size(); ++vi)
        {
            const Scenario s = point_scenario(spec, base, values[vi]);
            require_valid(s);
            const double p_w = dbm_to_watts(s.config.tx_power_dbm);

            // outcomes[k][t], errors[k][t]
            std::vector<std::vector<TrialOutcome>> outcomes(kinds.size(), std::vector<TrialOutcome>(trials));
            std::vector<std::vector<std::string>> errors(kinds.size(), std::vector<std::string>(trials));

            auto run_trial = [&](std::size_t t)
            {
                std::optional<RandomStream> pso;
                if (spec.pso_seed)
                    pso = RandomStream(*spec.pso_seed).split(t);
                TrialContext trial;
                try
                {
                    trial = make_trial(s, p_w, root.split(t), pso);
                    if (options.dump_channels)
                        dump_realization(*options.dump_channels, s, trial.draws, vi, int(t));
                }
                catch (const std::exception &e)
                {
                    for (auto &ek : errors)
                        ek[t] = e.what();
                    return;
                }

                std::optional<RelayOutcome> relay_result;
                std::string relay_error;
                if (relay)
                {
                    try
                    {
                        relay_result = relay_outcome(trial);
                    }
                    catch (const std::exception &e)
                    {
                        relay_error = e.what();
                    }
                }

                for (std::size_t k = 0; k < kinds.size(); ++k)
                {
                    try
                    {
                        if (needs_relay(kinds[k]))
                        {
                            if (!relay_result)
                                throw std::runtime_error(relay_error);
                            outcomes[k][t] = kinds[k] == BaselineKind::FdRelay ? relay_result->full_duplex
                                                                               : relay_result->half_duplex;
                        }
                        else
                            outcomes[k][t] = run_baseline(kinds[k], trial);
                        if (!std::isfinite(outcomes[k][t].rate))
                            throw std::runtime_error("non-finite rate");
                    }
                    catch (const std::exception &e)
                    {
                        errors[k][t] = e.what()[0] ? e.what() : "trial failed";
                    }
                }
            };

            const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, unsigned(trials)));
            if (workers == 1)
            {
                for (std::size_t t = 0; t < trials; ++t)
                    run_trial(t);
            }
            else
            {
                std::atomic<std::size_t> next{0};
                std::vector<std::thread> pool;
                for (unsigned w = 0; w < workers; ++w)
                    pool.emplace_back([&]
                                      {
                                          for (std::size_t t = next++; t < trials; t = next++)
                                              run_trial(t);
                                      });
                for (auto &th : pool)
                    th.join();
            }

            const std::string digest = config_digest(s);
            for (std::size_t k = 0; k < kinds.size(); ++k)
            {
                RateResult r;
                r.sweep = spec.kind;
                r.value = values[vi];
                r.baseline = kinds[k];
                r.config_digest = digest;
                r.seed = spec.seed;
                r.errors = errors[k];
                summarize(r, outcomes[k]);
                table.rows.push_back(std::move(r));
            }
        }
        return table;
    }

    std::string format_csv(const ResultTable &table)
    {
        require_single_kind(table);
        std::string out(csv_header);
        out += '\n';
        for (const auto &r : table.rows)
        {
            out += std::string(to_string(r.sweep)) + ',' + fmt17(r.value) + ',' + std::string(to_string(r.baseline)) +
                   ',' + fmt17(r.mean) + ',' + fmt17(r.stderr_mean) + ',' + std::to_string(r.trials) + ',' +
                   std::to_string(r.seed) + ',' + r.config_digest + ',' + fmt17(r.ris_x) + ',' + fmt17(r.ris_y) + '\n';
        }
        return out;
    }

    std::string format_metadata(const ResultTable &table)
    {
        require_single_kind(table);
        using nlohmann::json;

        json config = json::object();
        std::istringstream lines(serialize(table.base));
        std::string line;
        while (std::getline(lines, line))
        {
            auto eq = line.find(" = ");
            if (eq != std::string::npos)
                config[line.substr(0, eq)] = line.substr(eq + 3);
        }

        json ues = json::array();
        for (const auto &p : table.ue_positions)
            ues.push_back({p.x, p.y, p.z});

        json rows = json::array();
        for (const auto &r : table.rows)
        {
            json rates = json::array();
            for (double v : r.rates)
                rates.push_back(std::isnan(v) ? json(nullptr) : json(v));
            json errors = json::object();
            for (std::size_t t = 0; t < r.errors.size(); ++t)
                if (!r.errors[t].empty())
                    errors[std::to_string(t)] = r.errors[t];
            rows.push_back({{"swept_value", r.value},
                            {"baseline", std::string(to_string(r.baseline))},
                            {"config_digest", r.config_digest},
                            {"failed_trials", r.failed},
                            {"flagged", r.flagged},
                            {"per_trial_rates", rates},
                            {"errors", errors}});
        }

        json meta = {{"sweep_kind", std::string(to_string(table.kind))},
                     {"config", config},
                     {"base_config_digest", config_digest(table.base)},
                     {"ris_height_m", table.base.geometry.ris_height},
                     {"ue_positions", ues},
                     {"flagged_points", std::count_if(table.rows.begin(), table.rows.end(),
                                                      [](const RateResult &r) { return r.flagged; })},
                     {"rows", rows},
                     {"notes",
                      {"mean and stderr are taken over successful trials",
                       "a point is flagged when more than 10 percent of its trials fail",
                       "ris_x and ris_y are means of the per-trial RIS or relay positions",
                       "ue_scenarios rows use swept_value as an index into ue_positions"}}};
        return meta.dump(2) + '\n';
    }

    void write_results(const ResultTable &table, const std::filesystem::path &csv_path)
    {
        std::string csv = format_csv(table);
        std::string meta = format_metadata(table);
        if (csv_path.has_parent_path())
            std::filesystem::create_directories(csv_path.parent_path());
        write_text(csv_path, csv);
        auto sidecar = csv_path;
        sidecar.replace_extension(".json");
        write_text(sidecar, meta);
    }

    std::vector<RateResult> parse_csv(std::string_view text)
    {
        std::istringstream in{std::string(text)};
        std::string line;
        if (!std::getline(in, line) || line != csv_header)
            throw std::runtime_error("unexpected CSV header");
        std::vector<RateResult> rows;
        int n = 1;
        while (std::getline(in, line))
        {
            ++n;
            if (line.empty())
                continue;
            auto f = split_csv_line(line);
            if (f.size() != 10)
                throw std::runtime_error("CSV line " + std::to_string(n) + ": expected 10 fields");
            try
            {
                RateResult r;
                r.sweep = sweep_kind_from_string(f[0]);
                r.value = std::stod(f[1]);
                r.baseline = baseline_from_string(f[2]);
                r.mean = std::stod(f[3]);
                r.stderr_mean = std::stod(f[4]);
                r.trials = std::stoi(f[5]);
                r.seed = std::stoull(f[6]);
                r.config_digest = f[7];
                r.ris_x = std::stod(f[8]);
                r.ris_y = std::stod(f[9]);
                rows.push_back(std::move(r));
            }
            catch (const std::exception &e)
            {
                throw std::runtime_error("CSV line " + std::to_string(n) + ": " + e.what());
            }
        }
        return rows;
    }

    std::vector<RateResult> read_results(const std::filesystem::path &csv_path)
    {
        std::ifstream in(csv_path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot read " + csv_path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_csv(ss.str());
    }

    std::string plot_script(const ResultTable &table, std::string_view csv_name)
    {
        require_single_kind(table);
        const auto &g = table.base.geometry;
        std::ostringstream py;
        py << "#!/usr/bin/env python3\n"
              "# Plots "
           << csv_name << " (" << to_string(table.kind)
           << " sweep).\n"
              "import csv\n"
              "import os\n"
              "from collections import OrderedDict\n\n"
              "import matplotlib\n"
              "matplotlib.use(\"Agg\")\n"
              "import matplotlib.pyplot as plt\n\n"
              "HERE = os.path.dirname(os.path.abspath(__file__))\n"
              "CSV = os.path.join(HERE, \""
           << csv_name
           << "\")\n"
              "KIND = \""
           << to_string(table.kind)
           << "\"\n"
              "PLATFORM = ("
           << fmt17(g.platform_x_min) << ", " << fmt17(g.platform_x_max) << ", " << fmt17(g.platform_y_min) << ", "
           << fmt17(g.platform_y_max)
           << ")\n\n"
              "series = OrderedDict()\n"
              "with open(CSV, newline=\"\") as f:\n"
              "    for row in csv.DictReader(f):\n"
              "        series.setdefault(row[\"baseline\"], []).append(\n"
              "            (float(row[\"swept_value\"]), float(row[\"mean_rate_bpshz\"]), float(row[\"stderr\"]),\n"
              "             float(row[\"ris_x\"]), float(row[\"ris_y\"])))\n\n"
              "XLABEL = {\"power\": \"transmit power P_T [dBm]\", \"elements\": \"RIS elements M_I\",\n"
              "          \"single\": \"transmit power P_T [dBm]\"}\n\n"
              "if KIND == \"ue_scenarios\":\n"
              "    fig, (ax, ax2) = plt.subplots(1, 2, figsize=(12, 4.5))\n"
              "    names = list(series)\n"
              "    width = 0.8 / max(len(names), 1)\n"
              "    for i, name in enumerate(names):\n"
              "        pts = series[name]\n"
              "        ax.bar([p[0] + (i - (len(names) - 1) / 2) * width for p in pts], [p[1] for p in pts],\n"
              "               width, yerr=[p[2] for p in pts], label=name)\n"
              "    ax.set_xlabel(\"UE scenario\")\n"
              "    ax.set_ylabel(\"achievable rate [bps/Hz]\")\n"
              "    ax.legend(fontsize=8)\n"
              "    x0, x1, y0, y1 = PLATFORM\n"
              "    ax2.add_patch(plt.Rectangle((x0, y0), x1 - x0, y1 - y0, fill=False, linestyle=\"--\"))\n"
              "    for name in names:\n"
              "        if name.startswith(\"movable_ris\"):\n"
              "            pts = series[name]\n"
              "            ax2.scatter([p[3] for p in pts], [p[4] for p in pts], label=name)\n"
              "            for p in pts:\n"
              "                ax2.annotate(\"UE %d\" % int(p[0]), (p[3], p[4]))\n"
              "    ax2.set_xlim(x0 - 5, x1 + 5)\n"
              "    ax2.set_ylim(y0 - 5, y1 + 5)\n"
              "    ax2.set_aspect(\"equal\")\n"
              "    ax2.set_xlabel(\"x [m]\")\n"
              "    ax2.set_ylabel(\"y [m]\")\n"
              "    ax2.legend(fontsize=8)\n"
              "else:\n"
              "    fig, ax = plt.subplots(figsize=(6.5, 4.5))\n"
              "    for name, pts in series.items():\n"
              "        ax.errorbar([p[0] for p in pts], [p[1] for p in pts], yerr=[p[2] for p in pts],\n"
              "                    marker=\"o\", capsize=3, label=name)\n"
              "    ax.set_xlabel(XLABEL[KIND])\n"
              "    ax.set_ylabel(\"achievable rate [bps/Hz]\")\n"
              "    ax.grid(True, alpha=0.3)\n"
              "    ax.legend(fontsize=8)\n\n"
              "fig.tight_layout()\n"
              "fig.savefig(os.path.splitext(CSV)[0] + \".png\", dpi=150)\n";
        return py.str();
    }

    void emit_plot_script(const ResultTable &table, const std::filesystem::path &script_path, std::string_view csv_name)
    {
        std::string text = plot_script(table, csv_name);
        if (script_path.has_parent_path())
            std::filesystem::create_directories(script_path.parent_path());
        write_text(script_path, text);
    }

    Scenario tiny_scenario(const Scenario &base, int ris_elements)
    {
        Scenario s = base;
        s.config.tx_antennas = {2, 2};
        s.config.rx_antennas = {2, 2};
        s.config.ris_elements = {1, ris_elements};
        s.config.rf_chains = {2, 4};
        return s;
    }

    OracleCheck oracle_check(const Scenario &base, int seeds, std::uint64_t seed, int particles, int iterations,
                             int position_steps, int phase_steps)
    {
        OracleCheck out;
        out.seeds = seeds;
        const RandomStream root(seed);
        for (int k = 0; k < seeds; ++k)
        {
            const int m = k % 2 == 0 ? 2 : 1;
            Scenario s = tiny_scenario(base, m);
            s.config.pso.particles = particles;
            s.config.pso.iterations = iterations;
            require_valid(s);

            TrialContext trial = make_trial(s, dbm_to_watts(s.config.tx_power_dbm), root.split(std::uint64_t(k)));
            RisProblem problem(s, trial.draws, trial.tx_power_w);
            JointResult swarm = run(problem, s.config.pso, trial.pso_stream);
            JointResult grid = brute_force_joint(problem, position_steps, phase_steps);

            for (std::size_t i = 1; i < swarm.history.size(); ++i)
                if (swarm.history[i] < swarm.history[i - 1])
                    out.histories_monotone = false;

            double ratio = grid.best_rate > 0.0 ? swarm.best_rate / grid.best_rate : 1.0;
            out.ratios.push_back(ratio);
            out.elements.push_back(m);
            if (ratio >= out.ratio_threshold)
                ++out.hits;
        }
        return out;
    }
}
