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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace spider_ris;

namespace
{
    Scenario scenario_from(const std::string &text)
    {
        Scenario s = parse_scenario(text);
        require_valid(s);
        return s;
    }

    py::dict row_to_dict(const RateResult &r)
    {
        py::dict d;
        d["sweep_kind"] = std::string(to_string(r.sweep));
        d["swept_value"] = r.value;
        d["baseline"] = std::string(to_string(r.baseline));
        d["mean_rate_bpshz"] = r.mean;
        d["stderr"] = r.stderr_mean;
        d["trials"] = r.trials;
        d["seed"] = r.seed;
        d["config_digest"] = r.config_digest;
        d["ris_x"] = r.ris_x;
        d["ris_y"] = r.ris_y;
        d["rates"] = r.rates;
        d["failed"] = r.failed;
        d["flagged"] = r.flagged;
        return d;
    }

    std::vector<BaselineKind> kinds_from(const std::vector<std::string> &names)
    {
        if (names.empty())
            return {all_baseline_kinds.begin(), all_baseline_kinds.end()};
        std::vector<BaselineKind> out;
        for (const auto &n : names)
            out.push_back(baseline_from_string(n));
        return out;
    }
}

PYBIND11_MODULE(_spider_ris, m)
{
    m.doc() = "Movable RIS assisted mmWave hybrid beamforming simulator";

    py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);

    m.def("default_config", []() { return serialize(default_config()); },
          "Default scenario as 'key = value' text.");
    m.def("config_digest", [](const std::string &text) { return config_digest(scenario_from(text)); },
          py::arg("config"));
    m.def("config_keys", &config_keys);
    m.def("baseline_names", []()
          {
              std::vector<std::string> n;
              for (auto k : all_baseline_kinds)
                  n.emplace_back(to_string(k));
              return n;
          });

    m.def("noise_power", &noise_power, py::arg("noise_psd_dbm_per_hz"), py::arg("bandwidth_hz"));
    m.def("path_loss_linear", &path_loss_linear, py::arg("carrier_ghz"), py::arg("distance_m"), py::arg("exponent"));
    m.def("steering_vector", [](double el, double az, int mx, int my, double d)
          { return CVector(steering_vector(el, az, {mx, my}, d)); },
          py::arg("elevation"), py::arg("azimuth"), py::arg("mx"), py::arg("my"), py::arg("spacing") = 0.5);
    m.def("decode", [](const std::vector<double> &p, const std::string &config)
          {
              RisState s = decode(p, scenario_from(config).geometry);
              return py::make_tuple(s.x, s.y, s.phases);
          },
          py::arg("particle"), py::arg("config") = serialize(default_config()));

    m.def("channels", [](const std::string &config, std::uint64_t seed, double x, double y)
          {
              Scenario s = scenario_from(config);
              ChannelRealization r = realize_channels(s, draw_channels(s.config, RandomStream(seed)), x, y);
              return py::make_tuple(r.h_ti, r.h_ir);
          },
          py::arg("config"), py::arg("seed"), py::arg("ris_x"), py::arg("ris_y"),
          "(H_TI, H_IR) for one trial with the RIS at (ris_x, ris_y).");

    m.def("monte_carlo_point", [](const std::string &config, const std::string &baseline, int trials, std::uint64_t seed)
          {
              Scenario s = scenario_from(config);
              RateResult r;
              {
                  py::gil_scoped_release release;
                  r = monte_carlo_point(s, baseline_from_string(baseline), trials, seed);
              }
              return row_to_dict(r);
          },
          py::arg("config"), py::arg("baseline"), py::arg("trials"), py::arg("seed"));

    m.def("sweep", [](const std::string &kind, const std::string &config, std::vector<double> values,
                      std::vector<std::string> baselines, std::optional<int> trials, std::optional<std::uint64_t> seed,
                      std::string out)
          {
              Scenario s = scenario_from(config);
              SweepSpec spec = default_sweep(sweep_kind_from_string(kind), s);
              if (!values.empty())
                  spec.values = values;
              spec.baselines = kinds_from(baselines);
              if (trials)
                  spec.trials = *trials;
              if (seed)
                  spec.seed = *seed;
              ResultTable t;
              {
                  py::gil_scoped_release release;
                  t = sweep(spec, s);
              }
              if (!out.empty())
              {
                  std::filesystem::path csv(out);
                  write_results(t, csv);
                  auto script = csv.parent_path() / ("plot_" + csv.stem().string() + ".py");
                  emit_plot_script(t, script, csv.filename().string());
              }
              py::list rows;
              for (const auto &r : t.rows)
                  rows.append(row_to_dict(r));
              return rows;
          },
          py::arg("kind"), py::arg("config") = serialize(default_config()), py::arg("values") = std::vector<double>{},
          py::arg("baselines") = std::vector<std::string>{}, py::arg("trials") = std::nullopt,
          py::arg("seed") = std::nullopt, py::arg("out") = "",
          "Run a sweep ('power', 'elements', 'ue_scenarios' or 'single'). With out, also writes the CSV, the JSON "
          "sidecar and a plot script next to it.");

    m.def("oracle_check", [](const std::string &config, int runs, std::uint64_t seed)
          {
              OracleCheck r;
              {
                  py::gil_scoped_release release;
                  r = oracle_check(scenario_from(config), runs, seed);
              }
              py::dict d;
              d["hits"] = r.hits;
              d["runs"] = r.seeds;
              d["ratios"] = r.ratios;
              d["histories_monotone"] = r.histories_monotone;
              return d;
          },
          py::arg("config") = serialize(default_config()), py::arg("runs") = 50, py::arg("seed") = 1);
}
