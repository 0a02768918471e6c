// Copyright 2026 The nomasched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "nomasched/channel.hpp"
#include "nomasched/engine.hpp"
#include "nomasched/io.hpp"
#include "nomasched/metrics.hpp"
#include "nomasched/power.hpp"
#include "nomasched/rate.hpp"
#include "nomasched/sched.hpp"

namespace py = pybind11;
using namespace nomasched;

namespace {

SchedulerKind kind_or_throw(const std::string& name) {
  const auto kind = parse_scheduler_kind(name);
  if (!kind) throw ConfigError("scheduler", "unknown kind '" + name + "'");
  return *kind;
}

std::string run_experiment_json(const std::string& config_text,
                                const std::string& kind) {
  const auto config = parse_config_string(config_text);
  ExperimentResult result;
  {
    py::gil_scoped_release release;
    result = run_experiment(config, kind_or_throw(kind));
  }
  return experiment_to_json(result).dump();
}

std::string run_comparison_json(const std::string& config_text,
                                const std::string& a, const std::string& b) {
  const auto config = parse_config_string(config_text);
  ComparisonResult cmp;
  {
    py::gil_scoped_release release;
    cmp = run_comparison(config, kind_or_throw(a), kind_or_throw(b));
  }
  nlohmann::json j;
  j["a"] = experiment_to_json(cmp.a);
  j["b"] = experiment_to_json(cmp.b);
  j["ratios"] = ratios_to_json(cmp.ratios);
  j["channels_paired"] = cmp.channels_paired;
  return j.dump();
}

std::vector<std::vector<UserId>> candidates(int K, int max_size, int min_size) {
  std::vector<std::vector<UserId>> out;
  for (const auto& c : enumerate_candidates(K, max_size, min_size)) {
    out.emplace_back(c.users().begin(), c.users().end());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_nomasched, m) {
  m.doc() = "NOMA/OMA proportional-fair scheduling simulator core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument",
                                          PyExc_ValueError);

  m.def("parse_config", [](const std::string& text) {
    return config_to_json(parse_config_string(text)).dump();
  });
  m.def("run_experiment", &run_experiment_json, py::arg("config"),
        py::arg("kind"));
  m.def("run_comparison", &run_comparison_json, py::arg("config"), py::arg("a"),
        py::arg("b"));
  m.def("gini", [](const std::vector<double>& r) { return gini(r); });
  m.def("percentile", [](const std::vector<double>& v, double p) {
    return percentile(v, p);
  });
  m.def("enumerate_candidates", &candidates, py::arg("num_users"),
        py::arg("max_size"), py::arg("min_size") = 1);
  m.def(
      "ftpa_allocate",
      [](const std::vector<double>& g, double p, double alpha) {
        return ftpa_allocate(g, p, alpha);
      },
      py::arg("norm_gains"), py::arg("subband_power"), py::arg("alpha"));
  m.def(
      "user_rates",
      [](const std::vector<UserId>& users, const std::vector<double>& gain2,
         const std::vector<double>& noise, const std::vector<double>& power,
         double bandwidth) {
        return user_rates(users, gain2, noise, power, bandwidth);
      },
      py::arg("users"), py::arg("gain2"), py::arg("noise"), py::arg("powers"),
      py::arg("subband_bandwidth_hz"));
  m.def("pathloss_db", &pathloss_db);
  m.def("scheduler_kinds", [] {
    std::vector<std::string> names;
    for (auto k : kAllSchedulerKinds) names.emplace_back(to_string(k));
    return names;
  });
}
