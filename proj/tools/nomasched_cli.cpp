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

// Command-line front end: run, sweep and compare experiments.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "nomasched/engine.hpp"
#include "nomasched/io.hpp"

namespace fs = std::filesystem;
using namespace nomasched;
using nlohmann::json;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

// NOMASCHED_LOG=quiet|info|debug
int log_level() {
  const char* env = std::getenv("NOMASCHED_LOG");
  if (env == nullptr) return 1;
  const std::string v(env);
  if (v == "quiet" || v == "0") return 0;
  if (v == "debug" || v == "2") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[nomasched] " << msg << '\n';
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[nomasched] " << msg << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             ": " + ec.message());
  }
}

json summary_header(const ExperimentConfig& config, const std::string& cmd) {
  json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["command"] = cmd;
  j["config"] = config_to_json(config);
  return j;
}

ExperimentResult run_logged(const ExperimentConfig& config, SchedulerKind kind,
                            const std::string& id) {
  log_info(id + " " + std::string(to_string(kind)) + ": " +
           std::to_string(config.num_drops) + " drops x " +
           std::to_string(config.num_slots) + " slots");
  ExperimentResult r = run_experiment(config, kind);
  log_debug("  throughput " + format_double(r.aggregate.system_throughput_bps) +
            " bps, gini_long " + format_double(r.aggregate.gini_long));
  return r;
}

void cmd_run(const ExperimentConfig& config, const fs::path& out) {
  ensure_dir(out);
  std::vector<OutputRow> rows;
  std::vector<ExperimentResult> results;
  json summary = summary_header(config, "run");
  summary["experiments"] = json::array();
  std::string series;
  for (SchedulerKind kind : config.schedulers) {
    results.push_back(run_logged(config, kind, "run"));
    const auto r = metric_rows("run", config, results.back());
    rows.insert(rows.end(), r.begin(), r.end());
    summary["experiments"].push_back(experiment_to_json(results.back()));
    std::string csv = user_series_csv(results.back());
    // keep a single header
    if (!series.empty()) csv.erase(0, csv.find('\n') + 1);
    series += csv;
  }
  write_file(out / "metrics.csv", rows_to_csv(rows));
  write_file(out / "summary.json", summary.dump(2) + "\n");
  write_file(out / "user_rates.csv", series);
  write_file(out / "gini_short.csv", gini_short_csv(results));
}

void cmd_sweep(const ExperimentConfig& base, const std::string& axis,
               const std::vector<std::string>& values, const fs::path& out) {
  if (values.empty()) throw ConfigError("--values", "must not be empty");
  ensure_dir(out);
  std::vector<OutputRow> rows;
  json summary = summary_header(base, "sweep");
  summary["axis"] = axis;
  summary["points"] = json::array();
  for (const std::string& value : values) {
    ExperimentConfig config = base;
    const std::string id = axis + "=" + value;
    try {
      if (axis == "K") {
        config.num_users = std::stoi(value);
      } else if (axis == "S") {
        config.geometry.num_subbands = std::stoi(value);
      } else {
        const auto kind = parse_scheduler_kind(value);
        if (!kind) throw ConfigError("--values", "unknown scheduler " + value);
        config.schedulers = {*kind};
      }
    } catch (const std::logic_error&) {
      throw ConfigError("--values", "not an integer: " + value);
    }
    config.validate();
    json point;
    point["value"] = value;
    point["experiments"] = json::array();
    for (SchedulerKind kind : config.schedulers) {
      const ExperimentResult r = run_logged(config, kind, id);
      const auto rr = metric_rows(id, config, r);
      rows.insert(rows.end(), rr.begin(), rr.end());
      json e = experiment_to_json(r);
      e.erase("drops");
      point["experiments"].push_back(std::move(e));
    }
    summary["points"].push_back(std::move(point));
  }
  write_file(out / "metrics.csv", rows_to_csv(rows));
  write_file(out / "summary.json", summary.dump(2) + "\n");
}

void cmd_compare(const ExperimentConfig& config, SchedulerKind a,
                 SchedulerKind b, const fs::path& out) {
  ensure_dir(out);
  log_info("compare " + std::string(to_string(a)) + " vs " +
           std::string(to_string(b)));
  const ComparisonResult cmp = run_comparison(config, a, b);
  if (!cmp.channels_paired) {
    throw std::runtime_error("channel realizations differ between runs");
  }
  std::vector<OutputRow> rows = metric_rows("compare", config, cmp.a);
  const auto rb = metric_rows("compare", config, cmp.b);
  rows.insert(rows.end(), rb.begin(), rb.end());
  OutputRow ratio;
  ratio.experiment_id = "compare";
  ratio.scheduler =
      std::string(to_string(a)) + "_vs_" + std::string(to_string(b));
  ratio.num_users = config.num_users;
  ratio.num_subbands = config.geometry.num_subbands;
  ratio.num_drops = config.num_drops;
  ratio.unit = "1";
  ratio.metric = "ratio1";
  ratio.value = cmp.ratios.ratio1;
  rows.push_back(ratio);
  ratio.metric = "ratio2";
  ratio.value = cmp.ratios.ratio2;
  rows.push_back(ratio);
  ratio.metric = "log10_ratio2_raw_share";
  ratio.value = cmp.ratios.log10_ratio2_raw_share;
  rows.push_back(ratio);

  json summary = summary_header(config, "compare");
  summary["a"] = experiment_to_json(cmp.a);
  summary["b"] = experiment_to_json(cmp.b);
  summary["ratios"] = ratios_to_json(cmp.ratios);
  summary["channels_paired"] = cmp.channels_paired;
  write_file(out / "metrics.csv", rows_to_csv(rows));
  write_file(out / "summary.json", summary.dump(2) + "\n");
  write_file(out / "gini_short.csv", gini_short_csv({cmp.a, cmp.b}));
}

SchedulerKind kind_arg(const std::string& name, const char* flag) {
  const auto kind = parse_scheduler_kind(name);
  if (!kind) throw ConfigError(flag, "unknown scheduler '" + name + "'");
  return *kind;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Downlink NOMA/OMA proportional-fair scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string axis;
  std::vector<std::string> values;
  std::string kind_a, kind_b;

  auto* run = app.add_subcommand("run", "Run every configured scheduler");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Sweep one axis");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--axis", axis, "K, S or scheduler")
      ->required()
      ->check(CLI::IsMember({"K", "S", "scheduler"}));
  sweep->add_option("--values", values, "Comma-separated axis values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory")->required();

  auto* compare = app.add_subcommand("compare", "Paired-seed comparison");
  compare->add_option("--config", config_path, "JSON config file")->required();
  compare->add_option("--a", kind_a, "Weighted scheduler")->required();
  compare->add_option("--b", kind_b, "Reference scheduler")->required();
  compare->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config = parse_config_file(config_path);
    if (run->parsed()) {
      cmd_run(config, out_dir);
    } else if (sweep->parsed()) {
      cmd_sweep(config, axis, values, out_dir);
    } else {
      const SchedulerKind a = kind_arg(kind_a, "--a");
      const SchedulerKind b = kind_arg(kind_b, "--b");
      config.schedulers = {a, b};
      config.validate();
      cmd_compare(config, a, b, out_dir);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return 0;
}
