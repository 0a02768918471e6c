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

#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "nomasched/engine.hpp"

namespace nomasched {

/// Parses a JSON experiment description. Omitted keys keep their defaults;
/// unknown keys, type mismatches and constraint violations raise
/// ConfigError with the key path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Full config (every key, defaults included); parse_config inverts it.
nlohmann::json config_to_json(const ExperimentConfig& config);

inline constexpr int kSummarySchemaVersion = 1;

/// One metric value of one experiment, the unit of metrics.csv.
struct OutputRow {
  std::string experiment_id;
  std::string scheduler;
  int num_users = 0;
  int num_subbands = 0;
  int num_drops = 0;
  std::string metric;
  double value = 0.0;
  std::string unit;
};

std::vector<OutputRow> metric_rows(const std::string& experiment_id,
                                   const ExperimentConfig& config,
                                   const ExperimentResult& result);

/// RFC 4180 CSV, doubles with 17 significant digits.
std::string format_double(double v);
std::string csv_escape(const std::string& field);
std::string rows_to_csv(const std::vector<OutputRow>& rows);

nlohmann::json report_to_json(const MetricsReport& report);
nlohmann::json aggregate_to_json(const AggregateReport& report);
nlohmann::json experiment_to_json(const ExperimentResult& result);
nlohmann::json ratios_to_json(const PropositionRatios& ratios);

/// scheduler,drop,user,slot,rate_bps,historical_rate_bps rows, one per
/// (drop, user, slot).
std::string user_series_csv(const ExperimentResult& result);
/// slot,scheduler,gini rows of the drop-averaged short-term Gini.
std::string gini_short_csv(const std::vector<ExperimentResult>& results);

/// Writes `contents` to `path`, throwing std::runtime_error with the path on
/// failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace nomasched
