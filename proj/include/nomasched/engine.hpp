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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nomasched/channel.hpp"
#include "nomasched/metrics.hpp"
#include "nomasched/sched.hpp"

namespace nomasched {

/// Everything needed to reproduce one simulation campaign.
struct ExperimentConfig {
  CellGeometry geometry;
  int num_users = 15;
  int max_users_per_subband = 2;
  std::vector<SchedulerKind> schedulers = {SchedulerKind::kWnopf};
  double t_c = 100.0;
  double b = 1.5;
  double ftpa_alpha = 0.4;
  int num_slots = 100;
  int num_drops = 20;
  std::uint64_t seed = 1;
  double velocity_kmh = 50.0;
  std::vector<ServiceClass> services;

  // Study switches.
  int min_users_per_subband = 1;
  double epsilon_rate = 1e-3;
  double weight_floor = 0.0;
  bool clamp_weights = true;
  FirstSlotRule first_slot_rule = FirstSlotRule::kWeightedKinds;
  SubbandOrder subband_order = SubbandOrder::kAscending;
  double cell_edge_percentile = 5.0;
  FadingModel fading_model = FadingModel::kAutoregressive;
  int num_sinusoids = 16;
  // Worker threads for drop-level parallelism; 0 picks the hardware count.
  int threads = 0;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  SchedulerParams scheduler_params(SchedulerKind kind) const;
  LinkParams link_params() const;
  FadingConfig fading_config() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

/// Child seed of drop `drop_index`: splitmix64 over the base seed advanced
/// by the golden-ratio increment, so every (seed, drop) pair is independent
/// of how many drops run or in which order.
std::uint64_t drop_seed(std::uint64_t base_seed, int drop_index);
std::uint64_t splitmix64(std::uint64_t x);

/// A failure inside one drop, tagged with the drop index.
class DropError : public std::runtime_error {
 public:
  DropError(int drop_index, const std::string& what)
      : std::runtime_error("drop " + std::to_string(drop_index) + ": " + what),
        drop_index_(drop_index) {}
  int drop_index() const { return drop_index_; }

 private:
  int drop_index_;
};

struct RunOptions {
  bool keep_allocations = false;
};

struct DropLog {
  int drop_index = 0;
  std::uint64_t seed = 0;
  std::vector<UserPlacement> placements;
  // Slot-major R_k(t) and T_k after the slot's update.
  std::vector<std::vector<double>> user_rate;
  std::vector<std::vector<double>> historical_rate;
  // Per-slot assignments; empty unless RunOptions::keep_allocations.
  std::vector<AllocationResult> allocations;
  SchedulingStats stats;
  // FNV-1a over every channel realization consumed.
  std::uint64_t channel_hash = 0;
  MetricsReport report;
};

struct GroupAggregate {
  std::string name;
  double target_rate_bps = 0.0;
  double mean_group_rate_bps = 0.0;
  double mean_gini = 0.0;
  double success_fraction = 0.0;
};

struct AggregateReport {
  double system_throughput_bps = 0.0;
  double system_throughput_se_bps = 0.0;
  double gini_long = 0.0;
  double cell_edge_bps = 0.0;      // percentile over rates pooled across drops
  std::vector<double> gini_short;  // per slot, mean over drops
  double service_utility = 0.0;
  std::vector<GroupAggregate> groups;
};

struct ExperimentResult {
  SchedulerKind kind = SchedulerKind::kWnopf;
  std::vector<DropLog> drops;
  AggregateReport aggregate;
};

DropLog run_drop(const ExperimentConfig& config, SchedulerKind kind,
                 int drop_index, RunOptions options = {});

/// Runs all drops (in parallel when config.threads allows) and aggregates
/// them in drop-index order.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                SchedulerKind kind, RunOptions options = {});

/// Order-insensitive aggregation; `drops` must be sorted by drop index.
AggregateReport aggregate(const ExperimentConfig& config,
                          std::span<const DropLog> drops);

struct ComparisonResult {
  ExperimentResult a;
  ExperimentResult b;
  PropositionRatios ratios;
  bool channels_paired = false;
};

/// Runs both kinds on identical placements and fading and compares them
/// (`a` plays the weighted role).
ComparisonResult run_comparison(const ExperimentConfig& config, SchedulerKind a,
                                SchedulerKind b, RunOptions options = {});

}  // namespace nomasched
