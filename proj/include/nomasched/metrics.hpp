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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nomasched/sched.hpp"

namespace nomasched {

/// Gini fairness index, (1 / (2 K^2 mean)) sum_x sum_y |r_x - r_y|.
/// Throws InvalidArgument for empty, negative or all-zero input.
double gini(std::span<const double> rates);

/// Per-user average of R_k(t) over the last min(t_c, slots) slots.
/// `history` is slot-major: history[t][k].
std::vector<double> long_term_rates(
    std::span<const std::vector<double>> history, int t_c);

/// Linear-interpolation percentile (p in [0, 100]) of the pooled samples.
double percentile(std::span<const double> values, double p);

/// Cell-edge throughput: the `p`-th percentile of per-user long-term rates.
double cell_edge(std::span<const double> long_rates, double p = 5.0);

/// First 1-based slot with R_k(t) > 0 per user; nullopt if never served.
std::vector<std::optional<int>> rate_latency(
    std::span<const std::vector<double>> history);

/// sum_k log T_k.
double service_utility(std::span<const double> historical_rate);

struct GroupReport {
  std::string name;
  double target_rate_bps = 0.0;
  double group_rate_bps = 0.0;  // sum of member long-term rates
  double min_member_rate_bps = 0.0;
  double gini = 0.0;
  bool success = false;  // every member at or above its target
};

std::vector<GroupReport> service_report(std::span<const double> long_rates,
                                        std::span<const ServiceClass> services);

/// Per-user sufficient statistics for the scheduling-probability and
/// normalized-weight ratio checks. Additive across slots and drops.
struct SchedulingStats {
  explicit SchedulingStats(int num_users = 0);

  void add_slot(const AllocationResult& slot, double num_candidates);
  void merge(const SchedulingStats& other);

  int num_users() const { return static_cast<int>(slots_scheduled.size()); }

  long long num_slots = 0;
  std::vector<long long> slots_scheduled;  // slots with >= 1 subband
  std::vector<long long> events;           // (slot, subband) assignments
  std::vector<double> rate_sum;            // sum of R(s,k) over events
  // N_U * W(U_k) / sum_U W(U) over decisions with a positive weight sum.
  std::vector<long long> weight_samples;
  std::vector<double> normalized_weight_sum;
  std::vector<double> literal_weight_sum;  // W(U_k) / sum_U W(U)
};

struct PropositionRatios {
  // Geometric mean over users of Pr_k / Pr'_k.
  double ratio1 = 0.0;
  // [prod_k E[weight share] prod_k E[R]] / prod_k E[R'], weight share
  // relative to the uniform share 1/N_U.
  double ratio2 = 0.0;
  // log10 of the same product with the raw share W(U_k) / sum_U W(U).
  double log10_ratio2_raw_share = 0.0;
  std::vector<double> per_user_ratio1;  // NaN for excluded users
  std::vector<UserId> excluded;
};

/// Compares a weighted run against a conventional run on paired seeds. When
/// the first run logged no weights the weight-share factor is 1.
PropositionRatios proposition_ratios(const SchedulingStats& weighted,
                                     const SchedulingStats& conventional);

/// Per-drop summary.
struct MetricsReport {
  double system_throughput_bps = 0.0;  // mean over slots of sum_k R_k(t)
  double gini_long = 0.0;
  std::vector<double> gini_short;  // per slot
  double cell_edge_bps = 0.0;
  std::vector<std::optional<int>> rate_latency;
  double service_utility = 0.0;
  std::vector<double> long_rates;
  std::vector<GroupReport> groups;
};

MetricsReport build_report(std::span<const std::vector<double>> rate_history,
                           std::span<const double> final_historical_rate,
                           int t_c, double cell_edge_percentile,
                           std::span<const ServiceClass> services);

}  // namespace nomasched
