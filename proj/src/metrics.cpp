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

#include "nomasched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nomasched {

double gini(std::span<const double> rates) {
  if (rates.empty()) throw InvalidArgument("gini: empty rate vector");
  std::vector<double> sorted(rates.begin(), rates.end());
  for (double r : sorted) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw InvalidArgument("gini: rates must be finite and nonnegative");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const double K = static_cast<double>(sorted.size());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  if (total <= 0.0) throw InvalidArgument("gini: undefined for all-zero rates");
  // sum_x sum_y |r_x - r_y| = 2 sum_i (2i - K + 1) r_(i), ascending order.
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    pair_sum += (2.0 * static_cast<double>(i) - K + 1.0) * sorted[i];
  }
  return std::max(0.0, 2.0 * pair_sum / (2.0 * K * total));
}

std::vector<double> long_term_rates(
    std::span<const std::vector<double>> history, int t_c) {
  if (history.empty()) throw InvalidArgument("long_term_rates: no slots");
  if (t_c < 1) throw InvalidArgument("long_term_rates: t_c must be >= 1");
  const std::size_t window = std::min<std::size_t>(t_c, history.size());
  const std::size_t K = history.front().size();
  std::vector<double> r(K, 0.0);
  for (std::size_t t = history.size() - window; t < history.size(); ++t) {
    for (std::size_t k = 0; k < K; ++k) r[k] += history[t][k];
  }
  for (double& v : r) v /= static_cast<double>(window);
  return r;
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw InvalidArgument("percentile: empty input");
  if (!(p >= 0.0 && p <= 100.0)) {
    throw InvalidArgument("percentile: p must be in [0, 100]");
  }
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = p / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double cell_edge(std::span<const double> long_rates, double p) {
  return percentile(long_rates, p);
}

std::vector<std::optional<int>> rate_latency(
    std::span<const std::vector<double>> history) {
  const std::size_t K = history.empty() ? 0 : history.front().size();
  std::vector<std::optional<int>> out(K);
  for (std::size_t t = 0; t < history.size(); ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      if (!out[k] && history[t][k] > 0.0) out[k] = static_cast<int>(t) + 1;
    }
  }
  return out;
}

double service_utility(std::span<const double> historical_rate) {
  double u = 0.0;
  for (double T : historical_rate) u += std::log(T);
  return u;
}

std::vector<GroupReport> service_report(
    std::span<const double> long_rates,
    std::span<const ServiceClass> services) {
  std::vector<GroupReport> out;
  out.reserve(services.size());
  for (const auto& svc : services) {
    GroupReport g;
    g.name = svc.name;
    g.target_rate_bps = svc.target_rate_bps;
    std::vector<double> member;
    for (UserId k : svc.users) {
      if (k >= long_rates.size()) {
        throw InvalidArgument("service_report: member id out of range");
      }
      member.push_back(long_rates[k]);
    }
    if (member.empty()) {
      out.push_back(g);
      continue;
    }
    g.group_rate_bps = std::accumulate(member.begin(), member.end(), 0.0);
    g.min_member_rate_bps = *std::min_element(member.begin(), member.end());
    g.gini = g.group_rate_bps > 0.0 ? gini(member) : 0.0;
    g.success = g.min_member_rate_bps >= svc.target_rate_bps;
    out.push_back(g);
  }
  return out;
}

SchedulingStats::SchedulingStats(int num_users)
    : slots_scheduled(num_users, 0),
      events(num_users, 0),
      rate_sum(num_users, 0.0),
      weight_samples(num_users, 0),
      normalized_weight_sum(num_users, 0.0),
      literal_weight_sum(num_users, 0.0) {}

void SchedulingStats::add_slot(const AllocationResult& slot,
                               double num_candidates) {
  ++num_slots;
  std::vector<bool> seen(num_users(), false);
  for (const auto& a : slot.subbands) {
    const bool has_weight = a.candidate_weight_sum > 0.0;
    const double share =
        has_weight ? a.set_weight / a.candidate_weight_sum : 0.0;
    for (int i = 0; i < a.users.size(); ++i) {
      const UserId k = a.users[i];
      seen[k] = true;
      ++events[k];
      rate_sum[k] += a.link.rate[i];
      if (has_weight) {
        ++weight_samples[k];
        literal_weight_sum[k] += share;
        normalized_weight_sum[k] += share * num_candidates;
      }
    }
  }
  for (int k = 0; k < num_users(); ++k) {
    if (seen[k]) ++slots_scheduled[k];
  }
}

void SchedulingStats::merge(const SchedulingStats& other) {
  if (other.num_users() != num_users()) {
    throw InvalidArgument("SchedulingStats::merge: user count mismatch");
  }
  num_slots += other.num_slots;
  for (int k = 0; k < num_users(); ++k) {
    slots_scheduled[k] += other.slots_scheduled[k];
    events[k] += other.events[k];
    rate_sum[k] += other.rate_sum[k];
    weight_samples[k] += other.weight_samples[k];
    normalized_weight_sum[k] += other.normalized_weight_sum[k];
    literal_weight_sum[k] += other.literal_weight_sum[k];
  }
}

PropositionRatios proposition_ratios(const SchedulingStats& weighted,
                                     const SchedulingStats& conventional) {
  const int K = weighted.num_users();
  if (conventional.num_users() != K) {
    throw InvalidArgument("proposition_ratios: user count mismatch");
  }
  if (weighted.num_slots == 0 || conventional.num_slots == 0) {
    throw InvalidArgument("proposition_ratios: empty logs");
  }
  const bool has_weights = std::any_of(weighted.weight_samples.begin(),
                                       weighted.weight_samples.end(),
                                       [](long long n) { return n > 0; });

  PropositionRatios out;
  out.per_user_ratio1.assign(K, std::numeric_limits<double>::quiet_NaN());
  double log_r1 = 0.0;
  double log_r2 = 0.0;
  double log_r2_raw = 0.0;
  int used = 0;
  for (int k = 0; k < K; ++k) {
    const bool usable = weighted.slots_scheduled[k] > 0 &&
                        conventional.slots_scheduled[k] > 0 &&
                        (!has_weights || weighted.weight_samples[k] > 0);
    if (!usable) {
      out.excluded.push_back(static_cast<UserId>(k));
      continue;
    }
    const double pr = static_cast<double>(weighted.slots_scheduled[k]) /
                      static_cast<double>(weighted.num_slots);
    const double pr_conv =
        static_cast<double>(conventional.slots_scheduled[k]) /
        static_cast<double>(conventional.num_slots);
    out.per_user_ratio1[k] = pr / pr_conv;
    log_r1 += std::log(out.per_user_ratio1[k]);

    const double mean_rate =
        weighted.rate_sum[k] / static_cast<double>(weighted.events[k]);
    const double mean_rate_conv =
        conventional.rate_sum[k] / static_cast<double>(conventional.events[k]);
    const double rate_term = std::log(mean_rate) - std::log(mean_rate_conv);
    double share = 0.0;
    double raw_share = 0.0;
    if (has_weights) {
      const double n = static_cast<double>(weighted.weight_samples[k]);
      share = std::log(weighted.normalized_weight_sum[k] / n);
      raw_share = std::log(weighted.literal_weight_sum[k] / n);
    }
    log_r2 += share + rate_term;
    log_r2_raw += raw_share + rate_term;
    ++used;
  }
  if (used == 0) {
    throw InvalidArgument("proposition_ratios: no user scheduled in both runs");
  }
  out.ratio1 = std::exp(log_r1 / used);
  out.ratio2 = std::exp(log_r2);
  out.log10_ratio2_raw_share = log_r2_raw / std::log(10.0);
  return out;
}

MetricsReport build_report(std::span<const std::vector<double>> rate_history,
                           std::span<const double> final_historical_rate,
                           int t_c, double cell_edge_percentile,
                           std::span<const ServiceClass> services) {
  if (rate_history.empty()) throw InvalidArgument("build_report: no slots");
  MetricsReport r;
  double total = 0.0;
  r.gini_short.reserve(rate_history.size());
  for (const auto& slot : rate_history) {
    const double sum = std::accumulate(slot.begin(), slot.end(), 0.0);
    total += sum;
    r.gini_short.push_back(sum > 0.0 ? gini(slot) : 1.0);
  }
  r.system_throughput_bps = total / static_cast<double>(rate_history.size());
  r.long_rates = long_term_rates(rate_history, t_c);
  const double long_sum =
      std::accumulate(r.long_rates.begin(), r.long_rates.end(), 0.0);
  r.gini_long = long_sum > 0.0 ? gini(r.long_rates) : 1.0;
  r.cell_edge_bps = cell_edge(r.long_rates, cell_edge_percentile);
  r.rate_latency = rate_latency(rate_history);
  r.service_utility = service_utility(final_historical_rate);
  if (!services.empty()) r.groups = service_report(r.long_rates, services);
  return r;
}

}  // namespace nomasched
