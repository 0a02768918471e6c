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

#include "nomasched/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <thread>

#include "nomasched/power.hpp"

namespace nomasched {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

void fnv1a(std::uint64_t& h, std::span<const double> values) {
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  }
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t drop_seed(std::uint64_t base_seed, int drop_index) {
  return splitmix64(base_seed +
                    kGolden * (static_cast<std::uint64_t>(drop_index) + 1));
}

void ExperimentConfig::validate() const {
  const auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  require(geometry.radius_m > 0.0, "cell_radius_m", "must be > 0");
  require(geometry.min_distance_m > 0.0 &&
              geometry.min_distance_m < geometry.radius_m,
          "min_distance_m", "must be in (0, cell_radius_m)");
  require(std::isfinite(geometry.bs_power_dbm), "pmax_dbm", "must be finite");
  require(geometry.bandwidth_hz > 0.0, "bandwidth_hz", "must be > 0");
  require(geometry.num_subbands >= 1, "num_subbands", "must be >= 1");
  require(geometry.noise_psd_mw_per_hz > 0.0, "noise_psd_mw_per_hz",
          "must be > 0");
  require(geometry.carrier_hz > 0.0, "carrier_hz", "must be > 0");
  require(geometry.shadowing_std_db >= 0.0, "shadowing_std_db", "must be >= 0");
  require(num_users >= 1, "num_users", "must be >= 1");
  require(max_users_per_subband >= 1 &&
              max_users_per_subband <= kMaxUsersPerSubband,
          "max_users_per_subband", "must be in [1, 3]");
  require(min_users_per_subband >= 1 &&
              min_users_per_subband <= max_users_per_subband,
          "min_users_per_subband", "must be in [1, max_users_per_subband]");
  require(!schedulers.empty(), "scheduler", "at least one kind required");
  for (SchedulerKind k : schedulers) {
    const int need = is_oma(k) ? 1 : max_users_per_subband;
    require(need <= num_users, "max_users_per_subband",
            "must not exceed num_users");
  }
  require(t_c >= 1.0, "t_c", "must be >= 1");
  require(b > 0.0, "b_factor", "must be > 0");
  require(std::isfinite(ftpa_alpha) && ftpa_alpha >= 0.0, "ftpa_alpha",
          "must be finite and >= 0");
  require(num_slots >= 1, "num_slots", "must be >= 1");
  require(num_drops >= 1, "num_drops", "must be >= 1");
  require(velocity_kmh >= 0.0, "velocity_kmh", "must be >= 0");
  require(epsilon_rate > 0.0, "epsilon_rate", "must be > 0");
  require(cell_edge_percentile >= 0.0 && cell_edge_percentile <= 100.0,
          "cell_edge_percentile", "must be in [0, 100]");
  require(num_sinusoids >= 1, "num_sinusoids", "must be >= 1");
  require(threads >= 0, "threads", "must be >= 0");

  if (!services.empty()) {
    std::vector<int> owner(num_users, 0);
    for (std::size_t i = 0; i < services.size(); ++i) {
      const std::string path = "services[" + std::to_string(i) + "]";
      if (!(services[i].target_rate_bps > 0.0)) {
        throw ConfigError(path + ".target_rate_bps", "must be > 0");
      }
      for (UserId k : services[i].users) {
        if (k >= static_cast<UserId>(num_users)) {
          throw ConfigError(path + ".users", "user id out of range");
        }
        ++owner[k];
      }
    }
    for (int k = 0; k < num_users; ++k) {
      if (owner[k] != 1) {
        throw ConfigError("services", "user " + std::to_string(k) +
                                          " must belong to exactly one class");
      }
    }
  }
}

SchedulerParams ExperimentConfig::scheduler_params(SchedulerKind kind) const {
  SchedulerParams p;
  p.kind = kind;
  p.max_users_per_subband = max_users_per_subband;
  p.min_users_per_subband = min_users_per_subband;
  p.t_c = t_c;
  p.b = b;
  p.epsilon_rate = epsilon_rate;
  p.weight_floor = weight_floor;
  p.clamp_weights = clamp_weights;
  p.first_slot_rule = first_slot_rule;
  p.subband_order = subband_order;
  if (!services.empty()) {
    p.service_target_bps.assign(num_users, 0.0);
    for (const auto& svc : services) {
      for (UserId k : svc.users) p.service_target_bps[k] = svc.target_rate_bps;
    }
  }
  return p;
}

LinkParams ExperimentConfig::link_params() const {
  return {equal_subband_power(geometry), ftpa_alpha,
          geometry.subband_bandwidth_hz()};
}

FadingConfig ExperimentConfig::fading_config() const {
  FadingConfig f;
  f.doppler_hz = doppler_hz(velocity_kmh, geometry.carrier_hz);
  f.model = fading_model;
  f.num_sinusoids = num_sinusoids;
  return f;
}

DropLog run_drop(const ExperimentConfig& config, SchedulerKind kind,
                 int drop_index, RunOptions options) {
  config.validate();
  DropLog log;
  log.drop_index = drop_index;
  log.seed = drop_seed(config.seed, drop_index);

  std::mt19937_64 placement_rng(splitmix64(log.seed ^ 0x1));
  log.placements =
      place_users(config.num_users, config.geometry, placement_rng);
  FadingProcess fading(config.num_users, config.geometry,
                       config.fading_config(), splitmix64(log.seed ^ 0x2));
  Scheduler scheduler(config.num_users, config.scheduler_params(kind),
                      config.link_params(), splitmix64(log.seed ^ 0x3));
  const double num_candidates =
      static_cast<double>(scheduler.candidates().size());

  log.stats = SchedulingStats(config.num_users);
  log.channel_hash = 0xCBF29CE484222325ULL;
  log.user_rate.reserve(config.num_slots);
  log.historical_rate.reserve(config.num_slots);
  for (int t = 0; t < config.num_slots; ++t) {
    const ChannelRealization channel = fading.next(log.placements);
    fnv1a(log.channel_hash, channel.gain2);
    AllocationResult slot = scheduler.allocate_slot(channel);
    scheduler.end_slot_update(slot);
    log.stats.add_slot(slot, num_candidates);
    log.user_rate.push_back(slot.user_rate);
    log.historical_rate.push_back(scheduler.state().historical_rate);
    if (options.keep_allocations) log.allocations.push_back(std::move(slot));
  }
  log.report = build_report(log.user_rate, scheduler.state().historical_rate,
                            static_cast<int>(config.t_c),
                            config.cell_edge_percentile, config.services);
  return log;
}

AggregateReport aggregate(const ExperimentConfig& config,
                          std::span<const DropLog> drop_logs) {
  if (drop_logs.empty()) throw InvalidArgument("aggregate: no drops");
  // Sum in drop-index order so the result is independent of input order.
  std::vector<std::reference_wrapper<const DropLog>> drops(drop_logs.begin(),
                                                           drop_logs.end());
  std::sort(drops.begin(), drops.end(), [](const DropLog& a, const DropLog& b) {
    return a.drop_index < b.drop_index;
  });
  AggregateReport agg;
  std::vector<double> thr, gl, su, pooled;
  for (const DropLog& d : drops) {
    thr.push_back(d.report.system_throughput_bps);
    gl.push_back(d.report.gini_long);
    su.push_back(d.report.service_utility);
    pooled.insert(pooled.end(), d.report.long_rates.begin(),
                  d.report.long_rates.end());
  }
  agg.system_throughput_bps = mean(thr);
  if (thr.size() > 1) {
    double ss = 0.0;
    for (double v : thr) {
      ss += (v - agg.system_throughput_bps) * (v - agg.system_throughput_bps);
    }
    agg.system_throughput_se_bps =
        std::sqrt(ss / static_cast<double>(thr.size() - 1) /
                  static_cast<double>(thr.size()));
  }
  agg.gini_long = mean(gl);
  agg.service_utility = mean(su);
  agg.cell_edge_bps = percentile(pooled, config.cell_edge_percentile);

  const DropLog& first = drops.front();
  const std::size_t slots = first.report.gini_short.size();
  agg.gini_short.assign(slots, 0.0);
  for (const DropLog& d : drops) {
    for (std::size_t t = 0; t < slots; ++t) {
      agg.gini_short[t] += d.report.gini_short[t];
    }
  }
  for (double& g : agg.gini_short) g /= static_cast<double>(drops.size());

  for (std::size_t i = 0; i < first.report.groups.size(); ++i) {
    GroupAggregate g;
    g.name = first.report.groups[i].name;
    g.target_rate_bps = first.report.groups[i].target_rate_bps;
    for (const DropLog& d : drops) {
      const auto& r = d.report.groups[i];
      g.mean_group_rate_bps += r.group_rate_bps;
      g.mean_gini += r.gini;
      g.success_fraction += r.success ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(drops.size());
    g.mean_group_rate_bps /= n;
    g.mean_gini /= n;
    g.success_fraction /= n;
    agg.groups.push_back(g);
  }
  return agg;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                SchedulerKind kind, RunOptions options) {
  config.validate();
  ExperimentResult result;
  result.kind = kind;
  result.drops.resize(config.num_drops);
  std::vector<std::exception_ptr> errors(config.num_drops);

  unsigned workers = config.threads > 0
                         ? static_cast<unsigned>(config.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, config.num_drops);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < config.num_drops; i = next++) {
      try {
        result.drops[i] = run_drop(config, kind, i, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (int i = 0; i < config.num_drops; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw DropError(i, e.what());
    }
  }
  result.aggregate = aggregate(config, result.drops);
  return result;
}

ComparisonResult run_comparison(const ExperimentConfig& config, SchedulerKind a,
                                SchedulerKind b, RunOptions options) {
  ComparisonResult out;
  out.a = run_experiment(config, a, options);
  out.b = run_experiment(config, b, options);
  out.channels_paired = true;
  SchedulingStats sa(config.num_users), sb(config.num_users);
  for (int i = 0; i < config.num_drops; ++i) {
    out.channels_paired =
        out.channels_paired &&
        out.a.drops[i].channel_hash == out.b.drops[i].channel_hash;
    sa.merge(out.a.drops[i].stats);
    sb.merge(out.b.drops[i].stats);
  }
  out.ratios = proposition_ratios(sa, sb);
  return out;
}

}  // namespace nomasched
