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

#include <doctest.h>

#include <cmath>
#include <set>

#include "nomasched/engine.hpp"

using namespace nomasched;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.num_users = 6;
  c.geometry.num_subbands = 16;
  c.num_slots = 30;
  c.num_drops = 4;
  c.seed = 42;
  c.threads = 2;
  return c;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("seed derivation is deterministic and distinct per drop") {
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    std::set<std::uint64_t> seeds;
    for (int i = 0; i < 1000; ++i) seeds.insert(drop_seed(7, i));
    CHECK(seeds.size() == 1000);
    CHECK(drop_seed(7, 3) == drop_seed(7, 3));
    CHECK(drop_seed(7, 3) != drop_seed(8, 3));
  }

  TEST_CASE("config validation names the key") {
    auto c = small_config();
    CHECK_NOTHROW(c.validate());
    c.num_users = 0;
    try {
      c.validate();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key_path() == "num_users");
    }
    c = small_config();
    c.num_slots = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.services = {{"a", 1e6, {0, 1, 2}}};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(run_drop(c, SchedulerKind::kWnopf, 0), ConfigError);
  }

  TEST_CASE("single slot: one allocation covering every subband") {
    auto c = small_config();
    c.num_slots = 1;
    for (auto kind : kAllSchedulerKinds) {
      const auto log = run_drop(c, kind, 0, RunOptions{true});
      REQUIRE(log.allocations.size() == 1);
      CHECK(log.allocations[0].subbands.size() == 16);
      CHECK(log.user_rate.size() == 1);
    }
  }

  TEST_CASE("every slot assigns all subbands at full size") {
    ExperimentConfig c;
    c.num_slots = 100;
    c.num_drops = 1;
    const auto log = run_drop(c, SchedulerKind::kPfNoma, 0, RunOptions{true});
    REQUIRE(log.allocations.size() == 100);
    for (const auto& slot : log.allocations) {
      std::set<int> seen;
      for (const auto& a : slot.subbands) seen.insert(a.subband);
      CHECK(seen.size() == 128);
    }
    CHECK(log.historical_rate.size() == 100);
    CHECK(log.placements.size() == 15);
    CHECK(log.stats.num_slots == 100);
  }

  TEST_CASE("identical drops are bit-identical") {
    const auto c = small_config();
    const auto a = run_drop(c, SchedulerKind::kWnopf, 2);
    const auto b = run_drop(c, SchedulerKind::kWnopf, 2);
    CHECK(a.user_rate == b.user_rate);
    CHECK(a.historical_rate == b.historical_rate);
    CHECK(a.channel_hash == b.channel_hash);
    CHECK(a.seed == drop_seed(c.seed, 2));
    const auto other = run_drop(c, SchedulerKind::kWnopf, 3);
    CHECK(other.channel_hash != a.channel_hash);
  }

  TEST_CASE("thread count does not change results") {
    auto c = small_config();
    c.threads = 1;
    const auto one = run_experiment(c, SchedulerKind::kJointWnopf);
    c.threads = 4;
    const auto four = run_experiment(c, SchedulerKind::kJointWnopf);
    REQUIRE(one.drops.size() == four.drops.size());
    for (std::size_t i = 0; i < one.drops.size(); ++i) {
      CHECK(one.drops[i].drop_index == static_cast<int>(i));
      CHECK(one.drops[i].user_rate == four.drops[i].user_rate);
    }
    CHECK(one.aggregate.system_throughput_bps ==
          four.aggregate.system_throughput_bps);
    CHECK(one.aggregate.gini_short == four.aggregate.gini_short);
  }

  TEST_CASE("one drop: aggregate equals the drop report") {
    auto c = small_config();
    c.num_drops = 1;
    const auto r = run_experiment(c, SchedulerKind::kPfNoma);
    const auto& rep = r.drops[0].report;
    CHECK(r.aggregate.system_throughput_bps == rep.system_throughput_bps);
    CHECK(r.aggregate.gini_long == rep.gini_long);
    CHECK(r.aggregate.cell_edge_bps == rep.cell_edge_bps);
    CHECK(r.aggregate.gini_short == rep.gini_short);
    CHECK(r.aggregate.service_utility == rep.service_utility);
  }

  TEST_CASE("aggregation does not depend on drop order") {
    const auto c = small_config();
    auto r = run_experiment(c, SchedulerKind::kWnopf);
    std::vector<DropLog> reversed(r.drops.rbegin(), r.drops.rend());
    const auto agg = aggregate(c, reversed);
    CHECK(agg.system_throughput_bps == r.aggregate.system_throughput_bps);
    CHECK(agg.gini_long == r.aggregate.gini_long);
    CHECK(agg.cell_edge_bps == r.aggregate.cell_edge_bps);
    CHECK(agg.gini_short == r.aggregate.gini_short);
  }

  TEST_CASE("more drops refine precision, not the expectation") {
    auto c = small_config();
    c.num_drops = 10;
    const auto ten = run_experiment(c, SchedulerKind::kPfNoma);
    c.num_drops = 20;
    const auto twenty = run_experiment(c, SchedulerKind::kPfNoma);
    // The first ten drops are shared.
    for (int i = 0; i < 10; ++i) {
      CHECK(ten.drops[i].user_rate == twenty.drops[i].user_rate);
    }
    const double diff = std::abs(ten.aggregate.system_throughput_bps -
                                 twenty.aggregate.system_throughput_bps);
    CHECK(diff <= 3.0 * ten.aggregate.system_throughput_se_bps);
    CHECK(twenty.aggregate.system_throughput_se_bps > 0.0);
  }

  TEST_CASE("comparison runs share channels; a = b gives identical reports") {
    const auto c = small_config();
    const auto cmp =
        run_comparison(c, SchedulerKind::kPfNoma, SchedulerKind::kPfNoma);
    CHECK(cmp.channels_paired);
    CHECK(cmp.a.aggregate.system_throughput_bps ==
          cmp.b.aggregate.system_throughput_bps);
    CHECK(cmp.a.aggregate.gini_short == cmp.b.aggregate.gini_short);
    CHECK(cmp.ratios.ratio1 == 1.0);
    CHECK(cmp.ratios.ratio2 == 1.0);

    const auto mixed =
        run_comparison(c, SchedulerKind::kWnopf, SchedulerKind::kPfNoma);
    CHECK(mixed.channels_paired);
    CHECK(std::isfinite(mixed.ratios.ratio1));
    CHECK(mixed.ratios.ratio2 > 0.0);
  }

  TEST_CASE("premium services produce group reports") {
    auto c = small_config();
    c.services = {{"basic", 1e6, {0, 1, 2}}, {"gold", 2e6, {3, 4, 5}}};
    const auto r = run_experiment(c, SchedulerKind::kWnopf);
    REQUIRE(r.aggregate.groups.size() == 2);
    CHECK(r.aggregate.groups[1].name == "gold");
    CHECK(r.aggregate.groups[0].success_fraction >= 0.0);
    CHECK(r.aggregate.groups[0].success_fraction <= 1.0);
    for (const auto& d : r.drops) CHECK(d.report.groups.size() == 2);
  }

  TEST_CASE("reports satisfy basic invariants") {
    const auto c = small_config();
    for (auto kind : kAllSchedulerKinds) {
      const auto r = run_experiment(c, kind);
      CHECK(r.aggregate.gini_long >= 0.0);
      CHECK(r.aggregate.gini_long <= 1.0);
      CHECK(r.aggregate.system_throughput_bps > 0.0);
      CHECK(r.aggregate.gini_short.size() == 30);
      for (const auto& d : r.drops) {
        for (const auto& lat : d.report.rate_latency) {
          if (lat) CHECK(*lat >= 1);
        }
      }
    }
  }
}
