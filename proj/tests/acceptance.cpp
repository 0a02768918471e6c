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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nomasched/engine.hpp"
#include "nomasched/io.hpp"
#include "nomasched/metrics.hpp"
#include "nomasched/rate.hpp"
#include "nomasched/sched.hpp"

using namespace nomasched;

namespace {

// Pinned tolerances and thresholds.
constexpr double kGiniExactTol = 0.0;
constexpr double kGiniInvarianceTol = 1e-12;
constexpr int kGiniRandomVectors = 1000;
constexpr double kRateRelTol = 1e-12;
constexpr int kRateInstances = 100;
constexpr int kMaxEnumUsers = 20;
constexpr int kMaxEnumSize = 3;
constexpr double kShortGiniBySlot5 = 0.05;
constexpr int kShortGiniSlot = 5;
constexpr double kFinalLongGini = 0.01;
constexpr double kRatio1Lo = 0.9;
constexpr double kRatio1Hi = 1.1;
constexpr double kRatio2Min = 1.0;
constexpr double kGroupGiniMax = 0.1;
constexpr int kGroupGiniDrops = 18;
constexpr int kUtilityDrops = 16;
constexpr int kBaseUsers = 15;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Paired {
  double mean = 0.0;
  double se = 0.0;
};

// Mean and standard error of per-drop differences a - b.
Paired paired(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double m = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : d) ss += (v - m) * (v - m);
  return {m, n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0};
}

ExperimentConfig base_config(int K = kBaseUsers) {
  ExperimentConfig c;
  c.num_users = K;
  c.seed = kSeed;
  return c;
}

class Cache {
 public:
  const ExperimentResult& get(SchedulerKind kind, int K) {
    const auto key = std::make_pair(static_cast<int>(kind), K);
    auto it = runs_.find(key);
    if (it == runs_.end()) {
      it = runs_.emplace(key, run_experiment(base_config(K), kind)).first;
    }
    return it->second;
  }

 private:
  std::map<std::pair<int, int>, ExperimentResult> runs_;
};

std::vector<double> per_drop(const ExperimentResult& r,
                             double MetricsReport::* field) {
  std::vector<double> v;
  for (const auto& d : r.drops) v.push_back(d.report.*field);
  return v;
}

double gini_double_sum(const std::vector<double>& r) {
  const double K = static_cast<double>(r.size());
  double mean = 0.0, sum = 0.0;
  for (double v : r) mean += v;
  mean /= K;
  for (double x : r) {
    for (double y : r) sum += std::abs(x - y);
  }
  return sum / (2.0 * K * K * mean);
}

Outcome c01_gini() {
  bool ok = true;
  std::string detail;
  const double g10 = gini(std::vector<double>{1, 0});
  const double g1110 = gini(std::vector<double>{1, 1, 1, 0});
  const double geq = gini(std::vector<double>{3, 3, 3, 3, 3});
  ok &= std::abs(g10 - 0.5) <= kGiniExactTol;
  ok &= std::abs(g1110 - 0.25) <= kGiniExactTol;
  ok &= geq == 0.0;
  ok &= std::abs(gini_double_sum({1, 0}) - 0.5) <= kGiniExactTol;
  ok &= std::abs(gini_double_sum({1, 1, 1, 0}) - 0.25) <= kGiniExactTol;

  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1e8);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  double worst = 0.0;
  for (int i = 0; i < kGiniRandomVectors; ++i) {
    std::vector<double> r(2 + i % 40);
    for (double& v : r) v = u(rng);
    const double g = gini(r);
    std::vector<double> scaled(r);
    const double c = scale(rng);
    for (double& v : scaled) v *= c;
    std::vector<double> perm(r);
    std::shuffle(perm.begin(), perm.end(), rng);
    worst =
        std::max({worst, std::abs(gini(scaled) - g), std::abs(gini(perm) - g),
                  std::abs(gini_double_sum(r) - g)});
  }
  ok &= worst <= kGiniInvarianceTol;
  detail = "G(1,0)=" + fmt("%.17g", g10) +
           " G(1,1,1,0)=" + fmt("%.17g", g1110) +
           " max invariance dev=" + fmt("%.3g", worst);
  return {ok, detail};
}

Outcome c02_rate() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> lg(-14.0, -7.0);
  std::uniform_real_distribution<double> pw(0.01, 311.0);
  const double bw = 78125.0, n0 = 3.125e-13;
  double worst = 0.0;
  bool strong_clean = true;
  for (int i = 0; i < kRateInstances; ++i) {
    const double g0 = std::pow(10.0, lg(rng)), g1 = std::pow(10.0, lg(rng));
    const double p0 = pw(rng), p1 = pw(rng);
    const std::vector<UserId> users = {0, 1};
    const std::vector<double> g = {g0, g1}, n = {n0, n0}, p = {p0, p1};
    const auto r = user_rates(users, g, n, p, bw);

    const bool zero_weaker = g0 / n0 < g1 / n0;
    double o0, o1;
    if (zero_weaker) {
      o0 = bw * std::log2(1.0 + g0 * p0 / (g0 * p1 + n0));
      o1 = bw * std::log2(1.0 + g1 * p1 / n0);
    } else {
      o0 = bw * std::log2(1.0 + g0 * p0 / n0);
      o1 = bw * std::log2(1.0 + g1 * p1 / (g1 * p0 + n0));
    }
    worst =
        std::max({worst, std::abs(r[0] - o0) / o0, std::abs(r[1] - o1) / o1});

    // The stronger user's rate is unaffected by the weaker user's power.
    const int strong = zero_weaker ? 1 : 0;
    std::vector<double> p_alt(p);
    p_alt[1 - strong] *= 1e6;
    const auto r_alt = user_rates(users, g, n, p_alt, bw);
    strong_clean &= r_alt[strong] == r[strong];
  }
  return {worst <= kRateRelTol && strong_clean,
          "max rel dev=" + fmt("%.3g", worst) +
              (strong_clean ? " stronger-user interference exactly 0"
                            : " stronger user sees interference")};
}

Outcome c03_candidates() {
  bool ok = enumerate_candidates(15, 2).size() == 120;
  int checked = 0;
  for (int K = 1; K <= kMaxEnumUsers; ++K) {
    for (int ns = 1; ns <= std::min(kMaxEnumSize, K); ++ns) {
      std::uint64_t closed = 0;
      for (int m = 1; m <= ns; ++m) {
        std::uint64_t c = 1;
        for (int i = 1; i <= m; ++i) c = c * (K - m + i) / i;
        closed += c;
      }
      const auto sets = enumerate_candidates(K, ns);
      std::set<std::vector<UserId>> uniq;
      for (const auto& s : sets) {
        uniq.emplace(s.users().begin(), s.users().end());
      }
      ok &= sets.size() == closed && uniq.size() == closed;
      ++checked;
    }
  }
  return {ok, "N(15,2)=" + std::to_string(enumerate_candidates(15, 2).size()) +
                  ", " + std::to_string(checked) + " (K, n_s) pairs checked"};
}

Outcome c04_throughput(Cache& cache) {
  auto tp = [&](SchedulerKind k) {
    return per_drop(cache.get(k, kBaseUsers),
                    &MetricsReport::system_throughput_bps);
  };
  struct Cmp {
    SchedulerKind a, b;
  };
  const Cmp cmps[] = {{SchedulerKind::kWnopf, SchedulerKind::kPfNoma},
                      {SchedulerKind::kWopf, SchedulerKind::kPfOma},
                      {SchedulerKind::kWnopf, SchedulerKind::kWopf},
                      {SchedulerKind::kJointWnopf, SchedulerKind::kWopf}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cmps) {
    const auto d = paired(tp(c.a), tp(c.b));
    const bool pass = d.mean > d.se;
    ok &= pass;
    detail += std::string(to_string(c.a)) + "-" + std::string(to_string(c.b)) +
              "=" + fmt("%+.3f", d.mean / 1e6) + "+/-" +
              fmt("%.3f", d.se / 1e6) + "Mbps" + (pass ? "" : "(x)") + " ";
  }
  return {ok, detail};
}

Outcome c05_diversity(Cache& cache) {
  const int Ks[] = {5, 10, 15, 20};
  bool ok = true;
  std::string detail;
  for (auto kind : kAllSchedulerKinds) {
    std::string row = std::string(to_string(kind)) + ":";
    bool kind_ok = true;
    for (int i = 0; i + 1 < 4; ++i) {
      const auto lo = per_drop(cache.get(kind, Ks[i]),
                               &MetricsReport::system_throughput_bps);
      const auto hi = per_drop(cache.get(kind, Ks[i + 1]),
                               &MetricsReport::system_throughput_bps);
      const auto d = paired(hi, lo);
      kind_ok &= d.mean >= -d.se;
      row += fmt("%+.2f", d.mean / 1e6);
    }
    ok &= kind_ok;
    detail += row + (kind_ok ? " " : "(x) ");
  }
  return {ok, detail + "Mbps per K step"};
}

Outcome c06_long_fairness(Cache& cache) {
  auto g = [&](SchedulerKind k) {
    return per_drop(cache.get(k, kBaseUsers), &MetricsReport::gini_long);
  };
  const auto noma = paired(g(SchedulerKind::kPfNoma), g(SchedulerKind::kWnopf));
  const auto oma = paired(g(SchedulerKind::kPfOma), g(SchedulerKind::kWopf));
  const bool ok = noma.mean > noma.se && oma.mean > oma.se;
  return {ok, "G(PF_NOMA)-G(WNOPF)=" + fmt("%.4f", noma.mean) + "+/-" +
                  fmt("%.4f", noma.se) + " G(PF_OMA)-G(WOPF)=" +
                  fmt("%.4f", oma.mean) + "+/-" + fmt("%.4f", oma.se)};
}

Outcome c07_short_fairness(Cache& cache) {
  const auto& w = cache.get(SchedulerKind::kWnopf, kBaseUsers).aggregate;
  const auto& pf = cache.get(SchedulerKind::kPfNoma, kBaseUsers).aggregate;
  const double at5 = w.gini_short[kShortGiniSlot - 1];
  const bool a = at5 <= kShortGiniBySlot5;
  const bool b = w.gini_long <= kFinalLongGini;
  const bool c = pf.gini_short[0] > w.gini_short[0];
  return {a && b && c,
          "WNOPF G(slot5)=" + fmt("%.4f", at5) + (a ? "" : "(x)") +
              " final G=" + fmt("%.4f", w.gini_long) + (b ? "" : "(x)") +
              " slot1 G PF_NOMA=" + fmt("%.4f", pf.gini_short[0]) +
              " WNOPF=" + fmt("%.4f", w.gini_short[0]) + (c ? "" : "(x)")};
}

Outcome c08_zero_rate(Cache& cache) {
  bool all_served = true;
  int checked = 0;
  for (int K : {5, 10, 15, 20}) {
    for (const auto& d : cache.get(SchedulerKind::kWnopf, K).drops) {
      for (double r : d.user_rate.front()) all_served &= r > 0.0;
      ++checked;
    }
  }
  int late_drops = 0, worst = 1;
  for (const auto& d : cache.get(SchedulerKind::kPfNoma, kBaseUsers).drops) {
    bool late = false;
    for (const auto& lat : d.report.rate_latency) {
      const int v = lat ? *lat : 1 << 20;
      late |= v > 1;
      worst = std::max(worst, v);
    }
    late_drops += late;
  }
  return {all_served && late_drops > 0,
          std::string("WNOPF R_k(1)>0 in all ") + std::to_string(checked) +
              " drops: " + (all_served ? "yes" : "no") +
              "; PF_NOMA drops with latency>1: " + std::to_string(late_drops) +
              " (max latency " + std::to_string(worst) + ")"};
}

Outcome c09_proposition() {
  bool ok = true;
  std::string detail;
  for (int K : {6, 10, 14}) {
    const auto cfg = base_config(K);
    for (auto [a, b] :
         {std::pair{SchedulerKind::kWnopf, SchedulerKind::kPfNoma},
          std::pair{SchedulerKind::kWopf, SchedulerKind::kPfOma}}) {
      const auto cmp = run_comparison(cfg, a, b);
      const bool r1 =
          cmp.ratios.ratio1 >= kRatio1Lo && cmp.ratios.ratio1 <= kRatio1Hi;
      const bool r2 = cmp.ratios.ratio2 >= kRatio2Min;
      ok &= r1 && r2 && cmp.channels_paired;
      detail += "K=" + std::to_string(K) + " " + std::string(to_string(a)) +
                ":r1=" + fmt("%.3f", cmp.ratios.ratio1) + (r1 ? "" : "(x)") +
                ",r2=" + fmt("%.3f", cmp.ratios.ratio2) + (r2 ? "" : "(x)") +
                " ";
    }
  }
  return {ok, detail};
}

struct PremiumStats {
  int success_drops = 0;
  int gini_drops = 0;
  std::vector<double> mean_group_gini;
};

PremiumStats premium_run(double basic, double silver, double gold) {
  auto cfg = base_config(15);
  cfg.services = {{"basic", basic, {0, 1, 2, 3, 4}},
                  {"silver", silver, {5, 6, 7, 8, 9}},
                  {"gold", gold, {10, 11, 12, 13, 14}}};
  const auto r = run_experiment(cfg, SchedulerKind::kWnopf);
  PremiumStats s;
  s.mean_group_gini.assign(3, 0.0);
  for (const auto& d : r.drops) {
    bool all_ok = true, gini_ok = true;
    for (std::size_t g = 0; g < d.report.groups.size(); ++g) {
      all_ok &= d.report.groups[g].success;
      gini_ok &= d.report.groups[g].gini <= kGroupGiniMax;
      s.mean_group_gini[g] += d.report.groups[g].gini / r.drops.size();
    }
    s.success_drops += all_ok;
    s.gini_drops += gini_ok;
  }
  return s;
}

Outcome c10_premium() {
  const auto s1 = premium_run(5e6, 10e6, 15e6);
  const auto s2 = premium_run(10e6, 20e6, 30e6);
  const int drops = base_config().num_drops;
  const bool a = s1.success_drops == drops;
  const bool b = s1.gini_drops >= kGroupGiniDrops;
  const bool c = s2.gini_drops >= kGroupGiniDrops;
  auto ginis = [](const PremiumStats& s) {
    return fmt("%.4f", s.mean_group_gini[0]) + "/" +
           fmt("%.4f", s.mean_group_gini[1]) + "/" +
           fmt("%.4f", s.mean_group_gini[2]);
  };
  return {a && b && c,
          "S1 success " + std::to_string(s1.success_drops) + "/" +
              std::to_string(drops) + (a ? "" : "(x)") + ", gini<=0.1 " +
              std::to_string(s1.gini_drops) + "/" + std::to_string(drops) +
              (b ? "" : "(x)") + " mean G " + ginis(s1) +
              " (reference 0.0491/0.0724/0.0042); S2 gini<=0.1 " +
              std::to_string(s2.gini_drops) + "/" + std::to_string(drops) +
              (c ? "" : "(x)") + " mean G " + ginis(s2)};
}

Outcome c11_utility(Cache& cache) {
  const auto w = per_drop(cache.get(SchedulerKind::kWnopf, kBaseUsers),
                          &MetricsReport::service_utility);
  const auto pf = per_drop(cache.get(SchedulerKind::kPfNoma, kBaseUsers),
                           &MetricsReport::service_utility);
  int wins = 0;
  for (std::size_t i = 0; i < w.size(); ++i) wins += w[i] > pf[i];
  const auto d = paired(w, pf);
  return {wins >= kUtilityDrops,
          "WNOPF wins " + std::to_string(wins) + "/" +
              std::to_string(w.size()) + " drops, mean diff " +
              fmt("%+.3f", d.mean) + "+/-" + fmt("%.3f", d.se)};
}

std::string serialize(const ExperimentConfig& cfg, const ExperimentResult& r) {
  return rows_to_csv(metric_rows("det", cfg, r)) + "\n" +
         experiment_to_json(r).dump(2) + "\n" + user_series_csv(r) + "\n" +
         gini_short_csv({r});
}

Outcome c12_determinism() {
  auto cfg = base_config(10);
  cfg.num_drops = 6;
  cfg.services = {{"all", 2e6, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}};
  bool ok = true;
  std::size_t bytes = 0;
  for (auto kind : kAllSchedulerKinds) {
    cfg.threads = 0;
    const auto a = serialize(cfg, run_experiment(cfg, kind));
    cfg.threads = 1;
    const auto b = serialize(cfg, run_experiment(cfg, kind));
    ok &= a == b;
    bytes += a.size();
  }
  return {ok, std::to_string(bytes) + " bytes compared across 6 kinds"};
}

}  // namespace

int main() {
  Cache cache;
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"gini oracle", c01_gini},
      {"SIC rate oracle", c02_rate},
      {"candidate count", c03_candidates},
      {"throughput ordering", [&] { return c04_throughput(cache); }},
      {"multi-user diversity", [&] { return c05_diversity(cache); }},
      {"long-term fairness", [&] { return c06_long_fairness(cache); }},
      {"short-term convergence", [&] { return c07_short_fairness(cache); }},
      {"zero-rate elimination", [&] { return c08_zero_rate(cache); }},
      {"rate-distance ratios", c09_proposition},
      {"premium services", c10_premium},
      {"service utility", [&] { return c11_utility(cache); }},
      {"determinism", c12_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    failed += !o.pass;
    std::printf("%s %2zu %-24s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
