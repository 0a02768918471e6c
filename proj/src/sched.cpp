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

#include "nomasched/sched.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nomasched/rate.hpp"

namespace nomasched {

namespace {

struct KindName {
  SchedulerKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 6> kKindNames = {{
    {SchedulerKind::kPfNoma, "PF_NOMA"},
    {SchedulerKind::kWnopf, "WNOPF"},
    {SchedulerKind::kJointWnopf, "J_WNOPF"},
    {SchedulerKind::kPfModified, "PF_MODIFIED"},
    {SchedulerKind::kPfOma, "PF_OMA"},
    {SchedulerKind::kWopf, "WOPF"},
}};

void check_aligned(const CandidateSet& set, std::span<const double> rates) {
  if (static_cast<int>(rates.size()) != set.size()) {
    throw InvalidArgument("metric: rates not aligned with candidate set");
  }
}

bool first_slot_active(const SchedulerState& state,
                       const SchedulerParams& params) {
  return state.slot == 1 && params.uses_first_slot_rule();
}

double score(const CandidateSet& set, std::span<const double> rates,
             const SchedulerState& state, const SchedulerParams& params,
             std::span<const double> weights) {
  if (first_slot_active(state, params)) {
    return first_slot_metric(set, rates, state, params);
  }
  switch (params.kind) {
    case SchedulerKind::kPfNoma:
    case SchedulerKind::kPfOma:
      return pf_metric(set, rates, state, params);
    case SchedulerKind::kWnopf:
      return wnopf_metric(set, rates, state, params, weights);
    case SchedulerKind::kJointWnopf:
    case SchedulerKind::kWopf:
      return jwnopf_metric(set, rates, state, params, weights);
    case SchedulerKind::kPfModified:
      return pf_modified_metric(set, rates, state, params);
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(SchedulerKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "UNKNOWN";
}

std::optional<SchedulerKind> parse_scheduler_kind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  return std::nullopt;
}

bool is_oma(SchedulerKind kind) {
  return kind == SchedulerKind::kPfOma || kind == SchedulerKind::kWopf;
}

bool is_weighted(SchedulerKind kind) {
  return kind == SchedulerKind::kWnopf || kind == SchedulerKind::kJointWnopf ||
         kind == SchedulerKind::kWopf;
}

CandidateSet::CandidateSet(std::initializer_list<UserId> users)
    : CandidateSet(std::span<const UserId>(users.begin(), users.size())) {}

CandidateSet::CandidateSet(std::span<const UserId> users) {
  if (users.empty() || users.size() > kMaxUsersPerSubband) {
    throw InvalidArgument("CandidateSet: size must be in [1, 3]");
  }
  std::copy(users.begin(), users.end(), users_.begin());
  size_ = static_cast<std::uint8_t>(users.size());
  std::sort(users_.begin(), users_.begin() + size_);
  if (std::adjacent_find(users_.begin(), users_.begin() + size_) !=
      users_.begin() + size_) {
    throw InvalidArgument("CandidateSet: users must be distinct");
  }
}

bool CandidateSet::contains(UserId k) const {
  const auto u = users();
  return std::find(u.begin(), u.end(), k) != u.end();
}

std::strong_ordering operator<=>(const CandidateSet& a, const CandidateSet& b) {
  const auto ua = a.users();
  const auto ub = b.users();
  return std::lexicographical_compare_three_way(ua.begin(), ua.end(),
                                                ub.begin(), ub.end());
}

std::string to_string(const CandidateSet& set) {
  std::string out = "{";
  for (int i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(set[i]);
  }
  return out + "}";
}

std::vector<CandidateSet> enumerate_candidates(int num_users, int max_size,
                                               int min_size) {
  if (num_users < 1) throw InvalidArgument("enumerate_candidates: K < 1");
  if (max_size < 1 || max_size > kMaxUsersPerSubband) {
    throw InvalidArgument("enumerate_candidates: n_s must be in [1, 3]");
  }
  if (max_size > num_users) {
    throw InvalidArgument("enumerate_candidates: n_s exceeds K");
  }
  if (min_size < 1 || min_size > max_size) {
    throw InvalidArgument("enumerate_candidates: bad minimum set size");
  }
  std::vector<CandidateSet> out;
  out.reserve(candidate_count(num_users, max_size, min_size));
  std::array<UserId, kMaxUsersPerSubband> idx{};
  for (int m = min_size; m <= max_size; ++m) {
    // Lexicographic m-combinations of {0..K-1}.
    for (int i = 0; i < m; ++i) idx[i] = static_cast<UserId>(i);
    while (true) {
      out.emplace_back(std::span<const UserId>(idx.data(), m));
      int i = m - 1;
      while (i >= 0 && idx[i] == static_cast<UserId>(num_users - m + i)) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

std::uint64_t candidate_count(int num_users, int max_size, int min_size) {
  std::uint64_t total = 0;
  for (int m = min_size; m <= max_size; ++m) {
    std::uint64_t c = 1;
    for (int i = 0; i < m; ++i) {
      c = c * static_cast<std::uint64_t>(num_users - i) / (i + 1);
    }
    total += c;
  }
  return total;
}

bool SchedulerParams::uses_first_slot_rule() const {
  switch (first_slot_rule) {
    case FirstSlotRule::kWeightedKinds:
      return is_weighted(kind);
    case FirstSlotRule::kAllKinds:
      return true;
    case FirstSlotRule::kNone:
      return false;
  }
  return false;
}

void SchedulerParams::validate(int num_users) const {
  if (num_users < 1) throw InvalidArgument("num_users must be >= 1");
  if (max_users_per_subband < 1 ||
      max_users_per_subband > kMaxUsersPerSubband) {
    throw InvalidArgument("max_users_per_subband must be in [1, 3]");
  }
  if (effective_max_users() > num_users) {
    throw InvalidArgument("max_users_per_subband exceeds num_users");
  }
  if (min_users_per_subband < 1 ||
      min_users_per_subband > max_users_per_subband) {
    throw InvalidArgument(
        "min_users_per_subband must be in [1, max_users_per_subband]");
  }
  if (!(t_c >= 1.0)) throw InvalidArgument("t_c must be >= 1");
  if (!(b > 0.0)) throw InvalidArgument("b must be > 0");
  if (!(epsilon_rate > 0.0)) throw InvalidArgument("epsilon_rate must be > 0");
  if (premium()) {
    if (static_cast<int>(service_target_bps.size()) != num_users) {
      throw InvalidArgument("service targets must cover every user");
    }
    for (double r : service_target_bps) {
      if (!(r > 0.0)) throw InvalidArgument("service target must be > 0");
    }
  }
}

SchedulerState::SchedulerState(int num_users)
    : historical_rate(num_users, 0.0),
      current_rate(num_users, 0.0),
      allocated_subbands(num_users) {}

void evaluate_candidates(const ChannelRealization& channel, int s,
                         std::span<const CandidateSet> candidates,
                         const LinkParams& link, std::span<LinkBudget> out) {
  if (out.size() != candidates.size()) {
    throw InvalidArgument("evaluate_candidates: output size mismatch");
  }
  const int K = channel.num_users;
  std::vector<double> ftpa_factor(K);
  for (int k = 0; k < K; ++k) {
    ftpa_factor[k] = std::pow(channel.normalized_gain(s, k), -link.ftpa_alpha);
  }
  std::array<double, kMaxUsersPerSubband> g2{}, nz{};
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto users = candidates[c].users();
    const std::size_t n = users.size();
    LinkBudget& b = out[c];
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += ftpa_factor[users[i]];
    for (std::size_t i = 0; i < n; ++i) {
      g2[i] = channel.gain(s, static_cast<int>(users[i]));
      nz[i] = channel.noise(s, static_cast<int>(users[i]));
      b.power[i] = n == 1
                       ? link.subband_power_mw
                       : link.subband_power_mw * ftpa_factor[users[i]] / total;
    }
    user_rates(users, {g2.data(), n}, {nz.data(), n}, {b.power.data(), n},
               link.subband_bandwidth_hz, {b.rate.data(), n});
  }
}

double weight_user(UserId k, const SchedulerState& state,
                   const SchedulerParams& params) {
  if (params.constant_weight) return *params.constant_weight;
  double raw;
  if (params.premium()) {
    if (k >= params.service_target_bps.size()) {
      throw InvalidArgument("weight_user: user has no service class");
    }
    raw = params.service_target_bps[k] - state.current_rate[k];
  } else {
    raw = params.b * state.prev_average_rate - state.current_rate[k];
  }
  return params.clamp_weights ? std::max(raw, params.weight_floor) : raw;
}

std::vector<double> user_weights(const SchedulerState& state,
                                 const SchedulerParams& params) {
  std::vector<double> w(state.num_users());
  for (int k = 0; k < state.num_users(); ++k) {
    w[k] = weight_user(static_cast<UserId>(k), state, params);
  }
  return w;
}

double pf_metric(const CandidateSet& set, std::span<const double> rates,
                 const SchedulerState& state, const SchedulerParams& params) {
  check_aligned(set, rates);
  double sum = 0.0;
  for (int i = 0; i < set.size(); ++i) {
    sum +=
        rates[i] / std::max(state.historical_rate[set[i]], params.epsilon_rate);
  }
  return sum;
}

double set_weight(const CandidateSet& set, std::span<const double> weights) {
  double w = 0.0;
  for (UserId k : set.users()) w += weights[k];
  return w;
}

double wnopf_metric(const CandidateSet& set, std::span<const double> rates,
                    const SchedulerState& state, const SchedulerParams& params,
                    std::span<const double> weights) {
  return pf_metric(set, rates, state, params) * set_weight(set, weights);
}

double jwnopf_metric(const CandidateSet& set, std::span<const double> rates,
                     const SchedulerState& state, const SchedulerParams& params,
                     std::span<const double> weights) {
  check_aligned(set, rates);
  double sum = 0.0;
  for (int i = 0; i < set.size(); ++i) {
    sum += rates[i] /
           std::max(state.historical_rate[set[i]], params.epsilon_rate) *
           weights[set[i]];
  }
  return sum;
}

double pf_modified_metric(const CandidateSet& set,
                          std::span<const double> rates,
                          const SchedulerState& state,
                          const SchedulerParams& params) {
  check_aligned(set, rates);
  double sum = 0.0;
  for (int i = 0; i < set.size(); ++i) {
    const UserId k = set[i];
    sum += rates[i] / std::max(state.historical_rate[k] + state.current_rate[k],
                               params.epsilon_rate);
  }
  return sum;
}

double first_slot_metric(const CandidateSet& set, std::span<const double> rates,
                         const SchedulerState& state,
                         const SchedulerParams& params) {
  if (state.slot != 1) {
    throw InvalidArgument("first_slot_metric: only defined for slot 1");
  }
  check_aligned(set, rates);
  double sum = 0.0;
  for (int i = 0; i < set.size(); ++i) {
    sum += rates[i] / std::max(state.current_rate[set[i]], params.epsilon_rate);
  }
  return sum;
}

std::size_t select_candidate(std::span<const CandidateSet> candidates,
                             std::span<const LinkBudget> budgets,
                             const SchedulerState& state,
                             const SchedulerParams& params,
                             std::span<const double> weights) {
  if (candidates.empty() || budgets.size() != candidates.size()) {
    throw InvalidArgument("select_candidate: empty or misaligned input");
  }
  const bool secondary =
      is_weighted(params.kind) && !first_slot_active(state, params);
  std::size_t best = 0;
  double best_score = 0.0;
  double best_pf = 0.0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const CandidateSet& set = candidates[c];
    const auto rates = budgets[c].rates(set.size());
    const double sc = score(set, rates, state, params, weights);
    const double pf = secondary ? pf_metric(set, rates, state, params) : 0.0;
    if (c == 0) {
      best_score = sc;
      best_pf = pf;
      continue;
    }
    bool better = sc > best_score;
    if (sc == best_score) {
      better = pf > best_pf || (pf == best_pf && set < candidates[best]);
    }
    if (better) {
      best = c;
      best_score = sc;
      best_pf = pf;
    }
  }
  return best;
}

AllocationResult allocate_slot(const ChannelRealization& channel,
                               SchedulerState& state,
                               const SchedulerParams& params,
                               const LinkParams& link,
                               std::span<const CandidateSet> candidates,
                               std::mt19937_64* order_rng) {
  const int K = state.num_users();
  if (channel.num_users != K) {
    throw InvalidArgument("allocate_slot: channel/user count mismatch");
  }
  const int max_size = params.effective_max_users();
  const int min_size = params.effective_min_users();
  std::vector<CandidateSet> eligible;
  eligible.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.size() >= min_size && c.size() <= max_size) eligible.push_back(c);
  }
  if (eligible.empty()) {
    throw InvalidArgument("allocate_slot: no eligible candidate sets");
  }

  std::vector<int> order(channel.num_subbands);
  std::iota(order.begin(), order.end(), 0);
  if (params.subband_order == SubbandOrder::kRandom) {
    if (order_rng == nullptr) {
      throw InvalidArgument("allocate_slot: random order needs an rng");
    }
    std::shuffle(order.begin(), order.end(), *order_rng);
  }

  AllocationResult result;
  result.slot = state.slot;
  result.subbands.reserve(order.size());
  std::vector<LinkBudget> budgets(eligible.size());
  std::vector<double> weights(K, 0.0);
  const bool weighted = is_weighted(params.kind);

  for (int s : order) {
    evaluate_candidates(channel, s, eligible, link, budgets);
    double weight_sum = 0.0;
    if (weighted) {
      for (int k = 0; k < K; ++k) {
        weights[k] = weight_user(static_cast<UserId>(k), state, params);
      }
      for (const auto& c : eligible) weight_sum += set_weight(c, weights);
    }
    const std::size_t pick =
        select_candidate(eligible, budgets, state, params, weights);

    SubbandAssignment a;
    a.subband = s;
    a.users = eligible[pick];
    a.link = budgets[pick];
    a.score =
        score(a.users, a.link.rates(a.users.size()), state, params, weights);
    if (weighted) {
      a.set_weight = set_weight(a.users, weights);
      a.candidate_weight_sum = weight_sum;
    }
    for (int i = 0; i < a.users.size(); ++i) {
      const UserId k = a.users[i];
      state.current_rate[k] += a.link.rate[i];
      state.allocated_subbands[k].push_back(s);
    }
    result.subbands.push_back(a);
  }
  result.user_rate = state.current_rate;
  return result;
}

void end_slot_update(SchedulerState& state, const AllocationResult& result,
                     const SchedulerParams& params) {
  const int K = state.num_users();
  if (static_cast<int>(result.user_rate.size()) != K) {
    throw InvalidArgument("end_slot_update: result/user count mismatch");
  }
  const double a = 1.0 / params.t_c;
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    state.historical_rate[k] =
        (1.0 - a) * state.historical_rate[k] + a * result.user_rate[k];
    total += result.user_rate[k];
  }
  state.prev_average_rate = total / K;
  std::fill(state.current_rate.begin(), state.current_rate.end(), 0.0);
  for (auto& s : state.allocated_subbands) s.clear();
  ++state.slot;
}

Scheduler::Scheduler(int num_users, SchedulerParams params, LinkParams link,
                     std::uint64_t order_seed)
    : params_(std::move(params)),
      link_(link),
      state_(num_users),
      order_rng_(order_seed) {
  params_.validate(num_users);
  candidates_ = enumerate_candidates(num_users, params_.effective_max_users(),
                                     params_.effective_min_users());
}

AllocationResult Scheduler::allocate_slot(const ChannelRealization& channel) {
  return nomasched::allocate_slot(channel, state_, params_, link_, candidates_,
                                  &order_rng_);
}

void Scheduler::end_slot_update(const AllocationResult& result) {
  nomasched::end_slot_update(state_, result, params_);
}

}  // namespace nomasched
