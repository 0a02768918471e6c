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

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nomasched/channel.hpp"
#include "nomasched/common.hpp"

namespace nomasched {

inline constexpr int kMaxUsersPerSubband = 3;

enum class SchedulerKind {
  kPfNoma,      // conventional PF over NOMA candidate sets
  kWnopf,       // PF(U) * W(U)
  kJointWnopf,  // sum_k PF_k * W_k
  kPfModified,  // PF with the current slot's assignment added to history
  kPfOma,       // conventional PF, one user per subband
  kWopf,        // weighted PF, one user per subband
};

inline constexpr std::array<SchedulerKind, 6> kAllSchedulerKinds = {
    SchedulerKind::kPfNoma,     SchedulerKind::kWnopf,
    SchedulerKind::kJointWnopf, SchedulerKind::kPfModified,
    SchedulerKind::kPfOma,      SchedulerKind::kWopf};

std::string_view to_string(SchedulerKind kind);
/// Accepts the canonical names PF_NOMA, WNOPF, J_WNOPF, PF_MODIFIED, PF_OMA
/// and WOPF.
std::optional<SchedulerKind> parse_scheduler_kind(std::string_view name);

bool is_oma(SchedulerKind kind);
bool is_weighted(SchedulerKind kind);

/// Distinct users proposed for one subband, kept in ascending id order.
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::initializer_list<UserId> users);
  explicit CandidateSet(std::span<const UserId> users);

  std::span<const UserId> users() const { return {users_.data(), size_}; }
  int size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool contains(UserId k) const;
  UserId operator[](int i) const { return users_[i]; }

  friend bool operator==(const CandidateSet& a, const CandidateSet& b) {
    return a.size_ == b.size_ && a.users_ == b.users_;
  }
  /// Lexicographic order on the id sequence: {0} < {0,1} < {1}.
  friend std::strong_ordering operator<=>(const CandidateSet& a,
                                          const CandidateSet& b);

 private:
  std::array<UserId, kMaxUsersPerSubband> users_{};
  std::uint8_t size_ = 0;
};

std::string to_string(const CandidateSet& set);

/// Every user subset with size in [min_size, max_size], ordered by size and
/// then lexicographically.
std::vector<CandidateSet> enumerate_candidates(int num_users, int max_size,
                                               int min_size = 1);

/// sum_{m=min_size}^{max_size} C(K, m).
std::uint64_t candidate_count(int num_users, int max_size, int min_size = 1);

struct ServiceClass {
  std::string name;
  double target_rate_bps = 0.0;
  std::vector<UserId> users;

  friend bool operator==(const ServiceClass&, const ServiceClass&) = default;
};

enum class FirstSlotRule {
  kWeightedKinds,  // slot 1 uses the served-rate metric for weighted kinds
  kAllKinds,
  kNone,
};

enum class SubbandOrder { kAscending, kRandom };

struct SchedulerParams {
  SchedulerKind kind = SchedulerKind::kWnopf;
  int max_users_per_subband = 2;
  // Restricts candidates to a single size class when equal to the maximum.
  int min_users_per_subband = 1;
  double t_c = 100.0;
  // Expected-rate factor: each user targets b * R_avg(t-1).
  double b = 1.5;
  // Denominator floor for T_k and R_k(t), in bps.
  double epsilon_rate = 1e-3;
  double weight_floor = 0.0;
  bool clamp_weights = true;
  FirstSlotRule first_slot_rule = FirstSlotRule::kWeightedKinds;
  SubbandOrder subband_order = SubbandOrder::kAscending;
  // Replaces every per-user weight by this constant when set.
  std::optional<double> constant_weight;
  // Per-user requested rate; non-empty switches weights to premium mode.
  std::vector<double> service_target_bps;

  int effective_max_users() const {
    return is_oma(kind) ? 1 : max_users_per_subband;
  }
  int effective_min_users() const {
    return is_oma(kind) ? 1 : min_users_per_subband;
  }
  bool premium() const { return !service_target_bps.empty(); }
  bool uses_first_slot_rule() const;
  void validate(int num_users) const;
};

/// Mutable per-drop scheduler bookkeeping.
struct SchedulerState {
  explicit SchedulerState(int num_users);

  int num_users() const { return static_cast<int>(historical_rate.size()); }

  std::vector<double> historical_rate;               // T_k
  std::vector<double> current_rate;                  // R_k(t), running
  std::vector<std::vector<int>> allocated_subbands;  // S_k
  double prev_average_rate = 0.0;                    // R_avg(t-1)
  int slot = 1;
};

/// Power split and SIC rates of one candidate set on one subband, aligned
/// with the set's user order.
struct LinkBudget {
  std::array<double, kMaxUsersPerSubband> power{};
  std::array<double, kMaxUsersPerSubband> rate{};

  std::span<const double> rates(int n) const {
    return {rate.data(), static_cast<std::size_t>(n)};
  }
};

struct LinkParams {
  double subband_power_mw = 0.0;
  double ftpa_alpha = 0.4;
  double subband_bandwidth_hz = 0.0;
};

/// Computes FTPA powers and SIC rates for every candidate on subband `s`.
void evaluate_candidates(const ChannelRealization& channel, int s,
                         std::span<const CandidateSet> candidates,
                         const LinkParams& link, std::span<LinkBudget> out);

/// Rate-distance weight of user k: max(b R_avg(t-1) - R_k(t), floor), or
/// max(R_service(k) - R_k(t), floor) in premium mode.
double weight_user(UserId k, const SchedulerState& state,
                   const SchedulerParams& params);
std::vector<double> user_weights(const SchedulerState& state,
                                 const SchedulerParams& params);

// Scheduling metrics. `rates` is aligned with `set.users()`.

double pf_metric(const CandidateSet& set, std::span<const double> rates,
                 const SchedulerState& state, const SchedulerParams& params);
double wnopf_metric(const CandidateSet& set, std::span<const double> rates,
                    const SchedulerState& state, const SchedulerParams& params,
                    std::span<const double> weights);
double jwnopf_metric(const CandidateSet& set, std::span<const double> rates,
                     const SchedulerState& state, const SchedulerParams& params,
                     std::span<const double> weights);
double pf_modified_metric(const CandidateSet& set,
                          std::span<const double> rates,
                          const SchedulerState& state,
                          const SchedulerParams& params);
/// Only valid in slot 1; throws InvalidArgument otherwise.
double first_slot_metric(const CandidateSet& set, std::span<const double> rates,
                         const SchedulerState& state,
                         const SchedulerParams& params);

/// Sum of the member weights.
double set_weight(const CandidateSet& set, std::span<const double> weights);

/// Index of the winning candidate: highest metric, then (for weighted kinds)
/// highest unweighted PF metric, then lexicographically smallest set.
std::size_t select_candidate(std::span<const CandidateSet> candidates,
                             std::span<const LinkBudget> budgets,
                             const SchedulerState& state,
                             const SchedulerParams& params,
                             std::span<const double> weights);

struct SubbandAssignment {
  int subband = 0;
  CandidateSet users;
  LinkBudget link;
  double score = 0.0;
  // W(U) of the chosen set and sum_U W(U) over all candidates at decision
  // time; both zero for unweighted kinds.
  double set_weight = 0.0;
  double candidate_weight_sum = 0.0;
};

struct AllocationResult {
  int slot = 0;
  // In visit order.
  std::vector<SubbandAssignment> subbands;
  // R_k(t) per user.
  std::vector<double> user_rate;
};

/// Schedules every subband of one slot, updating R_k(t) and S_k after each
/// decision so later subbands see the running totals. `order_rng` is only
/// used with SubbandOrder::kRandom.
AllocationResult allocate_slot(const ChannelRealization& channel,
                               SchedulerState& state,
                               const SchedulerParams& params,
                               const LinkParams& link,
                               std::span<const CandidateSet> candidates,
                               std::mt19937_64* order_rng = nullptr);

/// Folds the finished slot into T_k and R_avg, clears the per-slot
/// bookkeeping and advances the slot index.
void end_slot_update(SchedulerState& state, const AllocationResult& result,
                     const SchedulerParams& params);

/// Convenience owner of state, candidate list and link parameters.
class Scheduler {
 public:
  Scheduler(int num_users, SchedulerParams params, LinkParams link,
            std::uint64_t order_seed = 0);

  AllocationResult allocate_slot(const ChannelRealization& channel);
  void end_slot_update(const AllocationResult& result);

  const SchedulerState& state() const { return state_; }
  const SchedulerParams& params() const { return params_; }
  std::span<const CandidateSet> candidates() const { return candidates_; }

 private:
  SchedulerParams params_;
  LinkParams link_;
  SchedulerState state_;
  std::vector<CandidateSet> candidates_;
  std::mt19937_64 order_rng_;
};

}  // namespace nomasched
