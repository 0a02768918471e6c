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

#include <span>
#include <vector>

#include "nomasched/common.hpp"

namespace nomasched {

/// True when `a` is decoded before `b` by SIC: lower h^2/n first, ties by
/// ascending user id.
inline bool decoded_before(double gain_a, UserId a, double gain_b, UserId b) {
  return gain_a < gain_b || (gain_a == gain_b && a < b);
}

/// SIC decoding order of `users` (ascending normalized gain).
std::vector<UserId> sic_order(std::span<const UserId> users,
                              std::span<const double> norm_gains);

/// Per-user achievable rate (bps) on one subband under perfect SIC.
///
/// User n sees as interference only the co-scheduled users decoded after it
/// (higher h^2/n), each attenuated by n's own channel:
///
///   R_n = B_s log2(1 + g2_n P_n / (sum_{j after n} g2_n P_j + noise_n))
///
/// All spans are aligned with `users`; `out` receives the rates.
void user_rates(std::span<const UserId> users, std::span<const double> gain2,
                std::span<const double> noise, std::span<const double> powers,
                double subband_bandwidth_hz, std::span<double> out);

std::vector<double> user_rates(std::span<const UserId> users,
                               std::span<const double> gain2,
                               std::span<const double> noise,
                               std::span<const double> powers,
                               double subband_bandwidth_hz);

}  // namespace nomasched
