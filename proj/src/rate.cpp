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

#include "nomasched/rate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nomasched {

std::vector<UserId> sic_order(std::span<const UserId> users,
                              std::span<const double> norm_gains) {
  if (users.size() != norm_gains.size()) {
    throw InvalidArgument("sic_order: size mismatch");
  }
  std::vector<std::size_t> idx(users.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return decoded_before(norm_gains[a], users[a], norm_gains[b], users[b]);
  });
  std::vector<UserId> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(users[i]);
  return out;
}

void user_rates(std::span<const UserId> users, std::span<const double> gain2,
                std::span<const double> noise, std::span<const double> powers,
                double subband_bandwidth_hz, std::span<double> out) {
  const std::size_t n = users.size();
  if (gain2.size() != n || noise.size() != n || powers.size() != n ||
      out.size() != n) {
    throw InvalidArgument("user_rates: size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double gi = gain2[i] / noise[i];
    double interference = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (decoded_before(gi, users[i], gain2[j] / noise[j], users[j])) {
        interference += gain2[i] * powers[j];
      }
    }
    const double sinr = gain2[i] * powers[i] / (interference + noise[i]);
    out[i] = subband_bandwidth_hz * std::log2(1.0 + sinr);
  }
}

std::vector<double> user_rates(std::span<const UserId> users,
                               std::span<const double> gain2,
                               std::span<const double> noise,
                               std::span<const double> powers,
                               double subband_bandwidth_hz) {
  std::vector<double> out(users.size());
  user_rates(users, gain2, noise, powers, subband_bandwidth_hz, out);
  return out;
}

}  // namespace nomasched
