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

#include "nomasched/power.hpp"

#include <cmath>

namespace nomasched {

double equal_subband_power(const CellGeometry& geometry) {
  if (geometry.num_subbands < 1) {
    throw InvalidArgument("equal_subband_power: num_subbands must be >= 1");
  }
  return geometry.max_power_mw() / geometry.num_subbands;
}

void ftpa_allocate(std::span<const double> norm_gains, double subband_power,
                   double alpha, std::span<double> out) {
  if (norm_gains.empty()) {
    throw InvalidArgument("ftpa_allocate: empty candidate set");
  }
  if (out.size() != norm_gains.size()) {
    throw InvalidArgument("ftpa_allocate: output size mismatch");
  }
  if (norm_gains.size() == 1) {
    if (!(norm_gains[0] > 0.0)) {
      throw InvalidArgument("ftpa_allocate: gains must be positive");
    }
    out[0] = subband_power;
    return;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < norm_gains.size(); ++i) {
    if (!(norm_gains[i] > 0.0) || !std::isfinite(norm_gains[i])) {
      throw InvalidArgument("ftpa_allocate: gains must be positive");
    }
    out[i] = std::pow(norm_gains[i], -alpha);
    total += out[i];
  }
  for (double& p : out) p = subband_power * p / total;
}

std::vector<double> ftpa_allocate(std::span<const double> norm_gains,
                                  double subband_power, double alpha) {
  std::vector<double> out(norm_gains.size());
  ftpa_allocate(norm_gains, subband_power, alpha, out);
  return out;
}

}  // namespace nomasched
