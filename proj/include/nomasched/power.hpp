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

#include "nomasched/channel.hpp"

namespace nomasched {

/// P_max / S in mW: the BS budget split equally over subbands.
double equal_subband_power(const CellGeometry& geometry);

/// Fractional transmit power allocation among the users multiplexed on one
/// subband: P_n = P_s * g_n^-alpha / sum_j g_j^-alpha, where g is the
/// noise-normalized channel gain h^2/n. `out` must have the same size as
/// `norm_gains`.
void ftpa_allocate(std::span<const double> norm_gains, double subband_power,
                   double alpha, std::span<double> out);

std::vector<double> ftpa_allocate(std::span<const double> norm_gains,
                                  double subband_power, double alpha);

}  // namespace nomasched
