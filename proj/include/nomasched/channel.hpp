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
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "nomasched/common.hpp"

namespace nomasched {

/// Single-cell downlink layout and radio budget. All values are linear SI
/// units except the BS power, which is kept in dBm as configured and
/// converted through max_power_mw().
struct CellGeometry {
  double radius_m = 500.0;
  double min_distance_m = 35.0;
  double bs_power_dbm = 46.0;
  double bandwidth_hz = 10e6;
  int num_subbands = 128;
  double noise_psd_mw_per_hz = 4e-18;
  double carrier_hz = 2e9;
  // Log-normal shadowing; 0 disables it.
  double shadowing_std_db = 0.0;

  double subband_bandwidth_hz() const { return bandwidth_hz / num_subbands; }
  double noise_power_mw() const {
    return noise_psd_mw_per_hz * subband_bandwidth_hz();
  }
  double max_power_mw() const { return dbm_to_mw(bs_power_dbm); }

  /// Throws InvalidArgument naming the first violated constraint.
  void validate() const;

  friend bool operator==(const CellGeometry&, const CellGeometry&) = default;
};

struct UserPlacement {
  UserId user_id = 0;
  double distance_m = 0.0;
  double pathloss_db = 0.0;
  double shadowing_db = 0.0;
};

/// Distance-dependent pathloss, 128.1 + 37.6 log10(d / 1 km) dB.
double pathloss_db(double distance_m);
/// 10^(-PL/10).
double pathloss_linear(double distance_m);

/// Drops `num_users` users uniformly over the annulus
/// [min_distance_m, radius_m].
std::vector<UserPlacement> place_users(int num_users,
                                       const CellGeometry& geometry,
                                       std::mt19937_64& rng);

/// Maximum Doppler shift for a terminal moving at `velocity_kmh`.
double doppler_hz(double velocity_kmh, double carrier_hz);

enum class FadingModel {
  // Per-tap first-order Gauss-Markov process with the Jakes lag-1
  // correlation J0(2 pi fd dt).
  kAutoregressive,
  // Per-tap sum of sinusoids with random arrival angles.
  kSumOfSinusoids,
};

struct FadingConfig {
  double doppler_hz = 0.0;
  FadingModel model = FadingModel::kAutoregressive;
  int num_sinusoids = 16;
  double slot_duration_s = kSlotDurationS;
};

/// 3GPP Extended Typical Urban power-delay profile, tap powers normalized to
/// unit sum.
struct PowerDelayProfile {
  std::vector<double> delays_s;
  std::vector<double> powers;

  static PowerDelayProfile etu();
};

/// One slot of channel state. Matrices are stored subband-major:
/// element (s, k) lives at s * num_users + k.
struct ChannelRealization {
  int slot = 0;
  int num_subbands = 0;
  int num_users = 0;
  std::vector<double> gain2;        // |h|^2 including pathloss, linear
  std::vector<double> noise_power;  // mW

  double gain(int s, int k) const { return gain2[index(s, k)]; }
  double noise(int s, int k) const { return noise_power[index(s, k)]; }
  /// h^2 / n, the quantity that fixes the SIC order.
  double normalized_gain(int s, int k) const {
    return gain(s, k) / noise(s, k);
  }

 private:
  std::size_t index(int s, int k) const {
    return static_cast<std::size_t>(s) * num_users + k;
  }
};

/// Time- and frequency-selective small-scale fading for every user of one
/// drop. Sequential: a single instance must not be advanced from several
/// threads at once.
class FadingProcess {
 public:
  FadingProcess(int num_users, const CellGeometry& geometry,
                FadingConfig config, std::uint64_t seed,
                PowerDelayProfile profile = PowerDelayProfile::etu());

  /// Advances one slot and returns the resulting gains for `placements`.
  ChannelRealization next(std::span<const UserPlacement> placements);

  /// Complex small-scale response of user `k` on subband `s` for the most
  /// recent slot.
  std::complex<double> response(int s, int k) const;

  int slot() const { return slot_; }
  double tap_correlation() const { return rho_; }
  const FadingConfig& config() const { return config_; }

 private:
  void advance();
  std::complex<double> tap(int k, int l) const {
    return taps_[static_cast<std::size_t>(k) * num_taps_ + l];
  }

  int num_users_;
  CellGeometry geometry_;
  FadingConfig config_;
  PowerDelayProfile profile_;
  int num_taps_;
  double rho_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::vector<std::complex<double>> taps_;
  // exp(-j 2 pi f_s tau_l), subband-major
  std::vector<std::complex<double>> steering_;
  // sum-of-sinusoids: per (user, tap, sinusoid) Doppler shift and phase
  std::vector<double> sos_freq_;
  std::vector<double> sos_phase_;
  int slot_ = 0;
};

}  // namespace nomasched
