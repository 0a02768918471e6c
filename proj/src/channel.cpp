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

#include "nomasched/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nomasched {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

void CellGeometry::validate() const {
  if (!(radius_m > 0.0)) throw InvalidArgument("radius_m must be > 0");
  if (!(min_distance_m > 0.0) || min_distance_m >= radius_m) {
    throw InvalidArgument("min_distance_m must be in (0, radius_m)");
  }
  if (num_subbands < 1) throw InvalidArgument("num_subbands must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw InvalidArgument("bandwidth_hz must be > 0");
  if (!(noise_psd_mw_per_hz > 0.0)) {
    throw InvalidArgument("noise_psd_mw_per_hz must be > 0");
  }
  if (!(carrier_hz > 0.0)) throw InvalidArgument("carrier_hz must be > 0");
  if (!std::isfinite(bs_power_dbm)) {
    throw InvalidArgument("bs_power_dbm must be finite");
  }
  if (shadowing_std_db < 0.0) {
    throw InvalidArgument("shadowing_std_db must be >= 0");
  }
}

double pathloss_db(double distance_m) {
  if (!(distance_m > 0.0)) {
    throw InvalidArgument("pathloss: distance must be positive, got " +
                          std::to_string(distance_m));
  }
  return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

double pathloss_linear(double distance_m) {
  return std::pow(10.0, -pathloss_db(distance_m) / 10.0);
}

std::vector<UserPlacement> place_users(int num_users,
                                       const CellGeometry& geometry,
                                       std::mt19937_64& rng) {
  if (num_users < 1) throw InvalidArgument("place_users: K must be >= 1");
  geometry.validate();
  const double r0sq = geometry.min_distance_m * geometry.min_distance_m;
  const double r1sq = geometry.radius_m * geometry.radius_m;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> shadow(0.0, 1.0);

  std::vector<UserPlacement> out;
  out.reserve(num_users);
  for (int k = 0; k < num_users; ++k) {
    // Area-uniform on the annulus: r^2 ~ U(r0^2, r1^2).
    const double d = std::sqrt(r0sq + unit(rng) * (r1sq - r0sq));
    UserPlacement p;
    p.user_id = static_cast<UserId>(k);
    p.distance_m = std::min(d, geometry.radius_m);
    p.pathloss_db = pathloss_db(p.distance_m);
    if (geometry.shadowing_std_db > 0.0) {
      p.shadowing_db = geometry.shadowing_std_db * shadow(rng);
    }
    out.push_back(p);
  }
  return out;
}

double doppler_hz(double velocity_kmh, double carrier_hz) {
  return velocity_kmh / 3.6 * carrier_hz / kSpeedOfLight;
}

PowerDelayProfile PowerDelayProfile::etu() {
  static constexpr std::array<double, 9> kDelaysNs = {0,   50,   120,  200, 230,
                                                      500, 1600, 2300, 5000};
  static constexpr std::array<double, 9> kPowersDb = {-1, -1, -1, 0, 0,
                                                      0,  -3, -5, -7};
  PowerDelayProfile pdp;
  double total = 0.0;
  for (std::size_t l = 0; l < kDelaysNs.size(); ++l) {
    pdp.delays_s.push_back(kDelaysNs[l] * 1e-9);
    pdp.powers.push_back(std::pow(10.0, kPowersDb[l] / 10.0));
    total += pdp.powers.back();
  }
  for (double& p : pdp.powers) p /= total;
  return pdp;
}

FadingProcess::FadingProcess(int num_users, const CellGeometry& geometry,
                             FadingConfig config, std::uint64_t seed,
                             PowerDelayProfile profile)
    : num_users_(num_users),
      geometry_(geometry),
      config_(config),
      profile_(std::move(profile)),
      num_taps_(static_cast<int>(profile_.powers.size())),
      rng_(seed) {
  if (num_users < 1) throw InvalidArgument("FadingProcess: K must be >= 1");
  if (num_taps_ == 0 || profile_.delays_s.size() != profile_.powers.size()) {
    throw InvalidArgument("FadingProcess: malformed power-delay profile");
  }
  if (config_.doppler_hz < 0.0) {
    throw InvalidArgument("FadingProcess: doppler must be >= 0");
  }
  if (config_.model == FadingModel::kSumOfSinusoids &&
      config_.num_sinusoids < 1) {
    throw InvalidArgument("FadingProcess: num_sinusoids must be >= 1");
  }
  geometry_.validate();
  rho_ = std::cyl_bessel_j(
      0.0, kTwoPi * config_.doppler_hz * config_.slot_duration_s);

  const int S = geometry_.num_subbands;
  const double sub_bw = geometry_.subband_bandwidth_hz();
  steering_.resize(static_cast<std::size_t>(S) * num_taps_);
  for (int s = 0; s < S; ++s) {
    const double f = (s + 0.5) * sub_bw - geometry_.bandwidth_hz / 2.0;
    for (int l = 0; l < num_taps_; ++l) {
      steering_[static_cast<std::size_t>(s) * num_taps_ + l] =
          std::polar(1.0, -kTwoPi * f * profile_.delays_s[l]);
    }
  }

  taps_.resize(static_cast<std::size_t>(num_users_) * num_taps_);
  if (config_.model == FadingModel::kAutoregressive) {
    // Start from the stationary distribution CN(0, p_l).
    for (int k = 0; k < num_users_; ++k) {
      for (int l = 0; l < num_taps_; ++l) {
        const double sigma = std::sqrt(profile_.powers[l] / 2.0);
        taps_[static_cast<std::size_t>(k) * num_taps_ + l] = {
            sigma * normal_(rng_), sigma * normal_(rng_)};
      }
    }
  } else {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    const std::size_t n = static_cast<std::size_t>(num_users_) * num_taps_ *
                          config_.num_sinusoids;
    sos_freq_.resize(n);
    sos_phase_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      sos_freq_[i] = config_.doppler_hz * std::cos(angle(rng_));
      sos_phase_[i] = angle(rng_);
    }
  }
}

void FadingProcess::advance() {
  ++slot_;
  if (config_.model == FadingModel::kAutoregressive) {
    if (slot_ == 1 || rho_ == 1.0) return;
    const double innov = std::sqrt(std::max(0.0, 1.0 - rho_ * rho_));
    for (int k = 0; k < num_users_; ++k) {
      for (int l = 0; l < num_taps_; ++l) {
        const double sigma = innov * std::sqrt(profile_.powers[l] / 2.0);
        auto& h = taps_[static_cast<std::size_t>(k) * num_taps_ + l];
        h = rho_ * h +
            std::complex<double>(sigma * normal_(rng_), sigma * normal_(rng_));
      }
    }
    return;
  }
  const double t = (slot_ - 1) * config_.slot_duration_s;
  const int M = config_.num_sinusoids;
  const double norm = 1.0 / std::sqrt(static_cast<double>(M));
  for (int k = 0; k < num_users_; ++k) {
    for (int l = 0; l < num_taps_; ++l) {
      const std::size_t base =
          (static_cast<std::size_t>(k) * num_taps_ + l) * M;
      std::complex<double> acc = 0.0;
      for (int m = 0; m < M; ++m) {
        acc += std::polar(
            1.0, kTwoPi * sos_freq_[base + m] * t + sos_phase_[base + m]);
      }
      taps_[static_cast<std::size_t>(k) * num_taps_ + l] =
          acc * norm * std::sqrt(profile_.powers[l]);
    }
  }
}

std::complex<double> FadingProcess::response(int s, int k) const {
  std::complex<double> acc = 0.0;
  const std::size_t row = static_cast<std::size_t>(s) * num_taps_;
  for (int l = 0; l < num_taps_; ++l) acc += tap(k, l) * steering_[row + l];
  return acc;
}

ChannelRealization FadingProcess::next(
    std::span<const UserPlacement> placements) {
  if (static_cast<int>(placements.size()) != num_users_) {
    throw InvalidArgument("FadingProcess::next: placement count mismatch");
  }
  advance();
  const int S = geometry_.num_subbands;
  ChannelRealization r;
  r.slot = slot_;
  r.num_subbands = S;
  r.num_users = num_users_;
  r.gain2.resize(static_cast<std::size_t>(S) * num_users_);
  r.noise_power.assign(r.gain2.size(), geometry_.noise_power_mw());

  std::vector<double> large_scale(num_users_);
  for (int k = 0; k < num_users_; ++k) {
    large_scale[k] = std::pow(
        10.0, -(placements[k].pathloss_db + placements[k].shadowing_db) / 10.0);
  }
  // Fades below this are clamped so gain2 stays strictly positive.
  constexpr double kMinFade2 = 1e-30;
  for (int s = 0; s < S; ++s) {
    for (int k = 0; k < num_users_; ++k) {
      const double fade2 = std::max(std::norm(response(s, k)), kMinFade2);
      r.gain2[static_cast<std::size_t>(s) * num_users_ + k] =
          large_scale[k] * fade2;
    }
  }
  return r;
}

}  // namespace nomasched
