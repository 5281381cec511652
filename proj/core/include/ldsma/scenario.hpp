// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The ldsma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "ldsma/matrix.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ldsma {

// Single-cell uplink system parameters. Defaults describe the reference
// deployment: 1 km inradius hexagon, 5 MHz split into 30 subcarriers,
// 23 dBm per user, -173 dBm/Hz noise.
struct SystemConfig {
    std::size_t num_users = 30;
    std::size_t num_subcarriers = 30;
    double bandwidth_hz = 5.0e6;
    double max_power_dbm = 23.0;
    double noise_psd_dbm_hz = -173.0;
    double cell_inradius_m = 1000.0;
    std::size_t loading = 6;   // users per subcarrier (d_c)
    std::size_t spreading = 2; // subcarriers per symbol (d_v)
    std::uint64_t rng_seed = 0;

    // Throws std::invalid_argument when an invariant is broken.
    void validate() const;

    double max_power_w() const;
    double subcarrier_spacing_hz() const { return bandwidth_hz / static_cast<double>(num_subcarriers); }
    // sigma^2 * W / N in watts.
    double noise_power_per_subcarrier_w() const;

    bool operator==(const SystemConfig&) const = default;
};

// -inf dBm maps to exactly zero watts.
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

struct UserPosition {
    std::size_t user_id = 0;
    double distance_m = 0.0;
    double angle_rad = 0.0;
};

// Users closer than this are re-drawn.
inline constexpr double kMinUserDistanceM = 35.0;

double hexagon_circumradius(double inradius_m);
// Hexagon centred at the origin with flat top and bottom edges at |y| = inradius.
bool inside_hexagon(double x_m, double y_m, double inradius_m);

// Uniform drop over the hexagonal cell, one RNG substream per user.
std::vector<UserPosition> drop_users(const SystemConfig& config);

// Simplified path-loss model K0 * (d0 / d)^gamma, with K0 the free-space gain at d0.
struct PathLossModel {
    double carrier_hz = 2.0e9;
    double reference_distance_m = 100.0;
    double exponent = 3.5;

    double reference_gain() const;
    double gain(double distance_m) const;
};

double path_loss(double distance_m, const PathLossModel& model = {});

// Tapped-delay-line power-delay profile. Powers are relative, in dB.
struct PowerDelayProfile {
    std::vector<double> delays_s;
    std::vector<double> powers_db;

    // ITU pedestrian B.
    static PowerDelayProfile ped_b();
    // One tap at zero delay; produces a flat channel.
    static PowerDelayProfile single_tap();

    // Linear tap powers scaled to unit sum.
    std::vector<double> normalized_linear_powers() const;
    void validate() const;
};

// Baseband centre frequencies of the N subcarriers, spacing W/N, spanning W.
std::vector<double> subcarrier_frequencies(const SystemConfig& config);

// One block-fading realization evaluated on the subcarrier grid.
// Deterministic in (config.rng_seed, user_id).
std::vector<std::complex<double>> fading_profile(const SystemConfig& config, std::size_t user_id,
                                                 const PowerDelayProfile& profile = PowerDelayProfile::ped_b());

// Per-user, per-subcarrier power gains and their noise-normalized version
// g = h / (sigma^2 W / N). Immutable once built.
class ChannelGains {
public:
    ChannelGains() = default;

    // Throws std::invalid_argument unless every gain is finite and strictly positive.
    static ChannelGains from_linear(Matrix<double> gains, double noise_power_w);
    // Normalized gains with an arbitrary noise reference; h = g * noise.
    static ChannelGains from_normalized(const Matrix<double>& normalized, double noise_power_w = 1.0);

    std::size_t num_users() const noexcept { return gains_.rows(); }
    std::size_t num_subcarriers() const noexcept { return gains_.cols(); }

    double gain(std::size_t k, std::size_t n) const { return gains_(k, n); }
    double normalized(std::size_t k, std::size_t n) const { return normalized_(k, n); }
    double noise_power() const noexcept { return noise_power_; }

    const Matrix<double>& gains() const noexcept { return gains_; }
    const Matrix<double>& normalized_gains() const noexcept { return normalized_; }

    bool operator==(const ChannelGains&) const = default;

private:
    Matrix<double> gains_;
    Matrix<double> normalized_;
    double noise_power_ = 1.0;
};

struct ChannelOptions {
    PathLossModel path_loss{};
    PowerDelayProfile profile = PowerDelayProfile::ped_b();
};

// h[k][n] = path_loss(d_k) * |alpha_k(n)|^2 for the given positions.
ChannelGains build_channel(const SystemConfig& config, std::span<const UserPosition> users,
                           const ChannelOptions& options = {});
// Drops users with drop_users() first.
ChannelGains build_channel(const SystemConfig& config, const ChannelOptions& options = {});

struct Scenario {
    std::vector<UserPosition> users;
    ChannelGains channel;
};

Scenario make_scenario(const SystemConfig& config, const ChannelOptions& options = {});

} // namespace ldsma
