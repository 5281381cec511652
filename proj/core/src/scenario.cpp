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

#include "ldsma/scenario.hpp"

#include "ldsma/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace ldsma {

void SystemConfig::validate() const
{
    if (num_users < 1)
        throw std::invalid_argument("num_users must be at least 1");
    if (num_subcarriers < 1)
        throw std::invalid_argument("num_subcarriers must be at least 1");
    if (loading < 1)
        throw std::invalid_argument("loading (d_c) must be at least 1");
    if (spreading < 1)
        throw std::invalid_argument("spreading (d_v) must be at least 1");
    if (spreading > num_subcarriers)
        throw std::invalid_argument("spreading (d_v) cannot exceed num_subcarriers");
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
        throw std::invalid_argument("bandwidth_hz must be positive and finite");
    if (!(cell_inradius_m > kMinUserDistanceM) || !std::isfinite(cell_inradius_m))
        throw std::invalid_argument("cell_inradius_m must be finite and larger than the minimum user distance");
    if (std::isnan(max_power_dbm) || max_power_dbm == std::numeric_limits<double>::infinity())
        throw std::invalid_argument("max_power_dbm must be finite or -inf");
    if (!std::isfinite(noise_psd_dbm_hz))
        throw std::invalid_argument("noise_psd_dbm_hz must be finite");
}

double SystemConfig::max_power_w() const { return dbm_to_watt(max_power_dbm); }

double SystemConfig::noise_power_per_subcarrier_w() const
{
    return dbm_to_watt(noise_psd_dbm_hz) * subcarrier_spacing_hz();
}

double dbm_to_watt(double dbm)
{
    if (dbm == -std::numeric_limits<double>::infinity())
        return 0.0;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

double hexagon_circumradius(double inradius_m) { return 2.0 * inradius_m / std::sqrt(3.0); }

bool inside_hexagon(double x_m, double y_m, double inradius_m)
{
    const double ax = std::abs(x_m);
    const double ay = std::abs(y_m);
    return ay <= inradius_m && std::sqrt(3.0) * ax + ay <= 2.0 * inradius_m;
}

std::vector<UserPosition> drop_users(const SystemConfig& config)
{
    config.validate();
    const double r = config.cell_inradius_m;
    const double big_r = hexagon_circumradius(r);

    std::vector<UserPosition> users;
    users.reserve(config.num_users);
    for (std::size_t k = 0; k < config.num_users; ++k) {
        auto engine = rng::make_engine(config.rng_seed, rng::Stream::position, k);
        std::uniform_real_distribution<double> ux(-big_r, big_r);
        std::uniform_real_distribution<double> uy(-r, r);
        // Rejection sampling from the bounding box.
        for (;;) {
            const double x = ux(engine);
            const double y = uy(engine);
            if (!inside_hexagon(x, y, r))
                continue;
            const double d = std::hypot(x, y);
            if (d < kMinUserDistanceM)
                continue;
            users.push_back({k, d, std::atan2(y, x)});
            break;
        }
    }
    return users;
}

double PathLossModel::reference_gain() const
{
    constexpr double c = 299792458.0;
    const double wavelength = c / carrier_hz;
    const double ratio = wavelength / (4.0 * std::numbers::pi * reference_distance_m);
    return ratio * ratio;
}

double PathLossModel::gain(double distance_m) const
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("path loss distance must be positive");
    return reference_gain() * std::pow(reference_distance_m / distance_m, exponent);
}

double path_loss(double distance_m, const PathLossModel& model) { return model.gain(distance_m); }

PowerDelayProfile PowerDelayProfile::ped_b()
{
    return {{0.0, 200e-9, 800e-9, 1200e-9, 2300e-9, 3700e-9}, {0.0, -0.9, -4.9, -8.0, -7.8, -23.9}};
}

PowerDelayProfile PowerDelayProfile::single_tap() { return {{0.0}, {0.0}}; }

void PowerDelayProfile::validate() const
{
    if (delays_s.empty() || delays_s.size() != powers_db.size())
        throw std::invalid_argument("power-delay profile needs matching, non-empty delay and power lists");
}

std::vector<double> PowerDelayProfile::normalized_linear_powers() const
{
    validate();
    std::vector<double> linear(powers_db.size());
    double total = 0.0;
    for (std::size_t i = 0; i < powers_db.size(); ++i) {
        linear[i] = std::pow(10.0, powers_db[i] / 10.0);
        total += linear[i];
    }
    for (auto& p : linear)
        p /= total;
    return linear;
}

std::vector<double> subcarrier_frequencies(const SystemConfig& config)
{
    const double spacing = config.subcarrier_spacing_hz();
    std::vector<double> f(config.num_subcarriers);
    for (std::size_t n = 0; n < f.size(); ++n)
        f[n] = -0.5 * config.bandwidth_hz + (static_cast<double>(n) + 0.5) * spacing;
    return f;
}

std::vector<std::complex<double>> fading_profile(const SystemConfig& config, std::size_t user_id,
                                                 const PowerDelayProfile& profile)
{
    config.validate();
    const auto tap_power = profile.normalized_linear_powers();
    auto engine = rng::make_engine(config.rng_seed, rng::Stream::fading, user_id);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<std::complex<double>> taps(tap_power.size());
    for (std::size_t i = 0; i < taps.size(); ++i) {
        const double sigma = std::sqrt(0.5 * tap_power[i]);
        const double re = normal(engine);
        const double im = normal(engine);
        taps[i] = {sigma * re, sigma * im};
    }

    const auto freq = subcarrier_frequencies(config);
    std::vector<std::complex<double>> response(freq.size());
    for (std::size_t n = 0; n < freq.size(); ++n) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < taps.size(); ++i)
            acc += taps[i] * std::polar(1.0, -2.0 * std::numbers::pi * freq[n] * profile.delays_s[i]);
        response[n] = acc;
    }
    return response;
}

ChannelGains ChannelGains::from_linear(Matrix<double> gains, double noise_power_w)
{
    if (!(noise_power_w > 0.0) || !std::isfinite(noise_power_w))
        throw std::invalid_argument("noise power must be positive and finite");
    if (gains.empty())
        throw std::invalid_argument("channel gain matrix is empty");
    for (double h : gains.data())
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::invalid_argument("channel gains must be strictly positive and finite");

    ChannelGains out;
    out.normalized_ = Matrix<double>(gains.rows(), gains.cols());
    for (std::size_t k = 0; k < gains.rows(); ++k)
        for (std::size_t n = 0; n < gains.cols(); ++n)
            out.normalized_(k, n) = gains(k, n) / noise_power_w;
    out.gains_ = std::move(gains);
    out.noise_power_ = noise_power_w;
    return out;
}

ChannelGains ChannelGains::from_normalized(const Matrix<double>& normalized, double noise_power_w)
{
    Matrix<double> gains(normalized.rows(), normalized.cols());
    for (std::size_t k = 0; k < normalized.rows(); ++k)
        for (std::size_t n = 0; n < normalized.cols(); ++n)
            gains(k, n) = normalized(k, n) * noise_power_w;
    return from_linear(std::move(gains), noise_power_w);
}

ChannelGains build_channel(const SystemConfig& config, std::span<const UserPosition> users,
                           const ChannelOptions& options)
{
    config.validate();
    if (users.size() != config.num_users)
        throw std::invalid_argument("position count does not match num_users");

    Matrix<double> h(config.num_users, config.num_subcarriers);
    for (const auto& user : users) {
        if (user.user_id >= config.num_users)
            throw std::invalid_argument("user_id out of range");
        const double pl = options.path_loss.gain(user.distance_m);
        const auto alpha = fading_profile(config, user.user_id, options.profile);
        for (std::size_t n = 0; n < config.num_subcarriers; ++n)
            h(user.user_id, n) = pl * std::norm(alpha[n]);
    }
    return ChannelGains::from_linear(std::move(h), config.noise_power_per_subcarrier_w());
}

ChannelGains build_channel(const SystemConfig& config, const ChannelOptions& options)
{
    const auto users = drop_users(config);
    return build_channel(config, users, options);
}

Scenario make_scenario(const SystemConfig& config, const ChannelOptions& options)
{
    Scenario s;
    s.users = drop_users(config);
    s.channel = build_channel(config, s.users, options);
    return s;
}

} // namespace ldsma
