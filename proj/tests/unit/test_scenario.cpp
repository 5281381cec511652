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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

using namespace ldsma;

namespace {

// Area of the hexagon (inradius r) inside a disk of radius rho.
double hexagon_disk_area(double rho, double r)
{
    if (rho <= r)
        return std::numbers::pi * rho * rho;
    const double big_r = 2.0 * r / std::sqrt(3.0);
    if (rho >= big_r)
        return 2.0 * std::sqrt(3.0) * r * r;
    const double segment = rho * rho * std::acos(r / rho) - r * std::sqrt(rho * rho - r * r);
    return std::numbers::pi * rho * rho - 6.0 * segment;
}

} // namespace

TEST(SystemConfig, RejectsBrokenInvariants)
{
    SystemConfig c;
    EXPECT_NO_THROW(c.validate());
    auto bad = c;
    bad.num_users = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = c;
    bad.spreading = 31;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = c;
    bad.bandwidth_hz = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = c;
    bad.loading = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(SystemConfig, PowerConversions)
{
    EXPECT_DOUBLE_EQ(dbm_to_watt(0.0), 1e-3);
    EXPECT_NEAR(dbm_to_watt(23.0), 0.19952623, 1e-8);
    EXPECT_EQ(dbm_to_watt(-std::numeric_limits<double>::infinity()), 0.0);
    EXPECT_NEAR(watt_to_dbm(dbm_to_watt(-17.5)), -17.5, 1e-12);
}

TEST(SystemConfig, NoisePerSubcarrier)
{
    SystemConfig c;
    EXPECT_NEAR(watt_to_dbm(c.noise_power_per_subcarrier_w()), -173.0 + 10.0 * std::log10(5e6 / 30.0), 1e-9);
    EXPECT_NEAR(watt_to_dbm(c.noise_power_per_subcarrier_w()), -120.78, 0.01);
}

TEST(DropUsers, SingleUserInsideCell)
{
    SystemConfig c;
    c.num_users = 1;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        c.rng_seed = seed;
        const auto users = drop_users(c);
        ASSERT_EQ(users.size(), 1u);
        const double x = users[0].distance_m * std::cos(users[0].angle_rad);
        const double y = users[0].distance_m * std::sin(users[0].angle_rad);
        EXPECT_TRUE(inside_hexagon(x, y, c.cell_inradius_m));
        EXPECT_GE(users[0].distance_m, kMinUserDistanceM);
        EXPECT_LE(users[0].distance_m, hexagon_circumradius(c.cell_inradius_m));
    }
}

TEST(DropUsers, DeterministicAndPrefixStable)
{
    SystemConfig c;
    c.rng_seed = 99;
    c.num_users = 12;
    const auto a = drop_users(c);
    const auto b = drop_users(c);
    c.num_users = 20;
    const auto more = drop_users(c);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].distance_m, b[k].distance_m);
        EXPECT_EQ(a[k].angle_rad, b[k].angle_rad);
        EXPECT_EQ(a[k].distance_m, more[k].distance_m);
        EXPECT_EQ(a[k].user_id, k);
    }
}

TEST(DropUsers, RadialDistributionMatchesHexagonArea)
{
    SystemConfig c;
    c.num_users = 10000;
    c.rng_seed = 2024;
    const auto users = drop_users(c);
    const double r = c.cell_inradius_m;
    const double big_r = hexagon_circumradius(r);
    const double excluded = std::numbers::pi * kMinUserDistanceM * kMinUserDistanceM;
    const double total = hexagon_disk_area(big_r, r) - excluded;

    constexpr std::size_t bins = 10;
    std::array<double, bins + 1> edges{};
    for (std::size_t i = 0; i <= bins; ++i)
        edges[i] = kMinUserDistanceM + (big_r - kMinUserDistanceM) * static_cast<double>(i) / bins;
    std::array<std::size_t, bins> counts{};
    for (const auto& u : users) {
        std::size_t i = std::min<std::size_t>(
            bins - 1, static_cast<std::size_t>((u.distance_m - kMinUserDistanceM) / (big_r - kMinUserDistanceM) * bins));
        ++counts[i];
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        const double p = (hexagon_disk_area(edges[i + 1], r) - hexagon_disk_area(edges[i], r)) / total;
        const double expected = p * static_cast<double>(users.size());
        chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
    }
    // 99th percentile of chi-square with 9 degrees of freedom.
    EXPECT_LT(chi2, 21.666);
}

TEST(PathLoss, ReferenceAndSlope)
{
    PathLossModel m;
    EXPECT_NEAR(10.0 * std::log10(m.reference_gain()), -78.47, 0.01);
    EXPECT_DOUBLE_EQ(path_loss(100.0), m.reference_gain());
    EXPECT_NEAR(path_loss(200.0) / m.reference_gain(), std::pow(2.0, -3.5), 1e-15);
    EXPECT_GT(path_loss(500.0), path_loss(1000.0));
}

TEST(Fading, SingleTapIsFlat)
{
    SystemConfig c;
    const auto alpha = fading_profile(c, 3, PowerDelayProfile::single_tap());
    ASSERT_EQ(alpha.size(), c.num_subcarriers);
    for (const auto& a : alpha)
        EXPECT_NEAR(std::abs(a), std::abs(alpha[0]), 1e-12);
}

TEST(Fading, DeterministicPerUser)
{
    SystemConfig c;
    c.rng_seed = 5;
    const auto a = fading_profile(c, 2);
    const auto b = fading_profile(c, 2);
    const auto other = fading_profile(c, 3);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, other);
}

TEST(Fading, UnitMeanPower)
{
    SystemConfig c;
    c.num_subcarriers = 8;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t u = 0; u < 100000; ++u) {
        for (const auto& a : fading_profile(c, u)) {
            sum += std::norm(a);
            ++count;
        }
    }
    EXPECT_NEAR(sum / static_cast<double>(count), 1.0, 0.02);
}

TEST(Fading, PedBProfileNormalized)
{
    const auto p = PowerDelayProfile::ped_b().normalized_linear_powers();
    ASSERT_EQ(p.size(), 6u);
    double total = 0.0;
    for (double x : p)
        total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Channel, FlatEquidistantUsersShareGains)
{
    SystemConfig c;
    c.num_users = 4;
    std::vector<UserPosition> users;
    for (std::size_t k = 0; k < 4; ++k)
        users.push_back({k, 400.0, 0.5 * static_cast<double>(k)});
    ChannelOptions opt;
    opt.profile = PowerDelayProfile::single_tap();
    const auto ch = build_channel(c, users, opt);
    // Independent fading draws still differ per user; only path loss is shared, so
    // normalize out the tap amplitude.
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t n = 0; n < c.num_subcarriers; ++n)
            EXPECT_NEAR(ch.normalized(k, n), ch.normalized(k, 0), 1e-9 * ch.normalized(k, 0));
    }
}

TEST(Channel, NormalizationConsistency)
{
    SystemConfig c;
    c.rng_seed = 11;
    const auto ch = build_channel(c);
    for (std::size_t k = 0; k < ch.num_users(); ++k) {
        for (std::size_t n = 0; n < ch.num_subcarriers(); ++n) {
            EXPECT_GT(ch.gain(k, n), 0.0);
            EXPECT_NEAR(ch.normalized(k, n) * ch.noise_power(), ch.gain(k, n), 1e-12 * ch.gain(k, n));
        }
    }
}

TEST(Channel, DoublingNoiseHalvesNormalizedGain)
{
    SystemConfig c;
    c.rng_seed = 3;
    auto louder = c;
    louder.noise_psd_dbm_hz += 10.0 * std::log10(2.0);
    const auto a = build_channel(c);
    const auto b = build_channel(louder);
    for (std::size_t k = 0; k < a.num_users(); ++k)
        for (std::size_t n = 0; n < a.num_subcarriers(); ++n)
            EXPECT_NEAR(b.normalized(k, n), 0.5 * a.normalized(k, n), 1e-12 * a.normalized(k, n));
    EXPECT_EQ(a.gains(), b.gains());
}

TEST(Channel, DeterministicScenario)
{
    SystemConfig c;
    c.rng_seed = 77;
    EXPECT_EQ(make_scenario(c).channel, make_scenario(c).channel);
}

TEST(Channel, RejectsNonPositiveGains)
{
    Matrix<double> m(1, 2, 1.0);
    m(0, 1) = 0.0;
    EXPECT_THROW(ChannelGains::from_linear(m, 1.0), std::invalid_argument);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(ChannelGains::from_linear(m, 1.0), std::invalid_argument);
}
