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
#include "ldsma/scenario.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ldsma::mac {

// Per-user priorities with users clustered into weight groups. Group l (0-based)
// holds the users sharing group_weights[l]; groups are ordered nearest to farthest,
// so group weights increase with l.
struct UserWeights {
    std::vector<double> weights;
    std::vector<std::size_t> group_of;
    std::vector<double> group_weights;

    std::size_t num_users() const noexcept { return weights.size(); }
    std::size_t num_groups() const noexcept { return group_weights.size(); }

    // Consistency of weights with group_of/group_weights, and strictly increasing
    // group weights. Throws std::invalid_argument.
    void validate() const;

    // Users with equal weights share a group; groups are ordered by weight.
    static UserWeights from_weights(std::vector<double> weights);
};

// Sort by distance (farthest first, ties by index), split into `loading` contiguous
// groups of near-equal size with the remainder going to the farthest groups, and
// assign w_l = l / sum(1..d_c) with the farthest group largest.
// Throws std::invalid_argument when there are fewer users than groups.
UserWeights group_users(std::span<const UserPosition> users, std::size_t loading);

// w / (noise + q) - lambda / h.
double utility(double weight, double noise, double q, double gain, double lambda);

// Received-power slice of one active user on one subcarrier.
struct ActiveUser {
    std::size_t user = 0;
    double q_low = 0.0;  // interference from users decoded after this one (W)
    double q_high = 0.0; // q_low + received power (W)
    double transmit_power = 0.0;

    double received_power() const { return q_high - q_low; }
};

// Active users of one subcarrier in decoding order (first decoded first, i.e.
// increasing weight, decreasing q).
struct SubcarrierAllocation {
    std::vector<ActiveUser> active;
};

// Upper envelope of the utilities over q in [0, inf), solved in closed form. Each
// user's received power is the measure of q on which it is the positive maximizer.
// Identical utilities resolve to the lower user index.
SubcarrierAllocation greedy_per_subcarrier(std::span<const double> gains, std::span<const double> weights,
                                           std::span<const double> lambda, double noise);

struct LagrangeState {
    std::vector<double> lambda;
    std::vector<double> consumed_power;
    bool converged = false;
};

struct MacOptions {
    double tolerance = 1e-6;
    std::size_t max_sweeps = 200;
    double lambda_floor = 1e-12;
};

struct MacSolution {
    std::vector<SubcarrierAllocation> subcarriers;
    Matrix<double> power; // transmit power per user and subcarrier (W)
    LagrangeState multipliers;
    std::vector<double> rates; // bits per subcarrier use, summed over subcarriers
    double weighted_sum_rate = 0.0;
    std::size_t sweeps = 0;
    bool converged = false;
};

// Allocation of every subcarrier for fixed multipliers.
std::vector<SubcarrierAllocation> allocate_for_multipliers(const ChannelGains& channel, std::span<const double> weights,
                                                           std::span<const double> lambda);

// Successive-decoding rates for a given set of subcarrier allocations.
std::vector<double> successive_decoding_rates(const ChannelGains& channel,
                                              std::span<const SubcarrierAllocation> subcarriers);

// Gauss-Seidel sweeps of per-user bisection on lambda_k against the power budgets.
// A budget counts as met within tolerance, or when consumption jumps past it at the
// final lambda_k (equal-weight users cannot time-share a subcarrier). Any other
// shortfall is returned with converged == false.
MacSolution solve_mac(const ChannelGains& channel, const UserWeights& weights, std::span<const double> max_power,
                      const MacOptions& options = {});

} // namespace ldsma::mac
