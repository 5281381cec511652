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

#include "ldsma/mac_ref.hpp"
#include "ldsma/matrix.hpp"
#include "ldsma/partition.hpp"
#include "ldsma/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace ldsma::mu {

using mac::UserWeights;

// SA1: best (user, group) utility. SA2: largest weighted rate increase, then that
// user's best group.
enum class Criterion { sa1, sa2 };

std::string_view to_string(Criterion c) noexcept;
// Accepts "sa1"/"sa2" in any case; throws std::invalid_argument otherwise.
Criterion parse_criterion(std::string_view text);

struct AllocationState {
    Matrix<std::uint8_t> assigned;                   // x[k][n]
    std::vector<std::vector<std::size_t>> allocated; // N_k, ascending
    std::vector<std::vector<std::size_t>> available; // N_k^u, ascending
    std::vector<std::vector<std::vector<std::size_t>>> candidates; // groups of N_k^u
    Matrix<double> power;        // transmit power of the latest allocation phase (W)
    Matrix<double> committed;    // power held by each assigned entry when it was assigned (W)
    Matrix<double> interference; // J[k][n] (W)
    std::size_t iteration = 0;
};

struct AllocationResult {
    AllocationState state;
    std::vector<su::Partition> partitions; // per user, over absolute subcarrier indices
    std::vector<double> rates;             // bits per subcarrier use, summed over symbols
    double weighted_sum_rate = 0.0;
    std::size_t iterations = 0;
};

struct AllocatorOptions {
    Criterion criterion = Criterion::sa1;
    double zero_utility = 1e-12;
    // Checks loading, exclusivity and the incremental interference after every
    // assignment; std::logic_error on a mismatch.
    bool verify = false;
    // Called after every assignment.
    std::function<void(const AllocationState&)> observer;
};

// w log2(1 + (sum_n sqrt(h p / (j + noise)))^2) over the subcarriers of `group`.
double utility_mumrt(double weight, std::span<const std::size_t> group, std::span<const double> gains,
                     std::span<const double> powers, std::span<const double> interference, double noise);
// w log2(1 + h p / (j + noise)).
double utility_muwf(double weight, double gain, double power, double interference, double noise);

// J[k][n] = sum over users i with w_i > w_k of x[i][n] h[i][n] p[i][n].
Matrix<double> compute_interference(const ChannelGains& channel, std::span<const double> weights,
                                    const Matrix<std::uint8_t>& assigned, const Matrix<double>& power);

// Per-user symbol rates of a finished allocation, with interference recomputed from
// its powers.
std::vector<double> user_rates(const ChannelGains& channel, std::span<const double> weights,
                               const AllocationResult& result);

double weighted_sum_rate(const AllocationResult& result, const ChannelGains& channel, const UserWeights& weights);

// Iterative allocation with spreading from the outset: d_v subcarriers per iteration.
// N must be divisible by d_v and the weight groups must not outnumber d_c.
AllocationResult mumrt(const ChannelGains& channel, const UserWeights& weights, std::span<const double> max_power,
                       std::size_t loading, std::size_t spreading, const AllocatorOptions& options = {});

// Iterative allocation one subcarrier at a time with water-filling, followed by
// spreading and MRT-WF on the allocated subcarriers.
AllocationResult muwf(const ChannelGains& channel, const UserWeights& weights, std::span<const double> max_power,
                      std::size_t loading, std::size_t spreading, const AllocatorOptions& options = {});

// floor(N/K) contiguous subcarriers per user (one each for the first N users when
// K > N), equal power, no sharing.
AllocationResult static_baseline(const ChannelGains& channel, const UserWeights& weights,
                                 std::span<const double> max_power, std::size_t spreading);

// Orthogonal stand-in: one user per subcarrier, water-filling, no spreading.
AllocationResult ofdma_baseline(const ChannelGains& channel, const UserWeights& weights,
                                std::span<const double> max_power, const AllocatorOptions& options = {});

} // namespace ldsma::mu
