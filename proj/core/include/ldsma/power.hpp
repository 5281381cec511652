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

#include "ldsma/partition.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ldsma::su {

// log2(1 + (sum_n sqrt(p_n g_n))^2): rate of one symbol spread over a group of subcarriers.
double symbol_rate(std::span<const double> powers, std::span<const double> gains);

// Maximum ratio transmission: share of the symbol power proportional to each subcarrier gain.
// The last entry absorbs rounding so that the outputs sum to symbol_power.
std::vector<double> mrt_split(double symbol_power, std::span<const double> gains);

// Effective symbol gains (sum of subcarrier gains per group) and their descending order.
struct SymbolGains {
    std::vector<double> values;
    std::vector<std::size_t> order; // indices into values, descending value, ties by index
};

SymbolGains symbol_gains(const Partition& partition, std::span<const double> gains);

struct WaterfillResult {
    std::vector<double> powers;
    double water_level = 0.0; // 1 / lambda
    std::size_t active = 0;
};

// Exact ledge water-filling: p_m = [level - 1/g_m]^+ with sum p_m = total_power.
// total_power == 0 yields all-zero powers and level 1/max(g).
WaterfillResult waterfill(std::span<const double> symbol_gains, double total_power);

// Largest relative violation of the water-filling KKT conditions; 0 for an exact solution.
double kkt_violation(std::span<const double> symbol_gains, double total_power, const WaterfillResult& result);

struct SUPowerAllocation {
    std::vector<double> symbol_powers;     // per group
    std::vector<double> subcarrier_powers; // per gain index
    std::vector<double> symbol_rates;      // bits per subcarrier use
    double water_level = 0.0;
    double rate = 0.0;
};

// MRT-WF: water-filling over effective symbol gains, then MRT inside every group.
// The partition must cover every index of gains.
SUPowerAllocation mrt_wf(const Partition& partition, std::span<const double> gains, double total_power);

} // namespace ldsma::su
