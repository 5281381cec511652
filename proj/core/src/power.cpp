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

#include "ldsma/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ldsma::su {

double symbol_rate(std::span<const double> powers, std::span<const double> gains)
{
    if (powers.size() != gains.size())
        throw std::invalid_argument("symbol_rate: power and gain lengths differ");
    double amplitude = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] < 0.0)
            throw std::invalid_argument("symbol_rate: negative power");
        amplitude += std::sqrt(powers[i] * gains[i]);
    }
    return std::log2(1.0 + amplitude * amplitude);
}

std::vector<double> mrt_split(double symbol_power, std::span<const double> gains)
{
    if (gains.empty())
        throw std::invalid_argument("mrt_split: empty group");
    if (symbol_power < 0.0)
        throw std::invalid_argument("mrt_split: negative symbol power");
    const double total = std::accumulate(gains.begin(), gains.end(), 0.0);
    std::vector<double> out(gains.size(), 0.0);
    if (symbol_power == 0.0)
        return out;
    double assigned = 0.0;
    for (std::size_t i = 0; i + 1 < gains.size(); ++i) {
        out[i] = gains[i] / total * symbol_power;
        assigned += out[i];
    }
    out.back() = std::max(0.0, symbol_power - assigned);
    return out;
}

SymbolGains symbol_gains(const Partition& partition, std::span<const double> gains)
{
    SymbolGains s;
    s.values.reserve(partition.groups.size());
    for (const auto& group : partition.groups) {
        double sum = 0.0;
        for (auto n : group) {
            if (n >= gains.size())
                throw std::invalid_argument("symbol_gains: partition index out of range");
            sum += gains[n];
        }
        s.values.push_back(sum);
    }
    s.order = descending_order(s.values);
    return s;
}

WaterfillResult waterfill(std::span<const double> symbol_gains, double total_power)
{
    if (symbol_gains.empty())
        throw std::invalid_argument("waterfill: empty symbol set");
    if (total_power < 0.0 || !std::isfinite(total_power))
        throw std::invalid_argument("waterfill: total power must be finite and non-negative");
    for (double g : symbol_gains)
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("waterfill: symbol gains must be positive and finite");

    const auto order = descending_order(symbol_gains);
    WaterfillResult r;
    r.powers.assign(symbol_gains.size(), 0.0);

    if (total_power == 0.0) {
        r.water_level = 1.0 / symbol_gains[order.front()];
        return r;
    }

    // Largest active set whose level clears the weakest member's floor.
    double inverse_sum = 0.0;
    std::vector<double> prefix(order.size() + 1, 0.0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        inverse_sum += 1.0 / symbol_gains[order[i]];
        prefix[i + 1] = inverse_sum;
    }
    std::size_t active = 1;
    double level = total_power + prefix[1];
    for (std::size_t m = order.size(); m >= 1; --m) {
        const double candidate = (total_power + prefix[m]) / static_cast<double>(m);
        if (candidate > 1.0 / symbol_gains[order[m - 1]]) {
            active = m;
            level = candidate;
            break;
        }
    }

    r.water_level = level;
    r.active = active;
    for (std::size_t i = 0; i < active; ++i) {
        const auto m = order[i];
        r.powers[m] = std::max(0.0, level - 1.0 / symbol_gains[m]);
    }
    return r;
}

double kkt_violation(std::span<const double> symbol_gains, double total_power, const WaterfillResult& result)
{
    double worst = 0.0;
    const double level = result.water_level;
    double sum = 0.0;
    for (std::size_t m = 0; m < symbol_gains.size(); ++m) {
        const double p = result.powers[m];
        const double floor = 1.0 / symbol_gains[m];
        sum += p;
        if (p < 0.0)
            worst = std::max(worst, -p / std::max(level, 1e-300));
        if (p > 0.0)
            worst = std::max(worst, std::abs(p + floor - level) / level);
        else if (floor < level)
            worst = std::max(worst, (level - floor) / level);
    }
    if (total_power > 0.0)
        worst = std::max(worst, std::abs(sum - total_power) / total_power);
    return worst;
}

SUPowerAllocation mrt_wf(const Partition& partition, std::span<const double> gains, double total_power)
{
    validate_partition(partition, gains.size());
    if (partition.groups.empty())
        throw std::invalid_argument("mrt_wf: empty partition");

    const auto sg = symbol_gains(partition, gains);
    const auto wf = waterfill(sg.values, total_power);

    SUPowerAllocation out;
    out.symbol_powers = wf.powers;
    out.water_level = wf.water_level;
    out.subcarrier_powers.assign(gains.size(), 0.0);
    out.symbol_rates.resize(partition.groups.size());

    std::vector<double> group_gains;
    for (std::size_t m = 0; m < partition.groups.size(); ++m) {
        const auto& group = partition.groups[m];
        group_gains.clear();
        for (auto n : group)
            group_gains.push_back(gains[n]);
        const auto split = mrt_split(wf.powers[m], group_gains);
        for (std::size_t i = 0; i < group.size(); ++i)
            out.subcarrier_powers[group[i]] = split[i];
        // MRT makes (sum sqrt(p g))^2 collapse to p_bar * g_bar.
        out.symbol_rates[m] = std::log2(1.0 + wf.powers[m] * sg.values[m]);
        out.rate += out.symbol_rates[m];
    }
    return out;
}

} // namespace ldsma::su
