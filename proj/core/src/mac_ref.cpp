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

#include "ldsma/mac_ref.hpp"

#include "ldsma/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ldsma::mac {

void UserWeights::validate() const
{
    if (group_of.size() != weights.size()) {
        throw std::invalid_argument("UserWeights: group_of and weights differ in length");
    }
    for (std::size_t l = 0; l < group_weights.size(); ++l) {
        if (!std::isfinite(group_weights[l]) || group_weights[l] <= 0.0) {
            throw std::invalid_argument("UserWeights: group weights must be positive and finite");
        }
        if (l > 0 && !(group_weights[l] > group_weights[l - 1])) {
            throw std::invalid_argument("UserWeights: group weights must be strictly increasing");
        }
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (group_of[k] >= group_weights.size()) {
            throw std::invalid_argument("UserWeights: user " + std::to_string(k) + " has no group");
        }
        if (weights[k] != group_weights[group_of[k]]) {
            throw std::invalid_argument("UserWeights: user " + std::to_string(k) + " weight differs from its group");
        }
    }
}

UserWeights UserWeights::from_weights(std::vector<double> weights)
{
    UserWeights out;
    out.group_weights = weights;
    std::sort(out.group_weights.begin(), out.group_weights.end());
    out.group_weights.erase(std::unique(out.group_weights.begin(), out.group_weights.end()), out.group_weights.end());
    out.group_of.resize(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        auto it = std::lower_bound(out.group_weights.begin(), out.group_weights.end(), weights[k]);
        out.group_of[k] = static_cast<std::size_t>(it - out.group_weights.begin());
    }
    out.weights = std::move(weights);
    out.validate();
    return out;
}

UserWeights group_users(std::span<const UserPosition> users, std::size_t loading)
{
    const std::size_t k_users = users.size();
    if (loading == 0) {
        throw std::invalid_argument("group_users: loading must be at least 1");
    }
    if (k_users < loading) {
        throw std::invalid_argument("group_users: " + std::to_string(k_users) + " users cannot fill " +
                                    std::to_string(loading) + " groups");
    }

    std::vector<std::size_t> order(k_users);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return users[a].distance_m > users[b].distance_m;
    });

    const double total = static_cast<double>(loading * (loading + 1) / 2);
    UserWeights out;
    out.group_weights.resize(loading);
    for (std::size_t l = 0; l < loading; ++l) {
        out.group_weights[l] = static_cast<double>(l + 1) / total;
    }

    out.weights.resize(k_users);
    out.group_of.resize(k_users);
    const std::size_t base = k_users / loading;
    const std::size_t extra = k_users % loading;
    std::size_t pos = 0;
    // Chunk c = 0 is the farthest; it maps to the heaviest group.
    for (std::size_t c = 0; c < loading; ++c) {
        const std::size_t size = base + (c < extra ? 1 : 0);
        const std::size_t group = loading - 1 - c;
        for (std::size_t i = 0; i < size; ++i, ++pos) {
            const std::size_t k = order[pos];
            out.group_of[k] = group;
            out.weights[k] = out.group_weights[group];
        }
    }
    return out;
}

double utility(double weight, double noise, double q, double gain, double lambda)
{
    return weight / (noise + q) - lambda / gain;
}

SubcarrierAllocation greedy_per_subcarrier(std::span<const double> gains, std::span<const double> weights,
                                           std::span<const double> lambda, double noise)
{
    const std::size_t k_users = gains.size();
    if (weights.size() != k_users || lambda.size() != k_users) {
        throw std::invalid_argument("greedy_per_subcarrier: input lengths differ");
    }
    if (!(noise > 0.0)) {
        throw std::invalid_argument("greedy_per_subcarrier: noise must be positive");
    }

    // In t = 1 / (noise + q) every utility is a line w t - c with c = lambda / h.
    std::vector<double> cost(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        if (!(gains[k] > 0.0) || !(lambda[k] > 0.0) || !(weights[k] > 0.0)) {
            throw std::invalid_argument("greedy_per_subcarrier: gains, weights and multipliers must be positive");
        }
        cost[k] = lambda[k] / gains[k];
    }

    // Among candidates tied at the current t, the flatter line dominates just below it.
    auto better_below = [&](std::size_t a, std::size_t b) {
        if (weights[a] != weights[b]) {
            return weights[a] < weights[b];
        }
        return a < b;
    };

    const double t_top = 1.0 / noise;
    std::size_t current = k_users;
    double best = 0.0;
    for (std::size_t k = 0; k < k_users; ++k) {
        const double v = weights[k] * t_top - cost[k];
        if (v <= 0.0) {
            continue;
        }
        if (current == k_users || v > best || (v == best && better_below(k, current))) {
            current = k;
            best = v;
        }
    }

    SubcarrierAllocation out;
    if (current == k_users) {
        return out;
    }

    double t_cur = t_top;
    double q_cur = 0.0;
    while (true) {
        std::size_t next = k_users;
        double t_next = 0.0;
        for (std::size_t j = 0; j < k_users; ++j) {
            if (!(weights[j] < weights[current])) {
                continue;
            }
            double t = (cost[current] - cost[j]) / (weights[current] - weights[j]);
            if (!(t > 0.0)) {
                continue;
            }
            t = std::min(t, t_cur);
            if (next == k_users || t > t_next || (t == t_next && better_below(j, next))) {
                next = j;
                t_next = t;
            }
        }

        const double t_zero = cost[current] / weights[current];
        const bool hands_over = next != k_users && t_next > t_zero;
        const double t_end = hands_over ? t_next : std::min(t_zero, t_cur);
        const double q_end = 1.0 / t_end - noise;
        if (q_end > q_cur) {
            ActiveUser a;
            a.user = current;
            a.q_low = q_cur;
            a.q_high = q_end;
            a.transmit_power = (q_end - q_cur) / gains[current];
            out.active.push_back(a);
            q_cur = q_end;
        }
        if (!hands_over) {
            break;
        }
        current = next;
        t_cur = t_end;
    }

    std::reverse(out.active.begin(), out.active.end());
    return out;
}

std::vector<SubcarrierAllocation> allocate_for_multipliers(const ChannelGains& channel, std::span<const double> weights,
                                                           std::span<const double> lambda)
{
    const std::size_t k_users = channel.num_users();
    const std::size_t n_sub = channel.num_subcarriers();
    std::vector<SubcarrierAllocation> out(n_sub);
    std::vector<double> column(k_users);
    for (std::size_t n = 0; n < n_sub; ++n) {
        for (std::size_t k = 0; k < k_users; ++k) {
            column[k] = channel.gain(k, n);
        }
        out[n] = greedy_per_subcarrier(column, weights, lambda, channel.noise_power());
    }
    return out;
}

std::vector<double> successive_decoding_rates(const ChannelGains& channel,
                                              std::span<const SubcarrierAllocation> subcarriers)
{
    std::vector<double> rates(channel.num_users(), 0.0);
    const double noise = channel.noise_power();
    for (const auto& sc : subcarriers) {
        for (const auto& a : sc.active) {
            rates[a.user] += std::log2((noise + a.q_high) / (noise + a.q_low));
        }
    }
    return rates;
}

namespace {

std::vector<double> consumed_power(std::span<const SubcarrierAllocation> subcarriers, std::size_t k_users)
{
    std::vector<double> used(k_users, 0.0);
    for (const auto& sc : subcarriers) {
        for (const auto& a : sc.active) {
            used[a.user] += a.transmit_power;
        }
    }
    return used;
}

double user_consumption(const ChannelGains& channel, std::span<const double> weights, std::span<const double> lambda,
                        std::size_t k)
{
    const std::size_t k_users = channel.num_users();
    std::vector<double> column(k_users);
    double used = 0.0;
    for (std::size_t n = 0; n < channel.num_subcarriers(); ++n) {
        for (std::size_t i = 0; i < k_users; ++i) {
            column[i] = channel.gain(i, n);
        }
        const auto sc = greedy_per_subcarrier(column, weights, lambda, channel.noise_power());
        for (const auto& a : sc.active) {
            if (a.user == k) {
                used += a.transmit_power;
            }
        }
    }
    return used;
}

} // namespace

MacSolution solve_mac(const ChannelGains& channel, const UserWeights& weights, std::span<const double> max_power,
                      const MacOptions& options)
{
    const std::size_t k_users = channel.num_users();
    const std::size_t n_sub = channel.num_subcarriers();
    weights.validate();
    if (weights.num_users() != k_users || max_power.size() != k_users) {
        throw std::invalid_argument("solve_mac: weights, budgets and channel disagree on the number of users");
    }
    if (!(options.tolerance > 0.0) || !(options.lambda_floor > 0.0)) {
        throw std::invalid_argument("solve_mac: tolerance and multiplier floor must be positive");
    }
    for (double p : max_power) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("solve_mac: power budgets must be finite and nonnegative");
        }
    }

    const std::span<const double> w(weights.weights);
    const double noise = channel.noise_power();

    std::vector<double> lambda_max(k_users);
    std::vector<double> lambda(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        double h_max = 0.0;
        std::vector<double> g(n_sub);
        for (std::size_t n = 0; n < n_sub; ++n) {
            h_max = std::max(h_max, channel.gain(k, n));
            g[n] = channel.gain(k, n) / noise;
        }
        lambda_max[k] = 2.0 * w[k] * h_max / noise;
        const auto wf = su::waterfill(g, max_power[k]);
        lambda[k] = std::clamp(w[k] / wf.water_level, options.lambda_floor, lambda_max[k]);
    }

    // Users of one weight group never share a subcarrier, so consumption can jump
    // past the budget as lambda_k crosses a tie. A budget inside such a jump counts
    // as met: the multiplier is already optimal there.
    auto satisfied = [&](std::size_t k, double used) {
        const double p = max_power[k];
        if (used > p * (1.0 + options.tolerance) + std::numeric_limits<double>::min()) {
            return false;
        }
        if (used >= p * (1.0 - options.tolerance) || lambda[k] <= options.lambda_floor) {
            return true;
        }
        auto probe = lambda;
        probe[k] = std::max(options.lambda_floor, lambda[k] * (1.0 - 1e-9));
        return user_consumption(channel, w, probe, k) > p;
    };

    MacSolution out;
    for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
        out.sweeps = sweep + 1;
        for (std::size_t k = 0; k < k_users; ++k) {
            const double p = max_power[k];
            if (p == 0.0) {
                lambda[k] = lambda_max[k];
                continue;
            }
            lambda[k] = options.lambda_floor;
            if (user_consumption(channel, w, lambda, k) <= p) {
                continue;
            }
            // Geometric bisection; hi always stays on the feasible side.
            double lo = options.lambda_floor;
            double hi = lambda_max[k];
            double used_hi = 0.0;
            for (int it = 0; it < 200; ++it) {
                if (p - used_hi <= 1e-3 * options.tolerance * p || hi <= lo * (1.0 + 1e-15)) {
                    break;
                }
                const double mid = std::sqrt(lo * hi);
                lambda[k] = mid;
                const double used = user_consumption(channel, w, lambda, k);
                if (used > p) {
                    lo = mid;
                } else {
                    hi = mid;
                    used_hi = used;
                }
            }
            lambda[k] = hi;
        }

        const auto used = consumed_power(allocate_for_multipliers(channel, w, lambda), k_users);
        bool all = true;
        for (std::size_t k = 0; k < k_users && all; ++k) {
            all = satisfied(k, used[k]);
        }
        if (all) {
            out.converged = true;
            break;
        }
    }

    out.subcarriers = allocate_for_multipliers(channel, w, lambda);
    out.power = Matrix<double>(k_users, n_sub, 0.0);
    for (std::size_t n = 0; n < n_sub; ++n) {
        for (const auto& a : out.subcarriers[n].active) {
            out.power(a.user, n) = a.transmit_power;
        }
    }
    out.multipliers.lambda = lambda;
    out.multipliers.consumed_power = consumed_power(out.subcarriers, k_users);
    out.multipliers.converged = out.converged;
    out.rates = successive_decoding_rates(channel, out.subcarriers);
    for (std::size_t k = 0; k < k_users; ++k) {
        out.weighted_sum_rate += w[k] * out.rates[k];
    }
    return out;
}

} // namespace ldsma::mac
