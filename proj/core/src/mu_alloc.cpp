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

#include "ldsma/mu_alloc.hpp"

#include "ldsma/power.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ldsma::mu {

std::string_view to_string(Criterion c) noexcept
{
    return c == Criterion::sa1 ? "sa1" : "sa2";
}

Criterion parse_criterion(std::string_view text)
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "sa1") {
        return Criterion::sa1;
    }
    if (lower == "sa2") {
        return Criterion::sa2;
    }
    throw std::invalid_argument("unknown criterion '" + std::string(text) + "' (expected sa1 or sa2)");
}

double utility_mumrt(double weight, std::span<const std::size_t> group, std::span<const double> gains,
                     std::span<const double> powers, std::span<const double> interference, double noise)
{
    double amplitude = 0.0;
    for (std::size_t n : group) {
        amplitude += std::sqrt(gains[n] * powers[n] / (interference[n] + noise));
    }
    return weight * std::log2(1.0 + amplitude * amplitude);
}

double utility_muwf(double weight, double gain, double power, double interference, double noise)
{
    return weight * std::log2(1.0 + gain * power / (interference + noise));
}

Matrix<double> compute_interference(const ChannelGains& channel, std::span<const double> weights,
                                    const Matrix<std::uint8_t>& assigned, const Matrix<double>& power)
{
    const std::size_t k_users = channel.num_users();
    const std::size_t n_sub = channel.num_subcarriers();
    Matrix<double> j(k_users, n_sub, 0.0);
    for (std::size_t n = 0; n < n_sub; ++n) {
        for (std::size_t i = 0; i < k_users; ++i) {
            if (!assigned(i, n)) {
                continue;
            }
            const double rx = channel.gain(i, n) * power(i, n);
            for (std::size_t k = 0; k < k_users; ++k) {
                if (weights[i] > weights[k]) {
                    j(k, n) += rx;
                }
            }
        }
    }
    return j;
}

namespace {

using Groups = std::vector<std::vector<std::size_t>>;

// Greedy grouping of a subset of subcarriers by the given per-subcarrier gains.
Groups greedy_groups(std::span<const std::size_t> subset, std::span<const double> gains, std::size_t spreading)
{
    if (subset.empty()) {
        return {};
    }
    std::vector<double> local(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) {
        local[i] = gains[subset[i]];
    }
    const auto part = su::partition_greedy(local, spreading);
    Groups out;
    out.reserve(part.groups.size());
    for (const auto& g : part.groups) {
        std::vector<std::size_t> abs;
        abs.reserve(g.size());
        for (std::size_t i : g) {
            abs.push_back(subset[i]);
        }
        std::sort(abs.begin(), abs.end());
        out.push_back(std::move(abs));
    }
    return out;
}

// MRT-WF over explicit groups. Writes per-subcarrier powers into `powers` and returns
// the symbol rates.
std::vector<double> mrt_wf_groups(const Groups& groups, std::span<const double> gains, double total_power,
                                  std::span<double> powers)
{
    std::vector<double> rates(groups.size(), 0.0);
    if (groups.empty()) {
        return rates;
    }
    std::vector<double> symbol_gain(groups.size(), 0.0);
    for (std::size_t m = 0; m < groups.size(); ++m) {
        for (std::size_t n : groups[m]) {
            symbol_gain[m] += gains[n];
        }
    }
    const auto wf = su::waterfill(symbol_gain, total_power);
    std::vector<double> g;
    std::vector<double> p;
    for (std::size_t m = 0; m < groups.size(); ++m) {
        g.clear();
        for (std::size_t n : groups[m]) {
            g.push_back(gains[n]);
        }
        p = su::mrt_split(wf.powers[m], g);
        for (std::size_t i = 0; i < groups[m].size(); ++i) {
            powers[groups[m][i]] = p[i];
        }
        rates[m] = su::symbol_rate(p, g);
    }
    return rates;
}

struct Setup {
    const ChannelGains* channel = nullptr;
    std::span<const double> weights;
    std::vector<std::size_t> exclusive; // users sharing an id never share a subcarrier
    std::span<const double> max_power;
    std::size_t loading = 1;
    std::size_t phase_spreading = 1;
    std::size_t final_spreading = 1;
    AllocatorOptions options;
};

struct Phase {
    Groups candidates;
    std::vector<double> utilities;
    double rate = 0.0;
    double rate_allocated = 0.0;
};

std::vector<double> effective_gains(const ChannelGains& channel, const Matrix<double>& j, std::size_t k)
{
    std::vector<double> g(channel.num_subcarriers());
    for (std::size_t n = 0; n < g.size(); ++n) {
        g[n] = channel.gain(k, n) / (j(k, n) + channel.noise_power());
    }
    return g;
}

void check_state(const Setup& s, const AllocationState& st)
{
    const auto& ch = *s.channel;
    const std::size_t k_users = ch.num_users();
    for (std::size_t n = 0; n < ch.num_subcarriers(); ++n) {
        std::size_t load = 0;
        std::vector<std::size_t> holders;
        for (std::size_t k = 0; k < k_users; ++k) {
            if (st.assigned(k, n) > 1) {
                throw std::logic_error("allocation: non-binary assignment");
            }
            if (st.assigned(k, n)) {
                ++load;
                holders.push_back(s.exclusive[k]);
            }
        }
        if (load > s.loading) {
            throw std::logic_error("allocation: loading exceeded on subcarrier " + std::to_string(n));
        }
        std::sort(holders.begin(), holders.end());
        if (std::adjacent_find(holders.begin(), holders.end()) != holders.end()) {
            throw std::logic_error("allocation: two users of one group share subcarrier " + std::to_string(n));
        }
    }
    const auto fresh = compute_interference(ch, s.weights, st.assigned, st.committed);
    for (std::size_t k = 0; k < k_users; ++k) {
        double used = 0.0;
        for (std::size_t n = 0; n < ch.num_subcarriers(); ++n) {
            const double a = fresh(k, n);
            const double b = st.interference(k, n);
            if (std::abs(a - b) > 1e-9 * std::max({std::abs(a), std::abs(b), 1e-300})) {
                throw std::logic_error("allocation: incremental interference drifted");
            }
            used += st.power(k, n);
        }
        if (used > s.max_power[k] * (1.0 + 1e-9)) {
            throw std::logic_error("allocation: power budget exceeded for user " + std::to_string(k));
        }
    }
}

Phase run_phase(const Setup& s, AllocationState& st, std::size_t k)
{
    const auto& ch = *s.channel;
    const auto g = effective_gains(ch, st.interference, k);
    Phase out;
    const auto owned = greedy_groups(st.allocated[k], g, s.phase_spreading);
    out.candidates = greedy_groups(st.available[k], g, s.phase_spreading);

    Groups all = owned;
    all.insert(all.end(), out.candidates.begin(), out.candidates.end());
    std::vector<double> p(ch.num_subcarriers(), 0.0);
    const auto rates = mrt_wf_groups(all, g, s.max_power[k], p);
    out.rate = std::accumulate(rates.begin(), rates.end(), 0.0);
    for (std::size_t n = 0; n < p.size(); ++n) {
        st.power(k, n) = p[n];
    }

    out.utilities.resize(out.candidates.size());
    for (std::size_t m = 0; m < out.candidates.size(); ++m) {
        out.utilities[m] = s.weights[k] * rates[owned.size() + m];
    }

    if (s.options.criterion == Criterion::sa2 && !owned.empty()) {
        std::vector<double> scratch(ch.num_subcarriers(), 0.0);
        const auto ra = mrt_wf_groups(owned, g, s.max_power[k], scratch);
        out.rate_allocated = std::accumulate(ra.begin(), ra.end(), 0.0);
    }
    st.candidates[k] = out.candidates;
    return out;
}

// Every user runs MRT-WF on its own subcarriers against the interference seen at
// termination; rates are then evaluated with the interference of the final powers.
void final_pass(const Setup& s, AllocationResult& res)
{
    const auto& ch = *s.channel;
    const std::size_t k_users = ch.num_users();
    const std::size_t n_sub = ch.num_subcarriers();
    auto& st = res.state;
    Matrix<double> power(k_users, n_sub, 0.0);
    res.partitions.assign(k_users, su::Partition{});
    for (std::size_t k = 0; k < k_users; ++k) {
        const auto g = effective_gains(ch, st.interference, k);
        const auto groups = greedy_groups(st.allocated[k], g, s.final_spreading);
        std::vector<double> p(n_sub, 0.0);
        mrt_wf_groups(groups, g, s.max_power[k], p);
        res.partitions[k].groups = groups;
        res.partitions[k].spreading = s.final_spreading;
        for (std::size_t n : st.allocated[k])
            power(k, n) = p[n];
    }
    st.power = std::move(power);
    st.interference = compute_interference(ch, s.weights, st.assigned, st.power);
    res.rates = user_rates(ch, s.weights, res);
    res.weighted_sum_rate = 0.0;
    for (std::size_t k = 0; k < k_users; ++k)
        res.weighted_sum_rate += s.weights[k] * res.rates[k];
}

AllocationResult run_iterative(const Setup& s)
{
    const auto& ch = *s.channel;
    const std::size_t k_users = ch.num_users();
    const std::size_t n_sub = ch.num_subcarriers();

    AllocationResult res;
    auto& st = res.state;
    st.assigned = Matrix<std::uint8_t>(k_users, n_sub, 0);
    st.power = Matrix<double>(k_users, n_sub, 0.0);
    st.committed = Matrix<double>(k_users, n_sub, 0.0);
    st.interference = Matrix<double>(k_users, n_sub, 0.0);
    st.allocated.assign(k_users, {});
    st.available.assign(k_users, std::vector<std::size_t>(n_sub));
    for (auto& a : st.available) {
        std::iota(a.begin(), a.end(), std::size_t{0});
    }
    st.candidates.assign(k_users, {});

    std::vector<Phase> phases(k_users);
    // A phase only changes for users whose interference or subcarrier sets changed.
    std::vector<bool> stale(k_users, true);
    while (true) {
        for (std::size_t k = 0; k < k_users; ++k) {
            if (stale[k])
                phases[k] = run_phase(s, st, k);
        }

        // Best group per user; ties resolve to the earlier user and group.
        std::vector<std::size_t> best_m(k_users, 0);
        std::vector<double> best_u(k_users, 0.0);
        for (std::size_t k = 0; k < k_users; ++k) {
            for (std::size_t m = 0; m < phases[k].utilities.size(); ++m) {
                if (phases[k].utilities[m] > best_u[k]) {
                    best_u[k] = phases[k].utilities[m];
                    best_m[k] = m;
                }
            }
        }

        std::size_t winner = k_users;
        double score = 0.0;
        for (std::size_t k = 0; k < k_users; ++k) {
            if (best_u[k] <= s.options.zero_utility) {
                continue;
            }
            const double v = s.options.criterion == Criterion::sa1
                                 ? best_u[k]
                                 : s.weights[k] * (phases[k].rate - phases[k].rate_allocated);
            if (winner == k_users || v > score) {
                winner = k;
                score = v;
            }
        }
        if (winner == k_users) {
            break;
        }

        const auto& group = phases[winner].candidates[best_m[winner]];
        for (std::size_t n : group) {
            st.assigned(winner, n) = 1;
            st.committed(winner, n) = st.power(winner, n);
            const double rx = ch.gain(winner, n) * st.power(winner, n);
            for (std::size_t k = 0; k < k_users; ++k) {
                if (s.weights[winner] > s.weights[k]) {
                    st.interference(k, n) += rx;
                }
            }
        }
        auto& mine = st.allocated[winner];
        mine.insert(mine.end(), group.begin(), group.end());
        std::sort(mine.begin(), mine.end());
        for (std::size_t k = 0; k < k_users; ++k) {
            if (s.exclusive[k] != s.exclusive[winner]) {
                continue;
            }
            auto& av = st.available[k];
            av.erase(std::remove_if(av.begin(), av.end(),
                                    [&](std::size_t n) {
                                        return std::binary_search(group.begin(), group.end(), n);
                                    }),
                     av.end());
        }
        ++st.iteration;
        for (std::size_t k = 0; k < k_users; ++k) {
            stale[k] = k == winner || s.exclusive[k] == s.exclusive[winner] || s.weights[k] < s.weights[winner];
        }

        if (s.options.verify) {
            check_state(s, st);
        }
        if (s.options.observer) {
            s.options.observer(st);
        }
    }

    res.iterations = st.iteration;
    final_pass(s, res);
    if (s.options.verify) {
        const auto fresh = user_rates(ch, s.weights, res);
        for (std::size_t k = 0; k < k_users; ++k) {
            if (std::abs(fresh[k] - res.rates[k]) > 1e-9 * std::max(1.0, std::abs(res.rates[k]))) {
                throw std::logic_error("allocation: stored rates disagree with final powers");
            }
        }
    }
    return res;
}

void check_inputs(const ChannelGains& channel, const UserWeights& weights, std::span<const double> max_power,
                  std::size_t spreading)
{
    weights.validate();
    if (weights.num_users() != channel.num_users() || max_power.size() != channel.num_users()) {
        throw std::invalid_argument("allocation: weights, budgets and channel disagree on the number of users");
    }
    if (channel.num_users() == 0 || channel.num_subcarriers() == 0) {
        throw std::invalid_argument("allocation: empty channel");
    }
    if (spreading == 0 || spreading > channel.num_subcarriers()) {
        throw std::invalid_argument("allocation: spreading must be in [1, N]");
    }
    for (double p : max_power) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("allocation: power budgets must be finite and nonnegative");
        }
    }
}

Setup make_setup(const ChannelGains& channel, const UserWeights& weights, std::span<const double> max_power,
                 std::size_t loading, const AllocatorOptions& options)
{
    if (loading == 0) {
        throw std::invalid_argument("allocation: loading must be at least 1");
    }
    if (weights.num_groups() > loading) {
        throw std::invalid_argument("allocation: " + std::to_string(weights.num_groups()) +
                                    " weight groups exceed loading " + std::to_string(loading));
    }
    Setup s;
    s.channel = &channel;
    s.weights = weights.weights;
    s.exclusive = weights.group_of;
    s.max_power = max_power;
    s.loading = loading;
    s.options = options;
    return s;
}

} // namespace

std::vector<double> user_rates(const ChannelGains& channel, std::span<const double> weights,
                               const AllocationResult& result)
{
    const auto& st = result.state;
    const auto j = compute_interference(channel, weights, st.assigned, st.power);
    std::vector<double> rates(channel.num_users(), 0.0);
    std::vector<double> p;
    std::vector<double> g;
    for (std::size_t k = 0; k < channel.num_users(); ++k) {
        for (const auto& group : result.partitions[k].groups) {
            p.clear();
            g.clear();
            for (std::size_t n : group) {
                p.push_back(st.power(k, n));
                g.push_back(channel.gain(k, n) / (j(k, n) + channel.noise_power()));
            }
            rates[k] += su::symbol_rate(p, g);
        }
    }
    return rates;
}

double weighted_sum_rate(const AllocationResult& result, const ChannelGains& channel, const UserWeights& weights)
{
    const auto rates = user_rates(channel, weights.weights, result);
    double total = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        total += weights.weights[k] * rates[k];
    }
    return total;
}

AllocationResult mumrt(const ChannelGains& channel, const UserWeights& weights, std::span<const double> max_power,
                       std::size_t loading, std::size_t spreading, const AllocatorOptions& options)
{
    check_inputs(channel, weights, max_power, spreading);
    if (channel.num_subcarriers() % spreading != 0) {
        throw std::invalid_argument("mumrt: N = " + std::to_string(channel.num_subcarriers()) +
                                    " is not divisible by d_v = " + std::to_string(spreading));
    }
    auto s = make_setup(channel, weights, max_power, loading, options);
    s.phase_spreading = spreading;
    s.final_spreading = spreading;
    return run_iterative(s);
}

AllocationResult muwf(const ChannelGains& channel, const UserWeights& weights, std::span<const double> max_power,
                      std::size_t loading, std::size_t spreading, const AllocatorOptions& options)
{
    check_inputs(channel, weights, max_power, spreading);
    auto s = make_setup(channel, weights, max_power, loading, options);
    s.phase_spreading = 1;
    s.final_spreading = spreading;
    return run_iterative(s);
}

AllocationResult ofdma_baseline(const ChannelGains& channel, const UserWeights& weights,
                                std::span<const double> max_power, const AllocatorOptions& options)
{
    check_inputs(channel, weights, max_power, 1);
    Setup s;
    s.channel = &channel;
    s.weights = weights.weights;
    s.exclusive.assign(channel.num_users(), 0);
    s.max_power = max_power;
    s.loading = 1;
    s.options = options;
    return run_iterative(s);
}

AllocationResult static_baseline(const ChannelGains& channel, const UserWeights& weights,
                                 std::span<const double> max_power, std::size_t spreading)
{
    check_inputs(channel, weights, max_power, spreading);
    const std::size_t k_users = channel.num_users();
    const std::size_t n_sub = channel.num_subcarriers();

    AllocationResult res;
    auto& st = res.state;
    st.assigned = Matrix<std::uint8_t>(k_users, n_sub, 0);
    st.power = Matrix<double>(k_users, n_sub, 0.0);
    st.committed = Matrix<double>(k_users, n_sub, 0.0);
    st.interference = Matrix<double>(k_users, n_sub, 0.0);
    st.allocated.assign(k_users, {});
    st.available.assign(k_users, {});
    st.candidates.assign(k_users, {});
    res.partitions.assign(k_users, su::Partition{});
    res.rates.assign(k_users, 0.0);

    const std::size_t share = std::max<std::size_t>(n_sub / k_users, 1);
    for (std::size_t k = 0; k < k_users; ++k) {
        const std::size_t first = k * share;
        if (first + share > n_sub) {
            continue;
        }
        auto& mine = st.allocated[k];
        for (std::size_t n = first; n < first + share; ++n) {
            mine.push_back(n);
        }
        const double each = max_power[k] / static_cast<double>(mine.size());
        std::vector<double> g(n_sub);
        for (std::size_t n = 0; n < n_sub; ++n) {
            g[n] = channel.normalized(k, n);
        }
        const auto groups = greedy_groups(mine, g, spreading);
        for (std::size_t n : mine) {
            st.assigned(k, n) = 1;
            st.power(k, n) = each;
            st.committed(k, n) = each;
        }
        std::vector<double> p;
        std::vector<double> gg;
        for (const auto& group : groups) {
            p.assign(group.size(), each);
            gg.clear();
            for (std::size_t n : group) {
                gg.push_back(g[n]);
            }
            res.rates[k] += su::symbol_rate(p, gg);
        }
        res.partitions[k].groups = groups;
        res.partitions[k].spreading = spreading;
    }
    for (std::size_t k = 0; k < k_users; ++k) {
        res.weighted_sum_rate += weights.weights[k] * res.rates[k];
    }
    return res;
}

} // namespace ldsma::mu
