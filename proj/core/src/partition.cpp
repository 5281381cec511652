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

#include "ldsma/partition.hpp"

#include "ldsma/power.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace ldsma::su {

namespace {

void canonicalize(Partition& p)
{
    for (auto& g : p.groups)
        std::sort(g.begin(), g.end());
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("count_lds_partitions: result exceeds 64 bits");
    return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // c * (n - k + i) is divisible by i; cancel first so the product stays small.
        const std::uint64_t g = std::gcd(c, i);
        c = checked_mul(c / g, (n - k + i) / (i / g));
    }
    return c;
}

} // namespace

void validate_partition(const Partition& partition, std::size_t num_indices)
{
    if (partition.spreading == 0)
        throw std::invalid_argument("partition spreading must be positive");
    std::vector<bool> seen(num_indices, false);
    std::size_t covered = 0;
    for (std::size_t m = 0; m < partition.groups.size(); ++m) {
        const auto& g = partition.groups[m];
        const bool last = m + 1 == partition.groups.size();
        if (g.empty())
            throw std::invalid_argument("partition contains an empty group");
        if (g.size() > partition.spreading || (!last && g.size() != partition.spreading))
            throw std::invalid_argument("partition group " + std::to_string(m) + " has size " +
                                        std::to_string(g.size()) + ", expected " +
                                        std::to_string(partition.spreading));
        for (auto n : g) {
            if (n >= num_indices)
                throw std::invalid_argument("partition index " + std::to_string(n) + " out of range");
            if (seen[n])
                throw std::invalid_argument("partition index " + std::to_string(n) + " appears twice");
            seen[n] = true;
            ++covered;
        }
    }
    if (covered != num_indices)
        throw std::invalid_argument("partition does not cover every index");
}

bool is_valid_partition(const Partition& partition, std::size_t num_indices) noexcept
{
    try {
        validate_partition(partition, num_indices);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::size_t> descending_order(std::span<const double> gains)
{
    std::vector<std::size_t> order(gains.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });
    return order;
}

Partition partition_greedy(std::span<const double> gains, std::size_t spreading)
{
    if (spreading == 0)
        throw std::invalid_argument("partition_greedy: spreading must be positive");
    const auto order = descending_order(gains);
    Partition p;
    p.spreading = spreading;
    for (std::size_t start = 0; start < order.size(); start += spreading) {
        const auto stop = std::min(order.size(), start + spreading);
        p.groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                              order.begin() + static_cast<std::ptrdiff_t>(stop));
    }
    canonicalize(p);
    return p;
}

Partition partition_lmv(std::span<const double> gains, std::size_t spreading)
{
    if (spreading != 2 && spreading != 3)
        throw std::invalid_argument("partition_lmv: only d_v = 2 or 3 is defined");
    const std::size_t n = gains.size();
    if (n == 0 || n % spreading != 0)
        throw std::invalid_argument("partition_lmv: subcarrier count must be a positive multiple of d_v");

    const auto pi = descending_order(gains); // pi[i] is the (i+1)-th best index
    const std::size_t groups = n / spreading;
    Partition p;
    p.spreading = spreading;
    for (std::size_t m = 1; m <= groups; ++m) {
        if (spreading == 2)
            p.groups.push_back({pi[m - 1], pi[n - m]});
        else
            p.groups.push_back({pi[m - 1], pi[n - 2 * m], pi[n - 2 * m + 1]});
    }
    canonicalize(p);
    return p;
}

Partition partition_random(std::span<const double> gains, std::size_t spreading, std::uint64_t seed)
{
    const std::size_t n = gains.size();
    if (spreading == 0 || n == 0 || n % spreading != 0)
        throw std::invalid_argument("partition_random: subcarrier count must be a positive multiple of d_v");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 engine(seed);
    std::shuffle(perm.begin(), perm.end(), engine);

    Partition p;
    p.spreading = spreading;
    for (std::size_t start = 0; start < n; start += spreading)
        p.groups.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                              perm.begin() + static_cast<std::ptrdiff_t>(start + spreading));
    canonicalize(p);
    std::sort(p.groups.begin(), p.groups.end());
    return p;
}

std::uint64_t count_lds_partitions(std::size_t n, std::size_t spreading)
{
    if (spreading == 0 || n == 0 || n % spreading != 0)
        throw std::invalid_argument("count_lds_partitions: n must be a positive multiple of d_v");
    // Anchor rule: the smallest remaining index picks d_v - 1 companions from the rest.
    std::uint64_t count = 1;
    for (std::size_t remaining = n; remaining > 0; remaining -= spreading)
        count = checked_mul(count, binomial(remaining - 1, spreading - 1));
    return count;
}

void for_each_partition(std::size_t n, std::size_t spreading, const std::function<void(const Partition&)>& visit)
{
    if (spreading == 0 || n == 0 || n % spreading != 0)
        throw std::invalid_argument("for_each_partition: n must be a positive multiple of d_v");

    Partition current;
    current.spreading = spreading;
    std::vector<bool> used(n, false);
    std::vector<std::size_t> group;

    // Fill `group` starting from its anchor, picking companions above `from`.
    std::function<void(std::size_t)> place_group;
    std::function<void()> next_group = [&]() {
        std::size_t anchor = 0;
        while (anchor < n && used[anchor])
            ++anchor;
        if (anchor == n) {
            visit(current);
            return;
        }
        used[anchor] = true;
        group.assign(1, anchor);
        place_group(anchor + 1);
        used[anchor] = false;
    };
    place_group = [&](std::size_t from) {
        if (group.size() == spreading) {
            current.groups.push_back(group);
            const auto saved = group;
            next_group();
            group = saved;
            current.groups.pop_back();
            return;
        }
        for (std::size_t i = from; i < n; ++i) {
            if (used[i])
                continue;
            used[i] = true;
            group.push_back(i);
            place_group(i + 1);
            group.pop_back();
            used[i] = false;
        }
    };
    next_group();
}

BruteForceResult partition_bruteforce(std::span<const double> gains, std::size_t spreading, double total_power,
                                      std::uint64_t cap)
{
    const std::size_t n = gains.size();
    if (spreading == 0 || n == 0 || n % spreading != 0)
        throw std::invalid_argument("partition_bruteforce: subcarrier count must be a positive multiple of d_v");
    std::uint64_t expected = 0;
    try {
        expected = count_lds_partitions(n, spreading);
    } catch (const std::overflow_error&) {
        throw std::length_error("partition_bruteforce: partition count exceeds the enumeration cap");
    }
    if (expected > cap)
        throw std::length_error("partition_bruteforce: " + std::to_string(expected) +
                                " partitions exceed the enumeration cap of " + std::to_string(cap));

    BruteForceResult best;
    best.rate = -1.0;
    for_each_partition(n, spreading, [&](const Partition& p) {
        ++best.candidates;
        const auto sg = symbol_gains(p, gains);
        const auto wf = waterfill(sg.values, total_power);
        double rate = 0.0;
        for (std::size_t m = 0; m < sg.values.size(); ++m)
            rate += std::log2(1.0 + wf.powers[m] * sg.values[m]);
        if (rate > best.rate) {
            best.rate = rate;
            best.partition = p;
        }
    });
    return best;
}

} // namespace ldsma::su
