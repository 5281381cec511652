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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ldsma::su {

// Grouping of subcarrier indices into spreading groups, one group per symbol.
// Canonical form: indices ascending inside each group.
struct Partition {
    std::vector<std::vector<std::size_t>> groups;
    std::size_t spreading = 1;

    std::size_t num_groups() const noexcept { return groups.size(); }
    bool operator==(const Partition&) const = default;
};

// Throws std::invalid_argument unless the groups are disjoint, cover 0..num_indices-1,
// and all have size `spreading` except possibly a smaller last group.
void validate_partition(const Partition& partition, std::size_t num_indices);
bool is_valid_partition(const Partition& partition, std::size_t num_indices) noexcept;

// Indices sorted by descending gain; ties keep ascending index.
std::vector<std::size_t> descending_order(std::span<const double> gains);

// Best d_v gains form the first symbol, the next d_v the second, and so on.
// When the count is not a multiple of d_v the last group holds the remainder.
Partition partition_greedy(std::span<const double> gains, std::size_t spreading);

// Pairs best with worst subcarriers. d_v must be 2 or 3 and divide the count.
Partition partition_lmv(std::span<const double> gains, std::size_t spreading);

// Uniformly random partition into groups of size d_v, deterministic per seed.
Partition partition_random(std::span<const double> gains, std::size_t spreading, std::uint64_t seed);

inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

// Unordered partitions of {0..n-1} into blocks of `spreading`; n must be divisible by it.
// Overflow is reported with std::overflow_error.
std::uint64_t count_lds_partitions(std::size_t n, std::size_t spreading);

// Visits every partition exactly once. The smallest unplaced index anchors the next
// group and companions are chosen in lexicographic order, so visits are in
// lexicographic order of the group lists.
void for_each_partition(std::size_t n, std::size_t spreading, const std::function<void(const Partition&)>& visit);

struct BruteForceResult {
    Partition partition;
    double rate = 0.0;
    std::uint64_t candidates = 0;
};

// Exhaustive MRT-WF search; ties resolve to the lexicographically smallest grouping.
// Throws std::length_error when more than `cap` partitions exist.
BruteForceResult partition_bruteforce(std::span<const double> gains, std::size_t spreading, double total_power,
                                      std::uint64_t cap = kEnumerationCap);

} // namespace ldsma::su
