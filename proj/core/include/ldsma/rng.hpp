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

#include <cstdint>
#include <random>

namespace ldsma::rng {

using Engine = std::mt19937_64;

// Stream tags keep independent consumers of one master seed apart.
enum class Stream : std::uint64_t {
    position = 0x706f73,
    fading = 0x666164,
    trial = 0x747269,
    partition = 0x707274,
    single_user = 0x73756e,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Splitting rule: child = splitmix64(splitmix64(parent ^ splitmix64(stream)) + index).
// A child depends only on (parent, stream, index), so adding users or trials
// never shifts the draws of existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t parent, Stream stream, std::uint64_t index) noexcept
{
    const std::uint64_t base = splitmix64(parent ^ splitmix64(static_cast<std::uint64_t>(stream)));
    return splitmix64(base + index);
}

inline Engine make_engine(std::uint64_t parent, Stream stream, std::uint64_t index)
{
    return Engine{derive_seed(parent, stream, index)};
}

} // namespace ldsma::rng
