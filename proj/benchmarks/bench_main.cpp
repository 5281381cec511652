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
#include "ldsma/mu_alloc.hpp"
#include "ldsma/partition.hpp"
#include "ldsma/power.hpp"
#include "ldsma/scenario.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace ldsma;

namespace {

std::vector<double> gains(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> g(n);
    for (auto& x : g)
        x = e(rng) + 1e-6;
    return g;
}

struct Drop {
    SystemConfig config;
    Scenario scenario;
    mac::UserWeights weights;
    std::vector<double> budgets;
};

Drop drop(std::size_t users, std::size_t subcarriers, std::size_t loading)
{
    Drop d;
    d.config.num_users = users;
    d.config.num_subcarriers = subcarriers;
    d.config.loading = loading;
    d.config.rng_seed = 17;
    d.scenario = make_scenario(d.config);
    d.weights = mac::group_users(d.scenario.users, std::min(users, loading));
    d.budgets.assign(users, d.config.max_power_w());
    return d;
}

void BM_Waterfill(benchmark::State& state)
{
    const auto g = gains(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(su::waterfill(g, 4.0));
}
BENCHMARK(BM_Waterfill)->Arg(8)->Arg(64)->Arg(512);

void BM_GreedyMrtWf(benchmark::State& state)
{
    const auto g = gains(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(su::mrt_wf(su::partition_greedy(g, 2), g, 4.0));
}
BENCHMARK(BM_GreedyMrtWf)->Arg(8)->Arg(32)->Arg(256);

void BM_BruteForce(benchmark::State& state)
{
    const auto g = gains(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(su::partition_bruteforce(g, 2, 1.0));
}
BENCHMARK(BM_BruteForce)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Mumrt(benchmark::State& state)
{
    const auto d = drop(static_cast<std::size_t>(state.range(0)), 30, 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(mu::mumrt(d.scenario.channel, d.weights, d.budgets, 6, 2));
}
BENCHMARK(BM_Mumrt)->Arg(10)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Muwf(benchmark::State& state)
{
    const auto d = drop(static_cast<std::size_t>(state.range(0)), 30, 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(mu::muwf(d.scenario.channel, d.weights, d.budgets, 6, 2));
}
BENCHMARK(BM_Muwf)->Arg(10)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_SolveMac(benchmark::State& state)
{
    const auto d = drop(static_cast<std::size_t>(state.range(0)), 16, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(mac::solve_mac(d.scenario.channel, d.weights, d.budgets));
}
BENCHMARK(BM_SolveMac)->Arg(3)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
