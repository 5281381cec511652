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

#include "ldsma/mu_alloc.hpp"
#include "ldsma/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ldsma::harness {

enum class Algorithm { mumrt, muwf, static_alloc, ofdma, macref };

std::string_view to_string(Algorithm a) noexcept;
// Throws std::invalid_argument listing the valid names.
Algorithm parse_algorithm(std::string_view text);
// Only the two iterative algorithms and the OFDMA stand-in take a selection criterion.
bool uses_criterion(Algorithm a) noexcept;

struct AlgorithmSelector {
    Algorithm algorithm = Algorithm::mumrt;
    mu::Criterion criterion = mu::Criterion::sa1;

    // "mumrt-sa1", "static", ...
    std::string label() const;
    bool operator==(const AlgorithmSelector&) const = default;
};

// Users with a rate below this count as being in outage.
inline constexpr double kOutageRate = 1e-9;

struct TrialMetrics {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    double spectral_efficiency = 0.0; // sum of user rates / N, bits/s/Hz
    double outage_fraction = 0.0;
    double weighted_sum_rate = 0.0;
    std::size_t iterations = 0;
    std::vector<double> rates;
    // False when the reference allocator did not converge.
    bool valid = true;
};

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index);

// One scenario drawn from (config.rng_seed, trial_index), grouped into min(K, d_c)
// weight groups and allocated with the selected algorithm.
TrialMetrics run_trial(const SystemConfig& config, const AlgorithmSelector& selector, std::size_t trial_index,
                       const ChannelOptions& channel = {});

// Trials 0..count-1 on up to `threads` workers; results are ordered by index and
// do not depend on the thread count.
std::vector<TrialMetrics> run_trials(const SystemConfig& config, const AlgorithmSelector& selector,
                                     std::size_t count, std::size_t threads = 1, const ChannelOptions& channel = {});

enum class SweepParameter { none, users, loading, spreading, algorithm, criterion };

std::string_view to_string(SweepParameter p) noexcept;
SweepParameter parse_sweep_parameter(std::string_view text);

struct ExperimentSpec {
    SystemConfig base;
    AlgorithmSelector selector;
    SweepParameter parameter = SweepParameter::none;
    std::vector<std::string> values;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    std::size_t threads = 1;
    ChannelOptions channel{};
};

struct SweepPoint {
    std::string value;
    SystemConfig config;
    AlgorithmSelector selector;
};

// Resolved configuration of every sweep point. Throws std::invalid_argument on an
// empty or malformed value list.
std::vector<SweepPoint> expand_points(const ExperimentSpec& spec);

struct Statistic {
    double mean = 0.0;
    std::optional<double> half_width; // 95% normal approximation, absent for one sample
    std::size_t count = 0;
};

Statistic summarize(const std::vector<double>& samples);

struct PointSummary {
    SweepPoint point;
    std::size_t trials = 0;
    std::size_t invalid = 0;
    Statistic spectral_efficiency;
    Statistic outage;
    Statistic weighted_sum_rate;
};

// Aggregates over valid trials only.
PointSummary summarize_point(const SweepPoint& point, const std::vector<TrialMetrics>& trials);

struct ExperimentResult {
    std::vector<PointSummary> points;
    std::vector<std::vector<TrialMetrics>> trials; // per point, by trial index
};

// Every point reuses the same trial seeds so that points are compared on paired draws.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<void(const SweepPoint&, std::size_t)>& on_point = {});

} // namespace ldsma::harness
