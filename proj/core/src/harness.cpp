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

#include "ldsma/harness.hpp"

#include "ldsma/mac_ref.hpp"
#include "ldsma/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ldsma::harness {

namespace {

std::string lowercase(std::string_view text)
{
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::size_t parse_count(const std::string& text, const char* what)
{
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw std::invalid_argument(std::string("invalid ") + what + " value '" + text + "'");
    return value;
}

} // namespace

std::string_view to_string(Algorithm a) noexcept
{
    switch (a) {
    case Algorithm::mumrt:
        return "mumrt";
    case Algorithm::muwf:
        return "muwf";
    case Algorithm::static_alloc:
        return "static";
    case Algorithm::ofdma:
        return "ofdma";
    case Algorithm::macref:
        return "macref";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view text)
{
    const auto s = lowercase(text);
    for (auto a : {Algorithm::mumrt, Algorithm::muwf, Algorithm::static_alloc, Algorithm::ofdma, Algorithm::macref}) {
        if (s == to_string(a))
            return a;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(text) +
                                "' (valid: mumrt, muwf, static, ofdma, macref)");
}

bool uses_criterion(Algorithm a) noexcept
{
    return a == Algorithm::mumrt || a == Algorithm::muwf || a == Algorithm::ofdma;
}

std::string AlgorithmSelector::label() const
{
    std::string out(to_string(algorithm));
    if (uses_criterion(algorithm)) {
        out += '-';
        out += mu::to_string(criterion);
    }
    return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index)
{
    return rng::derive_seed(master_seed, rng::Stream::trial, trial_index);
}

TrialMetrics run_trial(const SystemConfig& config, const AlgorithmSelector& selector, std::size_t trial_index,
                       const ChannelOptions& channel)
{
    config.validate();
    SystemConfig trial = config;
    trial.rng_seed = trial_seed(config.rng_seed, trial_index);
    const auto scenario = make_scenario(trial, channel);
    const auto weights = mac::group_users(scenario.users, std::min(config.num_users, config.loading));
    const std::vector<double> budgets(config.num_users, config.max_power_w());

    TrialMetrics m;
    m.trial_index = trial_index;
    m.seed = trial.rng_seed;
    m.algorithm = selector.label();

    mu::AllocatorOptions options;
    options.criterion = selector.criterion;
    switch (selector.algorithm) {
    case Algorithm::mumrt: {
        const auto r = mu::mumrt(scenario.channel, weights, budgets, config.loading, config.spreading, options);
        m.rates = r.rates;
        m.weighted_sum_rate = r.weighted_sum_rate;
        m.iterations = r.iterations;
        break;
    }
    case Algorithm::muwf: {
        const auto r = mu::muwf(scenario.channel, weights, budgets, config.loading, config.spreading, options);
        m.rates = r.rates;
        m.weighted_sum_rate = r.weighted_sum_rate;
        m.iterations = r.iterations;
        break;
    }
    case Algorithm::static_alloc: {
        const auto r = mu::static_baseline(scenario.channel, weights, budgets, config.spreading);
        m.rates = r.rates;
        m.weighted_sum_rate = r.weighted_sum_rate;
        break;
    }
    case Algorithm::ofdma: {
        const auto r = mu::ofdma_baseline(scenario.channel, weights, budgets, options);
        m.rates = r.rates;
        m.weighted_sum_rate = r.weighted_sum_rate;
        m.iterations = r.iterations;
        break;
    }
    case Algorithm::macref: {
        const auto r = mac::solve_mac(scenario.channel, weights, budgets);
        m.rates = r.rates;
        m.weighted_sum_rate = r.weighted_sum_rate;
        m.iterations = r.sweeps;
        m.valid = r.converged;
        break;
    }
    }

    double total = 0.0;
    std::size_t zero = 0;
    for (double r : m.rates) {
        total += r;
        if (r < kOutageRate)
            ++zero;
    }
    m.spectral_efficiency = total / static_cast<double>(config.num_subcarriers);
    m.outage_fraction = static_cast<double>(zero) / static_cast<double>(config.num_users);
    return m;
}

std::vector<TrialMetrics> run_trials(const SystemConfig& config, const AlgorithmSelector& selector,
                                     std::size_t count, std::size_t threads, const ChannelOptions& channel)
{
    std::vector<TrialMetrics> out(count);
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = run_trial(config, selector, i, channel);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    out[i] = run_trial(config, selector, i, channel);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

std::string_view to_string(SweepParameter p) noexcept
{
    switch (p) {
    case SweepParameter::none:
        return "none";
    case SweepParameter::users:
        return "users";
    case SweepParameter::loading:
        return "loading";
    case SweepParameter::spreading:
        return "spreading";
    case SweepParameter::algorithm:
        return "algorithm";
    case SweepParameter::criterion:
        return "criterion";
    }
    return "unknown";
}

SweepParameter parse_sweep_parameter(std::string_view text)
{
    const auto s = lowercase(text);
    for (auto p : {SweepParameter::none, SweepParameter::users, SweepParameter::loading, SweepParameter::spreading,
                   SweepParameter::algorithm, SweepParameter::criterion}) {
        if (s == to_string(p))
            return p;
    }
    throw std::invalid_argument("unknown sweep parameter '" + std::string(text) +
                                "' (valid: none, users, loading, spreading, algorithm, criterion)");
}

std::vector<SweepPoint> expand_points(const ExperimentSpec& spec)
{
    if (spec.trials < 1)
        throw std::invalid_argument("an experiment needs at least one trial");
    spec.base.validate();

    std::vector<SweepPoint> points;
    if (spec.parameter == SweepParameter::none) {
        if (!spec.values.empty())
            throw std::invalid_argument("sweep values given without a sweep parameter");
        points.push_back({"", spec.base, spec.selector});
        points.front().config.rng_seed = spec.master_seed;
        return points;
    }
    if (spec.values.empty())
        throw std::invalid_argument("sweep over " + std::string(to_string(spec.parameter)) + " has no values");

    for (const auto& v : spec.values) {
        SweepPoint p{v, spec.base, spec.selector};
        p.config.rng_seed = spec.master_seed;
        switch (spec.parameter) {
        case SweepParameter::users:
            p.config.num_users = parse_count(v, "users");
            break;
        case SweepParameter::loading:
            p.config.loading = parse_count(v, "loading");
            break;
        case SweepParameter::spreading:
            p.config.spreading = parse_count(v, "spreading");
            break;
        case SweepParameter::algorithm:
            p.selector.algorithm = parse_algorithm(v);
            break;
        case SweepParameter::criterion:
            if (!uses_criterion(p.selector.algorithm))
                throw std::invalid_argument("criterion sweep requires mumrt, muwf or ofdma");
            p.selector.criterion = mu::parse_criterion(v);
            break;
        case SweepParameter::none:
            break;
        }
        p.config.validate();
        if (p.selector.algorithm == Algorithm::mumrt && p.config.num_subcarriers % p.config.spreading != 0)
            throw std::invalid_argument("mumrt needs N divisible by d_v at sweep value '" + v + "'");
        points.push_back(std::move(p));
    }
    return points;
}

Statistic summarize(const std::vector<double>& samples)
{
    Statistic s;
    s.count = samples.size();
    if (samples.empty())
        return s;
    double sum = 0.0;
    for (double x : samples)
        sum += x;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double x : samples)
            ss += (x - s.mean) * (x - s.mean);
        const double sd = std::sqrt(ss / static_cast<double>(s.count - 1));
        s.half_width = 1.96 * sd / std::sqrt(static_cast<double>(s.count));
    }
    return s;
}

PointSummary summarize_point(const SweepPoint& point, const std::vector<TrialMetrics>& trials)
{
    PointSummary out;
    out.point = point;
    out.trials = trials.size();
    std::vector<double> se;
    std::vector<double> outage;
    std::vector<double> wsr;
    for (const auto& t : trials) {
        if (!t.valid) {
            ++out.invalid;
            continue;
        }
        se.push_back(t.spectral_efficiency);
        outage.push_back(t.outage_fraction);
        wsr.push_back(t.weighted_sum_rate);
    }
    out.spectral_efficiency = summarize(se);
    out.outage = summarize(outage);
    out.weighted_sum_rate = summarize(wsr);
    return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<void(const SweepPoint&, std::size_t)>& on_point)
{
    const auto points = expand_points(spec);
    ExperimentResult out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (on_point)
            on_point(points[i], i);
        auto trials = run_trials(points[i].config, points[i].selector, spec.trials, spec.threads, spec.channel);
        out.points.push_back(summarize_point(points[i], trials));
        out.trials.push_back(std::move(trials));
    }
    return out;
}

} // namespace ldsma::harness
