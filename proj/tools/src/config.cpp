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

#include "ldsma/cli/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace ldsma::cli {

ConfigError::ConfigError(std::string source, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("{}:{}: {}", source, line, message)
                                  : fmt::format("{}: {}", source, message)),
      source_(std::move(source)), line_(line)
{
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

class Reader {
public:
    Reader(std::string source, std::map<std::string, Entry> entries)
        : source_(std::move(source)), entries_(std::move(entries))
    {
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const
    {
        const auto it = entries_.find(key);
        throw ConfigError(source_, it == entries_.end() ? 0 : it->second.line, message);
    }

    template <class T>
    void integer(const std::string& key, T& out) const
    {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            return;
        const std::string& v = it->second.value;
        T parsed{};
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
        if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
            fail(key, fmt::format("'{}' expects a non-negative integer, got '{}'", key, v));
        out = parsed;
    }

    void real(const std::string& key, double& out) const
    {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            return;
        const std::string& v = it->second.value;
        if (v == "-inf") {
            out = -std::numeric_limits<double>::infinity();
            return;
        }
        double parsed = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
        if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty() || !std::isfinite(parsed))
            fail(key, fmt::format("'{}' expects a number, got '{}'", key, v));
        out = parsed;
    }

    const std::string* text(const std::string& key) const
    {
        const auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second.value;
    }

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = {
        "version",   "users",     "subcarriers", "bandwidth_hz", "max_power_dbm", "noise_psd_dbm_hz",
        "cell_inradius_m", "loading", "spreading", "algorithm", "criterion", "sweep",
        "values",    "trials",    "seed",        "threads",      "channel_profile"};
    return keys;
}

std::vector<std::string> split_values(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                   : comma - start));
        if (!piece.empty())
            out.emplace_back(piece);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

bool same_profile(const PowerDelayProfile& a, const PowerDelayProfile& b)
{
    return a.delays_s == b.delays_s && a.powers_db == b.powers_db;
}

} // namespace

ChannelOptions parse_channel_profile(std::string_view name)
{
    ChannelOptions options;
    if (name == "ped_b")
        options.profile = PowerDelayProfile::ped_b();
    else if (name == "flat")
        options.profile = PowerDelayProfile::single_tap();
    else
        throw std::invalid_argument(fmt::format("unknown channel profile '{}' (valid: ped_b, flat)", name));
    return options;
}

std::string_view channel_profile_name(const ChannelOptions& options)
{
    if (same_profile(options.profile, PowerDelayProfile::single_tap()))
        return "flat";
    if (same_profile(options.profile, PowerDelayProfile::ped_b()))
        return "ped_b";
    return "custom";
}

harness::ExperimentSpec parse_experiment_config(std::string_view text, std::string_view source_name)
{
    const std::string source(source_name);
    std::map<std::string, Entry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(source, line_no, fmt::format("expected 'key = value', got '{}'", line));
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(source, line_no, "missing key before '='");
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(source, line_no, fmt::format("unknown key '{}'", key));
        if (const auto it = entries.find(key); it != entries.end())
            throw ConfigError(source, line_no,
                              fmt::format("duplicate key '{}' (first set on line {})", key, it->second.line));
        entries.emplace(key, Entry{value, line_no});
    }

    const Reader r(source, std::move(entries));
    if (!r.has("version"))
        throw ConfigError(source, 0, "missing required key 'version'");
    int version = 0;
    r.integer("version", version);
    if (version != kExperimentFormatVersion)
        r.fail("version", fmt::format("unsupported version {} (expected {})", version, kExperimentFormatVersion));

    harness::ExperimentSpec spec;
    auto& c = spec.base;
    r.integer("users", c.num_users);
    r.integer("subcarriers", c.num_subcarriers);
    r.real("bandwidth_hz", c.bandwidth_hz);
    r.real("max_power_dbm", c.max_power_dbm);
    r.real("noise_psd_dbm_hz", c.noise_psd_dbm_hz);
    r.real("cell_inradius_m", c.cell_inradius_m);
    r.integer("loading", c.loading);
    r.integer("spreading", c.spreading);
    r.integer("trials", spec.trials);
    r.integer("threads", spec.threads);

    if (!r.has("seed"))
        throw ConfigError(source, 0, "missing required key 'seed'");
    r.integer("seed", spec.master_seed);
    c.rng_seed = spec.master_seed;

    try {
        if (const auto* v = r.text("algorithm"))
            spec.selector.algorithm = harness::parse_algorithm(*v);
    } catch (const std::invalid_argument& e) {
        r.fail("algorithm", e.what());
    }
    try {
        if (const auto* v = r.text("sweep"))
            spec.parameter = harness::parse_sweep_parameter(*v);
    } catch (const std::invalid_argument& e) {
        r.fail("sweep", e.what());
    }
    if (const auto* v = r.text("criterion")) {
        try {
            spec.selector.criterion = mu::parse_criterion(*v);
        } catch (const std::invalid_argument& e) {
            r.fail("criterion", e.what());
        }
        if (spec.parameter != harness::SweepParameter::algorithm &&
            !harness::uses_criterion(spec.selector.algorithm))
            r.fail("criterion", fmt::format("algorithm '{}' takes no criterion",
                                            harness::to_string(spec.selector.algorithm)));
    }
    if (const auto* v = r.text("channel_profile")) {
        try {
            spec.channel = parse_channel_profile(*v);
        } catch (const std::invalid_argument& e) {
            r.fail("channel_profile", e.what());
        }
    }

    if (const auto* v = r.text("values"))
        spec.values = split_values(*v);
    if (spec.parameter != harness::SweepParameter::none && spec.values.empty()) {
        if (r.has("values"))
            r.fail("values", "sweep value list is empty");
        r.fail("sweep", fmt::format("sweep over '{}' needs a 'values' list", harness::to_string(spec.parameter)));
    }
    if (spec.parameter == harness::SweepParameter::none && !spec.values.empty())
        r.fail("values", "'values' given without 'sweep'");
    if (spec.trials < 1)
        r.fail("trials", "'trials' must be at least 1");
    if (spec.threads < 1)
        r.fail("threads", "'threads' must be at least 1");

    try {
        harness::expand_points(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source, 0, e.what());
    }
    return spec;
}

harness::ExperimentSpec read_experiment_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path.string(), 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str(), path.string());
}

std::string format_experiment_config(const harness::ExperimentSpec& spec)
{
    const auto& c = spec.base;
    std::string values;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        if (i > 0)
            values += ", ";
        values += spec.values[i];
    }
    std::string out;
    out += fmt::format("version = {}\n", kExperimentFormatVersion);
    out += fmt::format("algorithm = {}\n", harness::to_string(spec.selector.algorithm));
    if (harness::uses_criterion(spec.selector.algorithm) || spec.parameter == harness::SweepParameter::algorithm)
        out += fmt::format("criterion = {}\n", mu::to_string(spec.selector.criterion));
    out += fmt::format("users = {}\n", c.num_users);
    out += fmt::format("subcarriers = {}\n", c.num_subcarriers);
    out += fmt::format("loading = {}\n", c.loading);
    out += fmt::format("spreading = {}\n", c.spreading);
    out += fmt::format("bandwidth_hz = {}\n", c.bandwidth_hz);
    out += fmt::format("max_power_dbm = {}\n", c.max_power_dbm);
    out += fmt::format("noise_psd_dbm_hz = {}\n", c.noise_psd_dbm_hz);
    out += fmt::format("cell_inradius_m = {}\n", c.cell_inradius_m);
    out += fmt::format("channel_profile = {}\n", channel_profile_name(spec.channel));
    if (spec.parameter != harness::SweepParameter::none) {
        out += fmt::format("sweep = {}\n", harness::to_string(spec.parameter));
        out += fmt::format("values = {}\n", values);
    }
    out += fmt::format("trials = {}\n", spec.trials);
    out += fmt::format("seed = {}\n", spec.master_seed);
    out += fmt::format("threads = {}\n", spec.threads);
    return out;
}

} // namespace ldsma::cli
