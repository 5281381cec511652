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

#include "ldsma/cli/output.hpp"

#include "ldsma/cli/config.hpp"
#include "ldsma/version.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace ldsma::cli {

namespace {

using nlohmann::json;

constexpr std::string_view kOfdmaNote = "orthogonal stand-in baseline; qualitative comparison only";

std::string criterion_field(const harness::AlgorithmSelector& s)
{
    return harness::uses_criterion(s.algorithm) ? std::string(mu::to_string(s.criterion)) : std::string("none");
}

std::string optional_field(const std::optional<double>& v)
{
    return v ? fmt::format("{}", *v) : std::string();
}

json statistic_json(const harness::Statistic& s)
{
    json j;
    j["mean"] = s.mean;
    j["ci95_half_width"] = s.half_width ? json(*s.half_width) : json(nullptr);
    j["count"] = s.count;
    return j;
}

} // namespace

std::string trial_csv_header()
{
    return "trial_id,algorithm,criterion,K,N,d_c,d_v,seed,spectral_efficiency_bps_hz,outage_fraction,"
           "weighted_sum_rate,iterations";
}

std::string trial_csv_row(const harness::SweepPoint& point, const harness::TrialMetrics& t)
{
    const auto& c = point.config;
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", t.trial_index, harness::to_string(point.selector.algorithm),
                       criterion_field(point.selector), c.num_users, c.num_subcarriers, c.loading, c.spreading, t.seed,
                       t.spectral_efficiency, t.outage_fraction, t.weighted_sum_rate, t.iterations);
}

std::string summary_csv_header()
{
    return "parameter,value,algorithm,criterion,K,N,d_c,d_v,trials,invalid,mean_se_bps_hz,se_ci95,"
           "mean_outage,outage_ci95,mean_weighted_sum_rate,wsr_ci95";
}

std::string summary_csv_row(harness::SweepParameter parameter, const harness::PointSummary& s)
{
    const auto& c = s.point.config;
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", harness::to_string(parameter),
                       s.point.value, harness::to_string(s.point.selector.algorithm), criterion_field(s.point.selector),
                       c.num_users, c.num_subcarriers, c.loading, c.spreading, s.trials, s.invalid,
                       s.spectral_efficiency.mean, optional_field(s.spectral_efficiency.half_width), s.outage.mean,
                       optional_field(s.outage.half_width), s.weighted_sum_rate.mean,
                       optional_field(s.weighted_sum_rate.half_width));
}

std::string summary_json(harness::SweepParameter parameter, const std::vector<harness::PointSummary>& points)
{
    json doc;
    doc["parameter"] = std::string(harness::to_string(parameter));
    doc["points"] = json::array();
    for (const auto& s : points) {
        const auto& c = s.point.config;
        json p;
        p["value"] = s.point.value;
        p["algorithm"] = std::string(harness::to_string(s.point.selector.algorithm));
        p["criterion"] = criterion_field(s.point.selector);
        p["K"] = c.num_users;
        p["N"] = c.num_subcarriers;
        p["d_c"] = c.loading;
        p["d_v"] = c.spreading;
        p["trials"] = s.trials;
        p["invalid"] = s.invalid;
        p["spectral_efficiency_bps_hz"] = statistic_json(s.spectral_efficiency);
        p["outage_fraction"] = statistic_json(s.outage);
        p["weighted_sum_rate"] = statistic_json(s.weighted_sum_rate);
        if (s.point.selector.algorithm == harness::Algorithm::ofdma)
            p["note"] = std::string(kOfdmaNote);
        doc["points"].push_back(std::move(p));
    }
    return doc.dump(2) + "\n";
}

CsvWriter::CsvWriter(const std::string& path, std::string header, bool append) : path_(path)
{
    if (path == "-") {
        file_ = stdout;
    } else {
        file_ = std::fopen(path.c_str(), append ? "ab" : "wb");
        if (!file_)
            throw std::runtime_error(fmt::format("cannot open '{}': {}", path, std::strerror(errno)));
        owned_ = true;
    }
    bool need_header = true;
    if (append && owned_) {
        std::fseek(file_, 0, SEEK_END);
        need_header = std::ftell(file_) == 0;
    }
    if (need_header)
        write_line(header);
}

CsvWriter::~CsvWriter()
{
    if (owned_ && file_)
        std::fclose(file_);
}

void CsvWriter::write_line(std::string_view line)
{
    std::fwrite(line.data(), 1, line.size(), file_);
    std::fputc('\n', file_);
}

void CsvWriter::close()
{
    if (!file_)
        return;
    const bool failed = std::ferror(file_) != 0 || std::fflush(file_) != 0;
    if (owned_)
        std::fclose(file_);
    file_ = nullptr;
    if (failed)
        throw std::runtime_error(fmt::format("write to '{}' failed", path_));
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out)
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec);
}

std::string manifest_json(const ManifestInfo& info)
{
    json doc;
    doc["tool"] = "ldsma";
    doc["version"] = std::string(kVersion);
    doc["command"] = info.command;
    doc["timestamp"] = info.timestamp;
    doc["master_seed"] = info.spec.master_seed;

    // The experiment is stored as its config entries so that loading goes through
    // the same validation as a config file.
    json experiment = json::object();
    const auto text = format_experiment_config(info.spec);
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        const auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        const auto eq = line.find(" = ");
        experiment[line.substr(0, eq)] = line.substr(eq + 3);
    }
    doc["experiment"] = std::move(experiment);

    json outputs = json::object();
    for (const auto& [name, path] : info.outputs)
        outputs[name] = path;
    doc["outputs"] = std::move(outputs);
    return doc.dump(2) + "\n";
}

harness::ExperimentSpec spec_from_manifest(std::string_view text, std::string_view source)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(source), 0, fmt::format("invalid JSON: {}", e.what()));
    }
    if (!doc.is_object() || !doc.contains("experiment") || !doc["experiment"].is_object())
        throw ConfigError(std::string(source), 0, "manifest has no 'experiment' object");
    std::string config;
    for (const auto& [key, value] : doc["experiment"].items()) {
        if (!value.is_string())
            throw ConfigError(std::string(source), 0, fmt::format("experiment entry '{}' is not a string", key));
        config += key + " = " + value.get<std::string>() + "\n";
    }
    return parse_experiment_config(config, source);
}

} // namespace ldsma::cli
