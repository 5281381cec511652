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

#include "ldsma/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ldsma::cli {

// Per-trial schema shared by the multiuser and sweep commands.
std::string trial_csv_header();
std::string trial_csv_row(const harness::SweepPoint& point, const harness::TrialMetrics& trial);

std::string summary_csv_header();
std::string summary_csv_row(harness::SweepParameter parameter, const harness::PointSummary& summary);

// JSON document with one entry per sweep point.
std::string summary_json(harness::SweepParameter parameter, const std::vector<harness::PointSummary>& points);

// Line-oriented output to a file or, for "-", standard output. With append set the
// header is only written into an empty or new file.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::string header, bool append);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void write_line(std::string_view line);
    // Throws std::runtime_error when any write failed.
    void close();

private:
    std::FILE* file_ = nullptr;
    bool owned_ = false;
    std::string path_;
};

void write_text_file(const std::filesystem::path& path, std::string_view text);

struct ManifestInfo {
    std::string command;
    harness::ExperimentSpec spec;
    std::vector<std::pair<std::string, std::string>> outputs;
    std::string timestamp;
};

std::string utc_timestamp();
std::string manifest_json(const ManifestInfo& info);
// Rebuilds the experiment recorded in a manifest; std::runtime_error on malformed input.
harness::ExperimentSpec spec_from_manifest(std::string_view text, std::string_view source = "<manifest>");

} // namespace ldsma::cli
