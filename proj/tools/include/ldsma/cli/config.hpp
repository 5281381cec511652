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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ldsma::cli {

inline constexpr int kExperimentFormatVersion = 1;

// Parse failure with the offending source location in what().
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::size_t line, const std::string& message);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

// Flat "key = value" experiment description. '#' starts a comment. The file must
// carry "version = 1"; duplicate and unknown keys are rejected.
//
//   version   = 1
//   algorithm = mumrt
//   criterion = sa1
//   sweep     = users
//   values    = 10, 20, 30
//   trials    = 500
//   seed      = 42
harness::ExperimentSpec parse_experiment_config(std::string_view text, std::string_view source = "<config>");
harness::ExperimentSpec read_experiment_config(const std::filesystem::path& path);

// Inverse of parse_experiment_config; every key is written explicitly.
std::string format_experiment_config(const harness::ExperimentSpec& spec);

// "ped_b" or "flat".
ChannelOptions parse_channel_profile(std::string_view name);
std::string_view channel_profile_name(const ChannelOptions& options);

} // namespace ldsma::cli
