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
#include <span>
#include <vector>

namespace ldsma::su {

// x majorizes y: sorted descending, every prefix sum of x dominates that of y and the
// totals agree within 1e-9 relative.
bool majorizes(std::span<const double> x, std::span<const double> y);

// S_0 .. S_M of the values.
std::vector<double> elementary_symmetric(std::span<const double> values);

// True when water-filling over these symbol gains leaves every symbol active.
bool all_symbols_active(std::span<const double> symbol_gains, double total_power);

// User rate written through elementary symmetric polynomials:
//   M log2((S_M P + S_{M-1}) / (M S_M)) + log2(S_M).
// Only valid when every symbol is active; throws std::domain_error otherwise.
double rate_via_esp(std::span<const double> symbol_gains, double total_power);

// M^3 - M^2 - M. Throws std::domain_error for M < 2.
double schur_power_bound(std::size_t symbols);

} // namespace ldsma::su
