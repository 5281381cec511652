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

#include "ldsma/majorization.hpp"

#include "ldsma/power.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ldsma::su {

bool majorizes(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("majorizes: vectors differ in length");
    std::vector<double> xs(x.begin(), x.end());
    std::vector<double> ys(y.begin(), y.end());
    std::sort(xs.begin(), xs.end(), std::greater<>());
    std::sort(ys.begin(), ys.end(), std::greater<>());

    double scale = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        scale = std::max({scale, std::abs(xs[i]), std::abs(ys[i])});
    const double slack = 1e-12 * scale * static_cast<double>(std::max<std::size_t>(1, xs.size()));

    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        if (i + 1 < xs.size() && sx < sy - slack)
            return false;
    }
    const double total = std::max(std::abs(sx), std::abs(sy));
    return std::abs(sx - sy) <= 1e-9 * total;
}

std::vector<double> elementary_symmetric(std::span<const double> values)
{
    // S[i] after processing j values = sum of products of i-subsets of the first j.
    std::vector<double> s(values.size() + 1, 0.0);
    s[0] = 1.0;
    for (std::size_t j = 0; j < values.size(); ++j)
        for (std::size_t i = j + 1; i >= 1; --i)
            s[i] += values[j] * s[i - 1];
    return s;
}

bool all_symbols_active(std::span<const double> symbol_gains, double total_power)
{
    if (symbol_gains.empty() || !(total_power > 0.0))
        return false;
    const auto wf = waterfill(symbol_gains, total_power);
    return wf.active == symbol_gains.size();
}

double rate_via_esp(std::span<const double> symbol_gains, double total_power)
{
    if (!all_symbols_active(symbol_gains, total_power))
        throw std::domain_error("rate_via_esp: water-filling would leave a symbol inactive");
    const auto s = elementary_symmetric(symbol_gains);
    const auto m = static_cast<double>(symbol_gains.size());
    const double s_m = s[symbol_gains.size()];
    const double s_m1 = s[symbol_gains.size() - 1];
    return m * std::log2((s_m * total_power + s_m1) / (m * s_m)) + std::log2(s_m);
}

double schur_power_bound(std::size_t symbols)
{
    if (symbols < 2)
        throw std::domain_error("schur_power_bound: needs at least two symbols");
    const auto m = static_cast<double>(symbols);
    return m * m * m - m * m - m;
}

} // namespace ldsma::su
