/********************************************************************************
* Copyright 2026 The gspto Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/

#pragma once

#include "gspto/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace gspto {

struct Aggregate
{
    double mean = 0.0;
    double stddev = 0.0; ///< sample standard deviation, n - 1 denominator
    std::size_t count = 0;
};

/// Mean and sample standard deviation, accumulated left to right so that a
/// reparsed copy of the same values reproduces the result bit for bit.
inline Aggregate aggregate_stats(std::span<const double> values)
{
    if (values.empty()) {
        throw InvalidInput("aggregate_stats: empty list");
    }
    Aggregate a;
    a.count = values.size();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    a.mean = sum / double(values.size());
    if (values.size() == 1) {
        return a;
    }
    double ss = 0.0;
    for (double v : values) {
        const double dv = v - a.mean;
        ss += dv * dv;
    }
    a.stddev = std::sqrt(ss / double(values.size() - 1));
    return a;
}

namespace detail {

/// 1-based average ranks; ties share the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * double(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

} // namespace detail

/// Spearman rank correlation (Pearson on average ranks).
inline double spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidInput("spearman: need two equally long series with at least two points");
    }
    const auto rx = detail::average_ranks(x);
    const auto ry = detail::average_ranks(y);
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / double(rx.size());
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / double(ry.size());
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace gspto
