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

#include "gspto/harness/experiment.hpp"
#include "gspto/harness/report.hpp"
#include "gspto/harness/stats.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace gspto {

struct SweepPoint
{
    double power = 0.0;
    ExperimentReport report;
};

/// All powers for one dimension.
struct SweepSeries
{
    std::size_t dimension = 0;
    std::vector<SweepPoint> points;

    std::vector<double> powers() const
    {
        std::vector<double> v;
        for (const auto& p : points) {
            v.push_back(p.power);
        }
        return v;
    }

    std::vector<double> mean_mse() const
    {
        std::vector<double> v;
        for (const auto& p : points) {
            v.push_back(p.report.trials.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                : p.report.metric("mse_to_optimum").mean);
        }
        return v;
    }

    std::vector<double> mean_fitness() const
    {
        std::vector<double> v;
        for (const auto& p : points) {
            v.push_back(p.report.trials.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                : p.report.metric("fitness").mean);
        }
        return v;
    }
};

struct SweepReport
{
    std::string name;
    std::vector<SweepSeries> series;
};

/// Runs one experiment per (dimension, N). Seeds are shared across N, so
/// every power sees the same initial points.
inline SweepReport n_sweep(const ExperimentConfig& config)
{
    config.validate();
    if (!config.sweep) {
        throw ConfigError("n_sweep needs a sweep section");
    }
    if (config.optimizer.algorithm != Algorithm::pgs && config.optimizer.algorithm != Algorithm::epgs) {
        throw ConfigError("n_sweep varies the power N and needs algorithm pgs or epgs");
    }
    SweepReport out;
    out.name = config.name;
    for (std::size_t d : config.sweep->dimensions) {
        SweepSeries series;
        series.dimension = d;
        for (double n : config.sweep->powers) {
            ExperimentConfig c = config;
            c.objective.dimension = d;
            c.optimizer.power = n;
            c.sweep.reset();
            char suffix[64];
            std::snprintf(suffix, sizeof suffix, "_d%zu_N%g", d, n);
            c.name = config.name + suffix;
            series.points.push_back({n, run_experiment(c)});
        }
        out.series.push_back(std::move(series));
    }
    return out;
}

/// N,mean_mse,mean_fitness for one dimension.
inline std::string trend_csv(const SweepSeries& series)
{
    std::ostringstream out;
    out << "N,mean_mse,mean_fitness\n";
    const auto n = series.powers();
    const auto mse = series.mean_mse();
    const auto fit = series.mean_fitness();
    for (std::size_t i = 0; i < n.size(); ++i) {
        out << detail::fmt17(n[i]) << ',' << detail::fmt17(mse[i]) << ',' << detail::fmt17(fit[i]) << '\n';
    }
    return out.str();
}

struct TrendCheck
{
    bool endpoints_ok = false; ///< mean MSE at the largest N strictly below the smallest N
    double spearman = 0.0;     ///< rank correlation of N and mean MSE
    bool passed() const { return endpoints_ok && spearman < 0.0; }
};

inline TrendCheck check_mse_trend(const SweepSeries& series)
{
    TrendCheck c;
    const auto mse = series.mean_mse();
    if (mse.empty()) {
        return c;
    }
    c.endpoints_ok = mse.back() < mse.front();
    if (mse.size() >= 2) {
        c.spearman = spearman(series.powers(), mse);
    }
    return c;
}

inline std::vector<std::filesystem::path> write_sweep(const SweepReport& report, const std::filesystem::path& directory,
                                                      const std::string& prefix)
{
    std::vector<std::filesystem::path> written;
    for (const auto& s : report.series) {
        const auto trend = directory / (prefix + "_d" + std::to_string(s.dimension) + "_trend.csv");
        detail::write_text(trend, trend_csv(s));
        written.push_back(trend);
        for (const auto& p : s.points) {
            char suffix[64];
            std::snprintf(suffix, sizeof suffix, "_d%zu_N%g", s.dimension, p.power);
            const auto paths = write_report(p.report, directory, prefix + suffix);
            written.push_back(paths.trials_csv);
            written.push_back(paths.summary_json);
        }
    }
    return written;
}

} // namespace gspto
