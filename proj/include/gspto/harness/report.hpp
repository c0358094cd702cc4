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

// Report emission. Numbers are printed with 17 significant digits so that a
// reader parsing the CSV recovers every double exactly.

#include "gspto/harness/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gspto {

namespace detail {

inline std::string fmt17(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Json aggregate_json(const Aggregate& a) { return {{"mean", a.mean}, {"std", a.stddev}, {"count", a.count}}; }

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw Error("write to '" + path.string() + "' failed");
    }
}

} // namespace detail

/// trial,best_fitness,mse,iterations_to_best,x1..xd; completed trials only.
inline std::string trials_csv(const ExperimentReport& report)
{
    std::ostringstream out;
    out << "trial,best_fitness,mse,iterations_to_best";
    const std::size_t d = report.trials.empty() ? report.dimension : static_cast<std::size_t>(report.trials[0].solution.size());
    for (std::size_t i = 1; i <= d; ++i) {
        out << ",x" << i;
    }
    out << '\n';
    for (const auto& t : report.trials) {
        out << t.trial << ',' << detail::fmt17(t.best_fitness) << ',' << detail::fmt17(t.mse) << ','
            << t.iterations_to_best;
        for (Eigen::Index i = 0; i < t.solution.size(); ++i) {
            out << ',' << detail::fmt17(t.solution[i]);
        }
        out << '\n';
    }
    return out.str();
}

inline Json summary_json(const ExperimentReport& report)
{
    Json j;
    j["name"] = report.name;
    j["algorithm"] = report.algorithm;
    j["dimension"] = report.dimension;
    j["trials_requested"] = report.requested_trials;
    j["trials_completed"] = report.trials.size();
    j["partial"] = report.partial();
    Json agg = Json::object();
    for (const auto& [key, a] : report.aggregates) {
        agg[key] = detail::aggregate_json(a);
    }
    j["aggregates"] = agg;
    Json sol = Json::array();
    for (const auto& a : report.solution) {
        sol.push_back(detail::aggregate_json(a));
    }
    j["mean_solution"] = sol;
    Json failures = Json::array();
    for (const auto& f : report.failures) {
        Json fj{{"trial", f.trial}, {"error", f.error}};
        fj["iteration"] = f.iteration ? Json(*f.iteration) : Json(nullptr);
        failures.push_back(fj);
    }
    j["failures"] = failures;
    j["config"] = report.config;
    return j;
}

struct ReportPaths
{
    std::filesystem::path trials_csv;
    std::filesystem::path summary_json;
};

/// Default output directory: $GSPTO_OUT_DIR, else ./gspto_out.
inline std::filesystem::path default_output_directory()
{
    if (const char* env = std::getenv("GSPTO_OUT_DIR"); env && *env) {
        return env;
    }
    return "gspto_out";
}

inline ReportPaths write_report(const ExperimentReport& report, const std::filesystem::path& directory,
                                const std::string& prefix)
{
    ReportPaths paths{directory / (prefix + "_trials.csv"), directory / (prefix + "_summary.json")};
    detail::write_text(paths.trials_csv, trials_csv(report));
    detail::write_text(paths.summary_json, summary_json(report).dump(2) + "\n");
    return paths;
}

/// Parses a trials CSV back into rows (for integrity checks and tooling).
inline std::vector<TrialResult> parse_trials_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("trial,best_fitness,mse,iterations_to_best", 0) != 0) {
        throw InvalidInput("trials CSV: unexpected header");
    }
    std::size_t columns = 1;
    for (char c : line) {
        columns += c == ',';
    }
    if (columns < 5) {
        throw InvalidInput("trials CSV: no solution columns");
    }
    std::vector<TrialResult> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != columns) {
            throw InvalidInput("trials CSV: row has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(columns));
        }
        TrialResult r;
        r.trial = std::stoull(cells[0]);
        r.best_fitness = std::strtod(cells[1].c_str(), nullptr);
        r.mse = std::strtod(cells[2].c_str(), nullptr);
        r.iterations_to_best = std::stoull(cells[3]);
        r.solution.resize(static_cast<Eigen::Index>(columns - 4));
        for (std::size_t i = 4; i < columns; ++i) {
            r.solution[static_cast<Eigen::Index>(i - 4)] = std::strtod(cells[i].c_str(), nullptr);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace gspto
