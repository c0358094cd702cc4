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
#include "gspto/external.hpp"
#include "gspto/harness/config.hpp"
#include "gspto/harness/stats.hpp"
#include "gspto/objectives.hpp"
#include "gspto/optimizers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace gspto {

/// Builds a fresh objective for one trial. External objectives get their own
/// scorer process per call, so no handle is ever shared between trials.
using ObjectiveFactory = std::function<Objective(std::size_t trial)>;

inline Objective make_objective(const ObjectiveConfig& o)
{
    auto to_vector = [](const std::vector<double>& v) {
        return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
    };
    auto fixed_dimension = [&](std::size_t d) {
        if (o.dimension != d) {
            throw ConfigError(o.name + " is defined for dimension " + std::to_string(d));
        }
    };
    Objective obj = [&]() -> Objective {
        if (o.name == "ackley") {
            fixed_dimension(2);
            return ackley(o.box.value_or(10.0));
        }
        if (o.name == "rosenbrock") {
            fixed_dimension(2);
            return rosenbrock(o.box.value_or(10.0));
        }
        if (o.name == "two_log") {
            if (o.m1 || o.m2) {
                const Vector m1 = o.m1 ? to_vector(*o.m1) : Vector::Constant(o.dimension, -0.5);
                const Vector m2 = o.m2 ? to_vector(*o.m2) : Vector::Constant(o.dimension, 0.5);
                if (static_cast<std::size_t>(m1.size()) != o.dimension ||
                    static_cast<std::size_t>(m2.size()) != o.dimension) {
                    throw ConfigError("two_log centres must match objective.dimension");
                }
                return two_log(m1, m2, o.box.value_or(2.0));
            }
            return two_log(o.dimension, o.box.value_or(2.0));
        }
        if (o.name == "gaussian_quadratic") {
            return gaussian_quadratic(o.dimension, o.box.value_or(std::numeric_limits<double>::infinity()));
        }
        if (o.name == "external") {
            auto scorer = std::make_shared<ExternalScorer>(o.command, std::chrono::milliseconds(o.timeout_ms));
            Objective ext = external_objective(std::move(scorer), o.dimension,
                                               o.box.value_or(std::numeric_limits<double>::infinity()));
            if (o.optimum) {
                if (o.optimum->size() != o.dimension) {
                    throw ConfigError("objective.optimum must match objective.dimension");
                }
                ext.with_optimum(to_vector(*o.optimum), o.optimum_value);
            }
            return ext;
        }
        throw ConfigError("unknown objective '" + o.name + "'");
    }();
    if (o.shift != 0.0) {
        obj.with_shift(o.shift);
    }
    return obj;
}

inline ObjectiveFactory objective_factory(const ObjectiveConfig& o)
{
    if (o.name == "external") {
        return [o](std::size_t) { return make_objective(o); };
    }
    auto shared = std::make_shared<const Objective>(make_objective(o));
    return [shared](std::size_t) { return *shared; };
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct TrialResult
{
    std::size_t trial = 0;
    double best_fitness = 0.0; ///< raw fitness (shift removed) at the best iterate
    double mse = std::numeric_limits<double>::quiet_NaN();
    std::size_t iterations_to_best = 0;
    Vector solution;
    std::size_t degenerate_steps = 0;
};

struct TrialFailure
{
    std::size_t trial = 0;
    std::optional<std::size_t> iteration;
    std::string error;
};

struct ExperimentReport
{
    std::string name;
    std::string algorithm;
    std::size_t dimension = 0;
    std::size_t requested_trials = 0;
    std::vector<TrialResult> trials; ///< completed trials, in trial order
    std::vector<TrialFailure> failures;
    std::map<std::string, Aggregate> aggregates;
    std::vector<Aggregate> solution; ///< per-coordinate mean/std of mu*
    Json config;

    bool partial() const { return !failures.empty(); }

    const Aggregate& metric(const std::string& key) const
    {
        const auto it = aggregates.find(key);
        if (it == aggregates.end()) {
            throw InvalidInput("report has no aggregate for '" + key + "'");
        }
        return it->second;
    }

    Vector mean_solution() const
    {
        Vector m(static_cast<Eigen::Index>(solution.size()));
        for (std::size_t i = 0; i < solution.size(); ++i) {
            m[static_cast<Eigen::Index>(i)] = solution[i].mean;
        }
        return m;
    }
};

/// Recomputes aggregates from the per-trial rows; run_experiment calls this
/// and tests call it on reparsed CSV rows.
inline void compute_aggregates(ExperimentReport& report, const std::vector<std::string>& metrics)
{
    report.aggregates.clear();
    report.solution.clear();
    if (report.trials.empty()) {
        return;
    }
    auto column = [&](auto&& pick) {
        std::vector<double> v;
        v.reserve(report.trials.size());
        for (const auto& t : report.trials) {
            v.push_back(pick(t));
        }
        return v;
    };
    auto wanted = [&](const char* m) { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); };
    if (wanted("fitness")) {
        report.aggregates["fitness"] = aggregate_stats(column([](const TrialResult& t) { return t.best_fitness; }));
    }
    if (wanted("mse_to_optimum")) {
        const auto mse = column([](const TrialResult& t) { return t.mse; });
        if (std::all_of(mse.begin(), mse.end(), [](double v) { return std::isfinite(v); })) {
            report.aggregates["mse_to_optimum"] = aggregate_stats(mse);
        }
    }
    if (wanted("iterations_to_best")) {
        report.aggregates["iterations_to_best"] =
            aggregate_stats(column([](const TrialResult& t) { return double(t.iterations_to_best); }));
    }
    const auto d = report.trials.front().solution.size();
    for (Eigen::Index i = 0; i < d; ++i) {
        report.solution.push_back(aggregate_stats(column([i](const TrialResult& t) { return t.solution[i]; })));
    }
}

/// (1/d) sum (mu*_i - x*_i)^2.
inline double mse_to(const Vector& solution, const Vector& optimum)
{
    return (solution - optimum).squaredNorm() / double(solution.size());
}

// ---------------------------------------------------------------------------
// Work pool
// ---------------------------------------------------------------------------

inline std::size_t resolve_threads(std::size_t requested, std::size_t jobs)
{
    std::size_t n = requested;
    if (n == 0) {
        n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    return std::max<std::size_t>(1, std::min(n, jobs));
}

/// Runs job(i) for i in [0, count) on a pool. Each index is written by
/// exactly one worker, so results can go straight into a pre-sized vector.
inline void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job)
{
    const std::size_t workers = resolve_threads(threads, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

/// Outcome of one trial: a result or the reason it stopped.
struct TrialOutcome
{
    std::optional<TrialResult> result;
    std::optional<TrialFailure> failure;
};

inline TrialOutcome run_trial(const ObjectiveFactory& factory, const ExperimentConfig& config, std::size_t trial)
{
    TrialOutcome out;
    try {
        const Objective objective = factory(trial);
        const OptimizerConfig oc = config.optimizer.resolve(objective.dimension(), config.seed, trial);
        const RunTrace trace = run_optimizer(objective, oc);
        TrialResult r;
        r.trial = trial;
        r.best_fitness = trace.best_fitness - objective.shift();
        r.iterations_to_best = trace.iterations_to_best;
        r.solution = trace.best_iterate;
        r.degenerate_steps = trace.degenerate_steps;
        if (objective.known_optimum()) {
            r.mse = mse_to(trace.best_iterate, *objective.known_optimum());
        }
        out.result = std::move(r);
    } catch (const RunAborted& e) {
        out.failure = TrialFailure{trial, e.iteration(), e.what()};
    } catch (const InvalidParameter& e) {
        // A bad optimizer setting fails every trial the same way; surface it as a config problem.
        throw ConfigError(e.what());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        out.failure = TrialFailure{trial, std::nullopt, e.what()};
    }
    return out;
}

inline ExperimentReport run_experiment(const ExperimentConfig& config, const ObjectiveFactory& factory)
{
    config.validate();
    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_for(config.trials, config.threads,
                 [&](std::size_t trial) { outcomes[trial] = run_trial(factory, config, trial); });

    ExperimentReport report;
    report.name = config.name;
    report.algorithm = to_string(config.optimizer.algorithm);
    report.dimension = config.objective.dimension;
    report.requested_trials = config.trials;
    report.config = to_json(config);
    for (auto& o : outcomes) {
        if (o.result) {
            report.trials.push_back(std::move(*o.result));
        } else {
            report.failures.push_back(std::move(*o.failure));
        }
    }
    compute_aggregates(report, config.metrics);
    return report;
}

inline ExperimentReport run_experiment(const ExperimentConfig& config)
{
    config.validate();
    return run_experiment(config, objective_factory(config.objective));
}

// ---------------------------------------------------------------------------
// Expectations
// ---------------------------------------------------------------------------

struct CheckResult
{
    bool passed = true;
    std::vector<std::string> lines; ///< one human-readable line per check
};

inline CheckResult check_expectations(const ExperimentReport& report, const Expectations& expect)
{
    CheckResult out;
    char buf[256];
    if (report.trials.empty()) {
        out.passed = false;
        out.lines.push_back("no trial completed; nothing to check");
        return out;
    }
    if (expect.mean_fitness_min) {
        const double mean = report.metric("fitness").mean;
        const bool ok = mean >= *expect.mean_fitness_min;
        std::snprintf(buf, sizeof buf, "mean fitness %.6f >= %.6f: %s", mean, *expect.mean_fitness_min,
                      ok ? "ok" : "FAILED");
        out.lines.emplace_back(buf);
        out.passed = out.passed && ok;
    }
    if (expect.solution_target) {
        const Vector mean = report.mean_solution();
        const auto& target = *expect.solution_target;
        bool ok = static_cast<std::size_t>(mean.size()) == target.size();
        double worst = 0.0;
        for (std::size_t i = 0; ok && i < target.size(); ++i) {
            worst = std::max(worst, std::abs(mean[static_cast<Eigen::Index>(i)] - target[i]));
        }
        ok = ok && worst <= *expect.solution_tolerance;
        std::snprintf(buf, sizeof buf, "mean solution within %.4g of target (worst coordinate off by %.6f): %s",
                      *expect.solution_tolerance, worst, ok ? "ok" : "FAILED");
        out.lines.emplace_back(buf);
        out.passed = out.passed && ok;
    }
    return out;
}

} // namespace gspto
