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
#include "gspto/estimators.hpp"
#include "gspto/objectives.hpp"
#include "gspto/samplers.hpp"
#include "gspto/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gspto {

// ---------------------------------------------------------------------------
// Learning-rate schedules
// ---------------------------------------------------------------------------

enum class ScheduleKind
{
    power,      ///< (t + 1)^-(1/2 + gamma)
    hyperbolic, ///< 1000 alpha0 / (1000 + t)
    constant,   ///< alpha0
};

struct LearningRateSchedule
{
    ScheduleKind kind = ScheduleKind::constant;
    double alpha0 = 0.1;
    double gamma = 0.25;

    void validate() const
    {
        if (kind == ScheduleKind::power) {
            if (!(gamma > 0.0 && gamma < 0.5)) {
                throw InvalidParameter("power schedule requires gamma in (0, 1/2), got " + std::to_string(gamma));
            }
            return;
        }
        if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
            throw InvalidParameter("learning rate alpha0 must be positive and finite");
        }
    }

    double at(std::size_t t) const
    {
        switch (kind) {
        case ScheduleKind::power:
            return std::pow(double(t) + 1.0, -(0.5 + gamma));
        case ScheduleKind::hyperbolic:
            return 1000.0 * alpha0 / (1000.0 + double(t));
        case ScheduleKind::constant:
            break;
        }
        return alpha0;
    }

    static LearningRateSchedule power_law(double gamma) { return {ScheduleKind::power, 1.0, gamma}; }
    static LearningRateSchedule hyperbolic_decay(double alpha0) { return {ScheduleKind::hyperbolic, alpha0, 0.25}; }
    static LearningRateSchedule fixed(double alpha0) { return {ScheduleKind::constant, alpha0, 0.25}; }
};

inline double schedule_value(const LearningRateSchedule& schedule, std::size_t t)
{
    schedule.validate();
    return schedule.at(t);
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class Algorithm
{
    pgs,
    epgs,
    std_homotopy,
    zo_sgd,
};

inline const char* to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::pgs:
        return "pgs";
    case Algorithm::epgs:
        return "epgs";
    case Algorithm::std_homotopy:
        return "std_homotopy";
    case Algorithm::zo_sgd:
        return "zo_sgd";
    }
    return "unknown";
}

/// How mu_0 is drawn at the start of each trial.
struct InitialPoint
{
    enum class Kind
    {
        fixed,       ///< mu_0 = center
        gaussian,    ///< N(center, cov_scale I)
        uniform_box, ///< each coordinate uniform on [center_i - half_width, center_i + half_width]
    };

    Kind kind = Kind::fixed;
    Vector center;
    double cov_scale = 0.0;
    double half_width = 1.0;

    Vector draw(RngStream& rng) const
    {
        Vector mu = center;
        switch (kind) {
        case Kind::fixed:
            break;
        case Kind::gaussian: {
            const double sd = std::sqrt(cov_scale);
            for (Eigen::Index i = 0; i < mu.size(); ++i) {
                mu[i] += sd * rng.normal();
            }
            break;
        }
        case Kind::uniform_box:
            for (Eigen::Index i = 0; i < mu.size(); ++i) {
                mu[i] = rng.uniform(center[i] - half_width, center[i] + half_width);
            }
            break;
        }
        return mu;
    }

    static InitialPoint at(Vector center) { return {Kind::fixed, std::move(center), 0.0, 1.0}; }
    static InitialPoint gaussian(Vector center, double cov_scale) { return {Kind::gaussian, std::move(center), cov_scale, 1.0}; }
    static InitialPoint uniform(Vector center, double half_width) { return {Kind::uniform_box, std::move(center), 0.0, half_width}; }
};

/// Extra knobs for the double-loop homotopy.
struct HomotopyParams
{
    std::size_t max_sigma_updates = 10; ///< N_sigma
    std::size_t max_inner_updates = 500; ///< T_mu
    std::size_t patience = 100;          ///< tau
    double decay = 0.8;                  ///< sigma <- decay * sigma
};

struct OptimizerConfig
{
    Algorithm algorithm = Algorithm::epgs;
    TransformMode mode;
    double sigma = 1.0;
    std::size_t samples = 100;
    std::size_t iterations = 200; ///< T, or T_total for the homotopy
    LearningRateSchedule schedule;
    InitialPoint init;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::optional<HomotopyParams> homotopy;

    /// Divide each GSPTO step by the estimate norm. Off gives the plain
    /// stochastic-ascent rule mu + alpha g.
    bool normalize = true;

    void validate(std::size_t dimension) const
    {
        if (iterations == 0) {
            throw InvalidParameter("iterations (T) must be at least 1");
        }
        if (samples == 0) {
            throw InvalidParameter("samples (K) must be at least 1");
        }
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw InvalidParameter("sigma must be positive and finite");
        }
        schedule.validate();
        if (static_cast<std::size_t>(init.center.size()) != dimension) {
            throw InvalidParameter("initial point has dimension " + std::to_string(init.center.size()) +
                                   ", objective expects " + std::to_string(dimension));
        }
        if (init.kind == InitialPoint::Kind::gaussian && !(init.cov_scale >= 0.0)) {
            throw InvalidParameter("initial covariance scale must be non-negative");
        }
        if (init.kind == InitialPoint::Kind::uniform_box && !(init.half_width > 0.0)) {
            throw InvalidParameter("initial box half-width must be positive");
        }
        const bool is_homotopy = algorithm == Algorithm::std_homotopy;
        if (is_homotopy != homotopy.has_value()) {
            throw InvalidParameter(is_homotopy ? "std_homotopy requires homotopy parameters"
                                               : "homotopy parameters are only valid for std_homotopy");
        }
        if (homotopy && !(homotopy->decay > 0.0 && homotopy->decay < 1.0)) {
            throw InvalidParameter("homotopy decay must lie in (0, 1)");
        }
        if (algorithm == Algorithm::pgs || algorithm == Algorithm::epgs) {
            mode.validate();
            if (!(mode.power > 0.0)) {
                throw InvalidParameter("GSPTO power N must be positive");
            }
            const TransformKind expected = algorithm == Algorithm::pgs ? TransformKind::pgs : TransformKind::epgs;
            if (mode.kind != expected) {
                throw InvalidParameter("transform kind does not match algorithm");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Trace
// ---------------------------------------------------------------------------

/// State at iterate t plus the quantities used to leave it.
struct IterationRecord
{
    std::size_t t = 0;
    Vector mu;
    double fitness = 0.0;
    double grad_norm = 0.0; ///< |g_t|, 0 for the final iterate
    double step_size = 0.0; ///< alpha_t, 0 for the final iterate
    double sigma = 0.0;     ///< smoothing scale used at t
    bool degenerate = false;
};

struct RunTrace
{
    std::vector<IterationRecord> records;
    double best_fitness = -std::numeric_limits<double>::infinity();
    Vector best_iterate;
    std::size_t iterations_to_best = 0;
    std::size_t degenerate_steps = 0;

    /// Appends mu_t and keeps the running best; ties keep the earliest.
    void push(IterationRecord record)
    {
        if (records.empty() || record.fitness > best_fitness) {
            best_fitness = record.fitness;
            best_iterate = record.mu;
            iterations_to_best = record.t;
        }
        records.push_back(std::move(record));
    }

    const Vector& final_iterate() const { return records.back().mu; }
};

namespace detail {

inline double evaluate_or_abort(const Objective& objective, const Vector& mu, std::size_t t)
{
    try {
        return objective(mu);
    } catch (const Error& e) {
        throw RunAborted(t, e.what());
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// PGS / EPGS
// ---------------------------------------------------------------------------

/// Gaussian smoothing of the power-transformed objective, normalized ascent.
inline RunTrace run_gspto(const Objective& objective, const OptimizerConfig& config)
{
    if (config.algorithm != Algorithm::pgs && config.algorithm != Algorithm::epgs) {
        throw InvalidParameter("run_gspto requires algorithm pgs or epgs");
    }
    config.validate(objective.dimension());

    RngStream rng(config.seed, config.stream);
    Vector mu = config.init.draw(rng);

    RunTrace trace;
    trace.records.reserve(config.iterations + 1);
    for (std::size_t t = 0; t < config.iterations; ++t) {
        GradientEstimate est;
        try {
            est = gspto_gradient(objective, mu, config.sigma, config.mode, config.samples, rng);
        } catch (const Error& e) {
            throw RunAborted(t, e.what());
        }
        const double alpha = config.schedule.at(t);
        const bool degenerate = est.degenerate || est.norm == 0.0 || !std::isfinite(est.norm);
        trace.push({t, mu, est.anchor_fitness, est.norm, alpha, config.sigma, degenerate});
        if (degenerate) {
            ++trace.degenerate_steps;
            continue;
        }
        if (config.normalize) {
            mu += est.g * (alpha / est.norm);
        } else {
            mu += alpha * est.g;
        }
    }
    trace.push({config.iterations, mu, detail::evaluate_or_abort(objective, mu, config.iterations), 0.0, 0.0,
                config.sigma, false});
    return trace;
}

// ---------------------------------------------------------------------------
// STD-Homotopy
// ---------------------------------------------------------------------------

/**
 * Double-loop homotopy. The inner loop takes normalized steps at fixed sigma
 * until T_mu updates, tau updates without improving on f(mu_{t - tau}), or
 * the global budget. The outer loop shrinks sigma by the decay factor, at
 * most N_sigma times.
 */
inline RunTrace run_std_homotopy(const Objective& objective, const OptimizerConfig& config)
{
    if (config.algorithm != Algorithm::std_homotopy) {
        throw InvalidParameter("run_std_homotopy requires algorithm std_homotopy");
    }
    config.validate(objective.dimension());
    const HomotopyParams& hp = *config.homotopy;

    RngStream rng(config.seed, config.stream);
    Vector mu = config.init.draw(rng);
    double sigma = config.sigma;
    double fitness = detail::evaluate_or_abort(objective, mu, 0);

    RunTrace trace;
    std::size_t total = 0;
    std::size_t sigma_updates = 0;
    while (total < config.iterations && sigma_updates < hp.max_sigma_updates) {
        // Fitness history of this inner loop: history[j] = f(mu at inner step j).
        std::vector<double> history{fitness};
        bool improving = true;
        std::size_t t = 0;
        while (t < hp.max_inner_updates && improving && total < config.iterations) {
            GradientEstimate est;
            try {
                est = homotopy_gradient(objective, mu, sigma, config.samples, rng);
            } catch (const Error& e) {
                throw RunAborted(total, e.what());
            }
            const double alpha = config.schedule.at(total);
            const bool degenerate = est.norm == 0.0 || !std::isfinite(est.norm);
            trace.push({total, mu, fitness, est.norm, alpha, sigma, degenerate});
            if (degenerate) {
                ++trace.degenerate_steps;
            } else {
                mu += est.g * (alpha / est.norm);
            }
            fitness = detail::evaluate_or_abort(objective, mu, total + 1);
            history.push_back(fitness);

            // history.back() is f(mu_{t+1}); compare the last tau + 1 values with f(mu_{t - tau}).
            if (t >= hp.patience) {
                const auto last = history.end();
                const double recent = *std::max_element(last - static_cast<std::ptrdiff_t>(hp.patience + 1), last);
                const double reference = history[t - hp.patience];
                if (recent <= reference) {
                    improving = false;
                }
            }
            ++total;
            ++t;
        }
        sigma *= hp.decay;
        ++sigma_updates;
    }
    trace.push({total, mu, fitness, 0.0, 0.0, sigma, false});
    return trace;
}

// ---------------------------------------------------------------------------
// ZO-SGD
// ---------------------------------------------------------------------------

/// Unnormalized ascent on the sphere forward-difference estimate.
inline RunTrace run_zo_sgd(const Objective& objective, const OptimizerConfig& config)
{
    if (config.algorithm != Algorithm::zo_sgd) {
        throw InvalidParameter("run_zo_sgd requires algorithm zo_sgd");
    }
    config.validate(objective.dimension());

    RngStream rng(config.seed, config.stream);
    Vector mu = config.init.draw(rng);

    RunTrace trace;
    trace.records.reserve(config.iterations + 1);
    for (std::size_t t = 0; t < config.iterations; ++t) {
        GradientEstimate est;
        try {
            est = zo_sgd_gradient(objective, mu, config.sigma, config.samples, rng);
        } catch (const Error& e) {
            throw RunAborted(t, e.what());
        }
        const double alpha = config.schedule.at(t);
        trace.push({t, mu, est.anchor_fitness, est.norm, alpha, config.sigma, est.degenerate});
        if (est.degenerate) {
            ++trace.degenerate_steps;
        }
        mu += alpha * est.g;
    }
    trace.push({config.iterations, mu, detail::evaluate_or_abort(objective, mu, config.iterations), 0.0, 0.0,
                config.sigma, false});
    return trace;
}

/// Dispatch on config.algorithm.
inline RunTrace run_optimizer(const Objective& objective, const OptimizerConfig& config)
{
    switch (config.algorithm) {
    case Algorithm::pgs:
    case Algorithm::epgs:
        return run_gspto(objective, config);
    case Algorithm::std_homotopy:
        return run_std_homotopy(objective, config);
    case Algorithm::zo_sgd:
        return run_zo_sgd(objective, config);
    }
    throw InvalidParameter("unknown algorithm");
}

} // namespace gspto
