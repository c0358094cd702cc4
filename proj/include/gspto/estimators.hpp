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
#include "gspto/objectives.hpp"
#include "gspto/samplers.hpp"
#include "gspto/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gspto {

/**
 * Monte-Carlo gradient of a smoothed objective.
 *
 * All three estimators return the unscaled score-function form
 * (1/K) sum (x_k - mu) w_k. The exact gradient of the Gaussian expectation
 * carries an extra 1/sigma^2; callers that normalize the step never see it.
 */
struct GradientEstimate
{
    Vector g;
    double norm = 0.0;
    std::size_t samples_used = 0;
    double anchor_fitness = 0.0;

    /// Every sample weight was zero (all samples outside S). Not the same as
    /// a numerically tiny estimate.
    bool degenerate = false;

    /// Stable weights would have left the double range and were rescaled by
    /// the largest sample weight instead of the anchor.
    bool rescaled = false;
};

namespace detail {

inline void validate_estimator_args(const Objective& objective, const Vector& mu, double sigma, std::size_t count)
{
    if (static_cast<std::size_t>(mu.size()) != objective.dimension()) {
        throw InvalidInput("estimator: mu has dimension " + std::to_string(mu.size()) + ", objective expects " +
                           std::to_string(objective.dimension()));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidParameter("estimator: sigma must be positive and finite");
    }
    if (count == 0) {
        throw InvalidParameter("estimator: sample count must be positive");
    }
}

inline GradientEstimate finish(Vector g, std::size_t count, double anchor)
{
    GradientEstimate est;
    est.norm = g.norm();
    est.g = std::move(g);
    est.samples_used = count;
    est.anchor_fitness = anchor;
    return est;
}

} // namespace detail

/// Power-transformed Gaussian-smoothing gradient, x_k ~ N(mu, sigma^2 I).
///
/// With stable weighting the weights are f_N(x_k) / f_N(mu); otherwise
/// f_N(x_k) itself. Both give the same direction.
inline GradientEstimate gspto_gradient(const Objective& objective, const Vector& mu, double sigma,
                                       const TransformMode& mode, std::size_t count, RngStream& rng)
{
    detail::validate_estimator_args(objective, mu, sigma, count);
    mode.validate();

    const Matrix samples = sample_gaussian(mu, sigma, count, rng);
    const double anchor = objective(mu);

    std::vector<double> weights(count, 0.0);
    bool rescaled = false;

    if (mode.stable_weighting) {
        // Weights within e^{+-250} keep sum_k (x_k - mu) w_k and its squared
        // norm comfortably inside the double range.
        constexpr double log_limit = 250.0;
        std::vector<double> log_weights(count, -std::numeric_limits<double>::infinity());
        std::vector<double> fitness(count, 0.0);
        double max_log = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < count; ++k) {
            const Vector x = samples.col(static_cast<Eigen::Index>(k));
            if (!objective.in_domain(x)) {
                continue;
            }
            fitness[k] = objective(x);
            log_weights[k] = log_relative_weight(fitness[k], anchor, mode);
            max_log = std::max(max_log, log_weights[k]);
        }
        rescaled = std::isfinite(max_log) && (max_log > log_limit || max_log < -log_limit);
        for (std::size_t k = 0; k < count; ++k) {
            if (!std::isfinite(log_weights[k])) {
                continue;
            }
            weights[k] = rescaled ? std::exp(log_weights[k] - max_log) : relative_weight(fitness[k], anchor, mode);
        }
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            const Vector x = samples.col(static_cast<Eigen::Index>(k));
            const bool inside = objective.in_domain(x);
            weights[k] = inside ? transform(objective(x), true, mode) : 0.0;
        }
    }

    Vector g = Vector::Zero(mu.size());
    bool any_weight = false;
    for (std::size_t k = 0; k < count; ++k) {
        if (weights[k] == 0.0) {
            continue;
        }
        any_weight = true;
        g += (samples.col(static_cast<Eigen::Index>(k)) - mu) * weights[k];
    }
    g /= double(count);

    GradientEstimate est = detail::finish(std::move(g), count, anchor);
    est.degenerate = !any_weight;
    est.rescaled = rescaled;
    return est;
}

/// Sphere-sampled homotopy gradient: x_k = mu + sigma v_k, weights f(x_k).
inline GradientEstimate homotopy_gradient(const Objective& objective, const Vector& mu, double sigma,
                                          std::size_t count, RngStream& rng)
{
    detail::validate_estimator_args(objective, mu, sigma, count);
    const Matrix dirs = sample_unit_sphere(objective.dimension(), count, rng);
    Vector g = Vector::Zero(mu.size());
    for (Eigen::Index k = 0; k < dirs.cols(); ++k) {
        const Vector offset = sigma * dirs.col(k);
        g += offset * objective(mu + offset);
    }
    g /= double(count);
    GradientEstimate est = detail::finish(std::move(g), count, objective(mu));
    est.degenerate = est.norm == 0.0;
    return est;
}

/// Forward-difference gradient along sphere directions, scaled by d / sigma.
inline GradientEstimate zo_sgd_gradient(const Objective& objective, const Vector& mu, double sigma,
                                        std::size_t count, RngStream& rng)
{
    detail::validate_estimator_args(objective, mu, sigma, count);
    const Matrix dirs = sample_unit_sphere(objective.dimension(), count, rng);
    const double base = objective(mu);
    const double scale = double(objective.dimension()) / sigma;
    Vector g = Vector::Zero(mu.size());
    for (Eigen::Index k = 0; k < dirs.cols(); ++k) {
        const Vector v = dirs.col(k);
        g += v * ((objective(mu + sigma * v) - base) * scale);
    }
    g /= double(count);
    GradientEstimate est = detail::finish(std::move(g), count, base);
    est.degenerate = est.norm == 0.0;
    return est;
}

} // namespace gspto
