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
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gspto {

/**
 * A scalar fitness to be maximized over a compact set S inside the box
 * S_M = { x : |x_i| <= M }.
 *
 * Evaluation returns raw(x) + shift. Membership in S is the box test plus an
 * optional extra predicate; the transforms zero out the weight of any point
 * outside S instead of raising.
 */
class Objective
{
public:
    using Function = std::function<double(const Vector&)>;
    using Predicate = std::function<bool(const Vector&)>;

    Objective(std::string name, std::size_t dimension, Function function,
              double box_half_width = std::numeric_limits<double>::infinity())
        : name_(std::move(name))
        , dimension_(dimension)
        , function_(std::move(function))
        , box_half_width_(box_half_width)
    {
        if (dimension_ == 0) {
            throw InvalidParameter("objective dimension must be positive");
        }
        if (!(box_half_width_ > 0.0)) {
            throw InvalidParameter("domain box half-width must be positive");
        }
    }

    const std::string& name() const noexcept { return name_; }
    std::size_t dimension() const noexcept { return dimension_; }
    double box_half_width() const noexcept { return box_half_width_; }
    double shift() const noexcept { return shift_; }

    double operator()(const Vector& x) const { return function_(x) + shift_; }
    double raw(const Vector& x) const { return function_(x); }

    bool in_domain(const Vector& x) const
    {
        if (static_cast<std::size_t>(x.size()) != dimension_) {
            return false;
        }
        if (std::isfinite(box_half_width_)) {
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                if (!(std::abs(x[i]) <= box_half_width_)) {
                    return false;
                }
            }
        }
        return !predicate_ || predicate_(x);
    }

    const std::optional<Vector>& known_optimum() const noexcept { return known_optimum_; }

    /// f(x*) of the shifted objective, when known.
    std::optional<double> known_max_value() const
    {
        if (!known_max_raw_) {
            return std::nullopt;
        }
        return *known_max_raw_ + shift_;
    }

    Objective& with_shift(double shift)
    {
        if (!std::isfinite(shift)) {
            throw InvalidParameter("shift must be finite");
        }
        shift_ = shift;
        return *this;
    }

    Objective& with_domain(Predicate predicate)
    {
        predicate_ = std::move(predicate);
        if (known_optimum_ && !in_domain(*known_optimum_)) {
            throw InvalidInput("known optimum of '" + name_ + "' lies outside the domain");
        }
        return *this;
    }

    /// Records x* and its raw value f(x*) (before shift).
    Objective& with_optimum(Vector optimum, std::optional<double> raw_value = std::nullopt)
    {
        if (static_cast<std::size_t>(optimum.size()) != dimension_) {
            throw InvalidInput("known optimum has wrong dimension");
        }
        if (!in_domain(optimum)) {
            throw InvalidInput("known optimum of '" + name_ + "' lies outside the domain");
        }
        known_max_raw_ = raw_value ? *raw_value : function_(optimum);
        known_optimum_ = std::move(optimum);
        return *this;
    }

    Objective with_box(double box_half_width) const
    {
        Objective copy = *this;
        if (!(box_half_width > 0.0)) {
            throw InvalidParameter("domain box half-width must be positive");
        }
        copy.box_half_width_ = box_half_width;
        if (copy.known_optimum_ && !copy.in_domain(*copy.known_optimum_)) {
            throw InvalidInput("known optimum of '" + name_ + "' lies outside the shrunken domain");
        }
        return copy;
    }

    Objective shifted(double shift) const
    {
        Objective copy = *this;
        copy.with_shift(shift_ + shift);
        return copy;
    }

private:
    std::string name_;
    std::size_t dimension_;
    Function function_;
    double box_half_width_;
    double shift_ = 0.0;
    Predicate predicate_;
    std::optional<Vector> known_optimum_;
    std::optional<double> known_max_raw_;
};

namespace detail {

inline void require_finite(const Vector& x, const char* what)
{
    if (!all_finite(x)) {
        throw InvalidInput(std::string(what) + ": non-finite input");
    }
}

inline void require_dimension(const Vector& x, Eigen::Index d, const char* what)
{
    if (x.size() != d) {
        throw InvalidInput(std::string(what) + ": expected dimension " + std::to_string(d) + ", got " +
                           std::to_string(x.size()));
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Benchmark functions (maximization form)
// ---------------------------------------------------------------------------

/// Max-version Ackley; global maximum 20 + e at the origin.
inline double eval_ackley(const Vector& x)
{
    detail::require_dimension(x, 2, "ackley");
    detail::require_finite(x, "ackley");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double r = std::sqrt(0.5 * (x[0] * x[0] + x[1] * x[1]));
    return 20.0 * std::exp(-0.2 * r) + std::exp(0.5 * (std::cos(two_pi * x[0]) + std::cos(two_pi * x[1])));
}

/// Max-version Rosenbrock; global maximum 0 at (1, 1).
inline double eval_rosenbrock(const Vector& x)
{
    detail::require_dimension(x, 2, "rosenbrock");
    detail::require_finite(x, "rosenbrock");
    const double a = x[1] - x[0] * x[0];
    const double b = 1.0 - x[0];
    return -100.0 * a * a - b * b;
}

/// Two-log landscape: sharp global peak at m1, wider local peak at m2.
inline double eval_two_log(const Vector& x, const Vector& m1, const Vector& m2)
{
    if (x.size() != m1.size() || x.size() != m2.size()) {
        throw InvalidInput("two_log: dimension mismatch between x, m1 and m2");
    }
    detail::require_finite(x, "two_log");
    return -std::log((x - m1).squaredNorm() + 1e-5) - std::log((x - m2).squaredNorm() + 1e-2);
}

inline Objective ackley(double box_half_width = 10.0)
{
    Objective obj("ackley", 2, [](const Vector& x) { return eval_ackley(x); }, box_half_width);
    obj.with_optimum(Vector::Zero(2), 20.0 + std::numbers::e);
    return obj;
}

inline Objective rosenbrock(double box_half_width = 10.0)
{
    Objective obj("rosenbrock", 2, [](const Vector& x) { return eval_rosenbrock(x); }, box_half_width);
    obj.with_optimum(Vector::Ones(2), 0.0);
    return obj;
}

inline Objective two_log(std::size_t d, double box_half_width = 2.0)
{
    const Eigen::Index n = static_cast<Eigen::Index>(d);
    Vector m1 = Vector::Constant(n, -0.5);
    Vector m2 = Vector::Constant(n, 0.5);
    Objective obj("two_log", d, [m1, m2](const Vector& x) { return eval_two_log(x, m1, m2); }, box_half_width);
    obj.with_optimum(m1);
    return obj;
}

inline Objective two_log(const Vector& m1, const Vector& m2, double box_half_width = 2.0)
{
    if (m1.size() != m2.size() || m1.size() == 0) {
        throw InvalidInput("two_log: m1 and m2 must share a positive dimension");
    }
    Objective obj("two_log", static_cast<std::size_t>(m1.size()),
                  [m1, m2](const Vector& x) { return eval_two_log(x, m1, m2); }, box_half_width);
    obj.with_optimum(m1);
    return obj;
}

/// f(x) = -|x - center|^2 / 2. Gaussian smoothing of exp(N f) has a closed form.
inline Objective gaussian_quadratic(std::size_t d, double box_half_width = std::numeric_limits<double>::infinity())
{
    Objective obj("quadratic", d, [](const Vector& x) { return -0.5 * x.squaredNorm(); }, box_half_width);
    obj.with_optimum(Vector::Zero(static_cast<Eigen::Index>(d)), 0.0);
    return obj;
}

// ---------------------------------------------------------------------------
// Targeted-attack loss
// ---------------------------------------------------------------------------

struct AttackLossParams
{
    std::size_t target = 0;
    double kappa = 0.01;
    double lambda = 1.0;

    void validate() const
    {
        if (!std::isfinite(kappa)) {
            throw InvalidParameter("attack kappa must be finite");
        }
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
            throw InvalidParameter("attack lambda must be finite and non-negative");
        }
    }
};

/// max_{i != T} logits_i - logits_T. Negative means the target leads.
inline double target_gap(std::span<const double> logits, std::size_t target)
{
    if (logits.size() < 2) {
        throw InvalidInput("attack loss needs at least two logits");
    }
    if (target >= logits.size()) {
        throw InvalidInput("attack target " + std::to_string(target) + " out of range for " +
                           std::to_string(logits.size()) + " logits");
    }
    double best_other = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < logits.size(); ++i) {
        if (i != target) {
            best_other = std::max(best_other, logits[i]);
        }
    }
    return best_other - logits[target];
}

/// L(x) = max(max_{i != T} C_i - C_T, kappa) + lambda * |x|_2.
inline double cw_attack_loss(const Vector& perturbation, std::span<const double> logits,
                             const AttackLossParams& params)
{
    params.validate();
    const double gap = target_gap(logits, params.target);
    return std::max(gap, params.kappa) + params.lambda * perturbation.norm();
}

/// A perturbation succeeds when the target logit leads every other class by more than kappa.
inline bool attack_succeeds(std::span<const double> logits, const AttackLossParams& params)
{
    return -target_gap(logits, params.target) > params.kappa;
}

enum class R2Variant
{
    conventional, ///< 1 - sum mu_i^2 / sum (a_i - mean a)^2
    ratio,        ///< sum (a_i - mean a)^2 / sum mu_i^2
};

/// Fidelity between the clean input a and a + mu.
inline double r_squared(const Vector& clean, const Vector& perturbation, R2Variant variant = R2Variant::conventional)
{
    if (clean.size() != perturbation.size() || clean.size() == 0) {
        throw InvalidInput("r_squared: input and perturbation must share a positive dimension");
    }
    const double spread = (clean.array() - clean.mean()).square().sum();
    const double energy = perturbation.squaredNorm();
    if (variant == R2Variant::conventional) {
        if (spread == 0.0) {
            return energy == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
        }
        return 1.0 - energy / spread;
    }
    if (energy == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return spread / energy;
}

/// Logits C(a + x) for perturbation x.
using Classifier = std::function<std::vector<double>(const Vector& input)>;

/// Built-in stand-in for a black-box classifier: logits = W z + b.
class AffineClassifier
{
public:
    AffineClassifier(Matrix weights, Vector bias)
        : weights_(std::move(weights))
        , bias_(std::move(bias))
    {
        if (weights_.rows() != bias_.size() || weights_.rows() < 2 || weights_.cols() < 1) {
            throw InvalidParameter("affine classifier needs >= 2 classes and matching bias");
        }
    }

    /// Standard-normal weights and biases drawn from the given seed.
    static AffineClassifier random(std::size_t input_dim, std::size_t classes, std::uint64_t seed)
    {
        std::mt19937_64 engine(seed);
        std::normal_distribution<double> normal;
        Matrix w(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(input_dim));
        Vector b(static_cast<Eigen::Index>(classes));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = normal(engine);
            }
            b[r] = normal(engine);
        }
        return AffineClassifier(std::move(w), std::move(b));
    }

    std::size_t input_dimension() const noexcept { return static_cast<std::size_t>(weights_.cols()); }
    std::size_t classes() const noexcept { return static_cast<std::size_t>(weights_.rows()); }

    std::vector<double> operator()(const Vector& input) const
    {
        detail::require_dimension(input, weights_.cols(), "affine classifier");
        const Vector z = weights_ * input + bias_;
        return std::vector<double>(z.data(), z.data() + z.size());
    }

private:
    Matrix weights_;
    Vector bias_;
};

/// Index of the smallest logit; the hardest target.
inline std::size_t argmin_logit(std::span<const double> logits)
{
    if (logits.empty()) {
        throw InvalidInput("argmin_logit: empty logits");
    }
    return static_cast<std::size_t>(std::min_element(logits.begin(), logits.end()) - logits.begin());
}

/// Fitness f(x) = -L(x) for a perturbation x of the clean input a.
inline Objective attack_objective(Classifier classifier, Vector clean, AttackLossParams params)
{
    params.validate();
    const auto d = static_cast<std::size_t>(clean.size());
    return Objective(
        "attack", d,
        [classifier = std::move(classifier), clean = std::move(clean), params](const Vector& x) {
            const std::vector<double> logits = classifier(clean + x);
            return -cw_attack_loss(x, logits, params);
        });
}

} // namespace gspto
