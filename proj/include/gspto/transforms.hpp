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

#include <atomic>
#include <cmath>
#include <limits>
#include <string>

namespace gspto {

enum class TransformKind
{
    pgs,  ///< f^N, requires f >= 0
    epgs, ///< exp(N f)
};

inline const char* to_string(TransformKind kind) { return kind == TransformKind::pgs ? "pgs" : "epgs"; }

struct TransformMode
{
    TransformKind kind = TransformKind::epgs;
    double power = 1.0;
    bool stable_weighting = true;

    /// N = 0 is accepted here as the uniform-weight limit; optimizers require N > 0.
    void validate() const
    {
        if (!(power >= 0.0) || !std::isfinite(power)) {
            throw InvalidParameter("transform power must be finite and non-negative, got " + std::to_string(power));
        }
    }
};

inline TransformMode pgs(double power, bool stable = true) { return {TransformKind::pgs, power, stable}; }
inline TransformMode epgs(double power, bool stable = true) { return {TransformKind::epgs, power, stable}; }

namespace detail {

inline std::atomic<bool>& overflow_warned()
{
    static std::atomic<bool> warned{false};
    return warned;
}

inline double clamp_overflow(double value)
{
    constexpr double largest = std::numeric_limits<double>::max();
    if (value > largest) {
        if (!overflow_warned().exchange(true)) {
            log_warning("transformed fitness overflowed; clamping to the largest finite double "
                        "(enable stable weighting to avoid this)");
        }
        return largest;
    }
    return value;
}

} // namespace detail

/// f_N(x): f^N (PGS) or exp(N f) (EPGS) inside S, exactly 0 outside.
inline double transform(double f_value, bool in_domain, const TransformMode& mode)
{
    if (!in_domain) {
        return 0.0;
    }
    if (mode.kind == TransformKind::pgs) {
        if (f_value < 0.0) {
            throw NegativeFitness(f_value);
        }
        return detail::clamp_overflow(std::pow(f_value, mode.power));
    }
    return detail::clamp_overflow(std::exp(mode.power * f_value));
}

/// log f_N(x) for an in-domain sample; -inf for a zero PGS fitness.
inline double log_transform(double f_value, const TransformMode& mode)
{
    if (mode.kind == TransformKind::pgs) {
        if (f_value < 0.0) {
            throw NegativeFitness(f_value);
        }
        return mode.power * std::log(f_value);
    }
    return mode.power * f_value;
}

/// f_N(sample) / f_N(anchor) computed without forming either factor.
inline double relative_weight(double f_sample, double f_anchor, const TransformMode& mode)
{
    if (mode.kind == TransformKind::pgs) {
        if (!(f_anchor > 0.0)) {
            throw AnchorError(f_anchor);
        }
        if (f_sample < 0.0) {
            throw NegativeFitness(f_sample);
        }
        return std::pow(f_sample / f_anchor, mode.power);
    }
    return std::exp(mode.power * (f_sample - f_anchor));
}

/// log of relative_weight; -inf when the PGS sample fitness is zero.
inline double log_relative_weight(double f_sample, double f_anchor, const TransformMode& mode)
{
    if (mode.kind == TransformKind::pgs) {
        if (!(f_anchor > 0.0)) {
            throw AnchorError(f_anchor);
        }
        if (f_sample < 0.0) {
            throw NegativeFitness(f_sample);
        }
        return mode.power * std::log(f_sample / f_anchor);
    }
    return mode.power * (f_sample - f_anchor);
}

} // namespace gspto
