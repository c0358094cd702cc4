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

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace gspto {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error hierarchy. Everything thrown by the library derives from gspto::Error.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument to an objective (wrong dimension, non-finite coordinates).
class InvalidInput : public Error
{
public:
    using Error::Error;
};

/// Bad algorithm parameter (sigma <= 0, K == 0, gamma out of range, ...).
class InvalidParameter : public Error
{
public:
    using Error::Error;
};

/// PGS was asked to raise a negative fitness to a real power.
class NegativeFitness : public Error
{
public:
    explicit NegativeFitness(double value)
        : Error("PGS transform requires non-negative fitness, got " + std::to_string(value))
        , value_(value)
    {
    }

    double value() const noexcept { return value_; }

private:
    double value_;
};

/// PGS relative weighting needs a strictly positive anchor fitness.
class AnchorError : public Error
{
public:
    explicit AnchorError(double anchor)
        : Error("PGS relative weighting requires a positive anchor fitness, got " + std::to_string(anchor))
        , anchor_(anchor)
    {
    }

    double anchor() const noexcept { return anchor_; }

private:
    double anchor_;
};

/// The external scorer process misbehaved. Carries the raw response line.
class ExternalObjectiveError : public Error
{
public:
    ExternalObjectiveError(const std::string& what, std::string raw_line)
        : Error(what + (raw_line.empty() ? std::string() : " (response: \"" + raw_line + "\")"))
        , raw_line_(std::move(raw_line))
    {
    }

    const std::string& raw_line() const noexcept { return raw_line_; }

private:
    std::string raw_line_;
};

/// Node refinement did not settle. Carries the last two estimates.
class QuadratureError : public Error
{
public:
    QuadratureError(const std::string& what, double coarse, double fine)
        : Error(what + ": coarse=" + std::to_string(coarse) + " fine=" + std::to_string(fine))
        , coarse_(coarse)
        , fine_(fine)
    {
    }

    double coarse() const noexcept { return coarse_; }
    double fine() const noexcept { return fine_; }

private:
    double coarse_;
    double fine_;
};

/// The objective does not show the unique-maximum gap the threshold bound needs.
class AssumptionViolation : public Error
{
public:
    using Error::Error;
};

/// Malformed or incomplete configuration.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// Raised by an optimizer when a trial aborts; records where it happened.
class RunAborted : public Error
{
public:
    RunAborted(std::size_t iteration, const std::string& cause)
        : Error("run aborted at iteration " + std::to_string(iteration) + ": " + cause)
        , iteration_(iteration)
    {
    }

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

// ---------------------------------------------------------------------------
// Logging
// ---------------------------------------------------------------------------

namespace detail {

inline std::mutex& log_mutex()
{
    static std::mutex m;
    return m;
}

inline std::atomic<bool>& warnings_enabled()
{
    static std::atomic<bool> enabled{true};
    return enabled;
}

} // namespace detail

inline void set_warnings_enabled(bool enabled) { detail::warnings_enabled().store(enabled); }

inline void log_warning(const std::string& message)
{
    if (!detail::warnings_enabled().load()) {
        return;
    }
    std::lock_guard<std::mutex> lock(detail::log_mutex());
    std::clog << "[gspto] warning: " << message << '\n';
}

inline bool all_finite(const Vector& x)
{
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            return false;
        }
    }
    return true;
}

inline Vector make_vector(std::initializer_list<double> values)
{
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double value : values) {
        v[i++] = value;
    }
    return v;
}

} // namespace gspto
