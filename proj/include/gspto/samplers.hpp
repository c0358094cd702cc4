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

#include <cstdint>
#include <random>

namespace gspto {

/**
 * Seeded random stream for one trial.
 *
 * (seed, stream_id) fully determines the sequence. The 128 bits of key
 * material go through std::seed_seq into a 64-bit Mersenne Twister, so
 * neighbouring stream ids give unrelated engine states.
 */
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed)
        , stream_id_(stream_id)
        , engine_(make_engine(seed, stream_id))
    {
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                          0x9e3779b9u};
        return std::mt19937_64(seq);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

/// K draws from N(mu, sigma^2 I); column k is the k-th sample.
///
/// sigma is the per-coordinate standard deviation (covariance sigma^2 I).
inline Matrix sample_gaussian(const Vector& mu, double sigma, std::size_t count, RngStream& rng)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidParameter("sample_gaussian: sigma must be positive and finite");
    }
    if (count == 0) {
        throw InvalidParameter("sample_gaussian: sample count must be positive");
    }
    Matrix samples(mu.size(), static_cast<Eigen::Index>(count));
    for (Eigen::Index k = 0; k < samples.cols(); ++k) {
        for (Eigen::Index i = 0; i < samples.rows(); ++i) {
            samples(i, k) = mu[i] + sigma * rng.normal();
        }
    }
    return samples;
}

/// K directions uniform on the unit sphere in R^d (normalized Gaussian draws).
inline Matrix sample_unit_sphere(std::size_t dimension, std::size_t count, RngStream& rng)
{
    if (dimension == 0) {
        throw InvalidParameter("sample_unit_sphere: dimension must be positive");
    }
    if (count == 0) {
        throw InvalidParameter("sample_unit_sphere: sample count must be positive");
    }
    Matrix dirs(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(count));
    for (Eigen::Index k = 0; k < dirs.cols(); ++k) {
        double norm = 0.0;
        // A zero draw has probability zero, but redraw rather than divide by it.
        while (norm == 0.0) {
            for (Eigen::Index i = 0; i < dirs.rows(); ++i) {
                dirs(i, k) = rng.normal();
            }
            norm = dirs.col(k).norm();
        }
        dirs.col(k) /= norm;
    }
    return dirs;
}

} // namespace gspto
