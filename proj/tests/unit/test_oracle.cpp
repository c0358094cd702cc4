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


#include "gspto/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gspto;

namespace {

/// exp(N f) smoothed against N(mu, sigma^2 I) for f = -|x|^2 / 2, one coordinate at a time.
double closed_form_F(const Vector& mu, double sigma, double n)
{
    const double a = 1.0 + n * sigma * sigma;
    double value = 1.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        value *= std::exp(-n * mu[i] * mu[i] / (2.0 * a)) / std::sqrt(a);
    }
    return value;
}

/// E[(x - mu) exp(N f(x))]: differentiate the closed form in mu and multiply by sigma^2.
Vector closed_form_moment(const Vector& mu, double sigma, double n)
{
    const double a = 1.0 + n * sigma * sigma;
    return -(sigma * sigma * n / a) * closed_form_F(mu, sigma, n) * mu;
}

Objective two_log_1d() { return two_log(make_vector({-0.5}), make_vector({0.5}), 1.0); }

} // namespace

TEST(QuadratureF, QuadraticAtOrigin)
{
    const double f = quadrature_F(gaussian_quadratic(1), make_vector({0.0}), 1.0, epgs(1));
    EXPECT_NEAR(f, 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(QuadratureF, QuadraticAtOne)
{
    const double f = quadrature_F(gaussian_quadratic(1), make_vector({1.0}), 1.0, epgs(1));
    EXPECT_NEAR(f, std::exp(-0.25) / std::sqrt(2.0), 1e-6);
}

TEST(QuadratureF, ZeroPowerGivesGaussianMass)
{
    const Objective f("positive", 1, [](const Vector& x) { return 1.0 + x[0] * x[0]; });
    EXPECT_NEAR(quadrature_F(f, make_vector({0.3}), 0.7, pgs(0)), 1.0, 1e-9);
}

TEST(QuadratureGrad, EvenObjectiveGivesZero)
{
    const Objective f("even", 1, [](const Vector& x) { return std::cos(3.0 * (x[0] - 0.4)); });
    const Vector g = quadrature_grad_F(f, make_vector({0.4}), 0.6, epgs(1.5));
    EXPECT_LT(g.norm(), 1e-8);
}

TEST(QuadratureGrad, QuadraticAtOne)
{
    const Vector g = quadrature_grad_F(gaussian_quadratic(1), make_vector({1.0}), 1.0, epgs(1));
    EXPECT_NEAR(g[0], -0.5 * std::exp(-0.25) / std::sqrt(2.0), 1e-6);
    EXPECT_NEAR(g[0], -0.27536, 5e-5);
}

TEST(QuadratureGrad, MatchesFiniteDifferenceOfF)
{
    const Objective f = ackley();
    const Vector mu = make_vector({0.6, -0.3});
    const double sigma = 0.8;
    const auto mode = epgs(0.5);
    const Vector g = quadrature_grad_F(f, mu, sigma, mode);
    const double h = 1e-4;
    for (Eigen::Index i = 0; i < 2; ++i) {
        Vector up = mu;
        Vector dn = mu;
        up[i] += h;
        dn[i] -= h;
        const double fd = (quadrature_F(f, up, sigma, mode) - quadrature_F(f, dn, sigma, mode)) / (2.0 * h);
        EXPECT_NEAR(g[i] / (sigma * sigma), fd, 1e-6 * (1.0 + std::abs(fd)));
    }
}

TEST(QuadratureClosedForm, OneDimensionalFamily)
{
    const Objective f = gaussian_quadratic(1);
    for (double n : {1.0, 2.0}) {
        for (double sigma : {0.5, 1.0}) {
            for (double m = -3.0; m <= 3.0; m += 0.75) {
                const Vector mu = make_vector({m});
                const auto sv = smoothed_objective(f, mu, sigma, epgs(n));
                ASSERT_NEAR(sv.value, closed_form_F(mu, sigma, n), 1e-6) << m << ' ' << sigma << ' ' << n;
                ASSERT_NEAR(sv.gradient[0], closed_form_moment(mu, sigma, n)[0], 1e-6);
            }
        }
    }
}

TEST(QuadratureClosedForm, TwoDimensionalFamily)
{
    const Objective f = gaussian_quadratic(2);
    for (double n : {1.0, 2.0}) {
        for (double sigma : {0.5, 1.0}) {
            for (const Vector& mu : {make_vector({-3.0, 1.0}), make_vector({0.5, -0.3}), make_vector({2.0, 3.0})}) {
                const auto sv = smoothed_objective(f, mu, sigma, epgs(n));
                ASSERT_NEAR(sv.value, closed_form_F(mu, sigma, n), 1e-6);
                const Vector m = closed_form_moment(mu, sigma, n);
                ASSERT_NEAR(sv.gradient[0], m[0], 1e-6);
                ASSERT_NEAR(sv.gradient[1], m[1], 1e-6);
            }
        }
    }
}

TEST(QuadratureGrid, DoublingNodesIsStable)
{
    struct Case
    {
        Objective f;
        Vector mu;
        double sigma;
        TransformMode mode;
    };
    const std::vector<Case> cases{
        {gaussian_quadratic(1), make_vector({1.0}), 1.0, epgs(1)},
        {two_log_1d(), make_vector({0.1}), 0.5, epgs(3)},
        {ackley(), make_vector({0.5, 0.5}), 1.0, epgs(1)},
        {two_log(2).shifted(10), make_vector({0.0, 0.2}), 0.5, pgs(2)},
    };
    for (const auto& c : cases) {
        QuadratureGrid coarse;
        QuadratureGrid fine;
        fine.nodes = 2 * coarse.nodes - 1;
        const auto a = smoothed_objective(c.f, c.mu, c.sigma, c.mode, coarse);
        const auto b = smoothed_objective(c.f, c.mu, c.sigma, c.mode, fine);
        EXPECT_LT(std::abs(a.value - b.value), 1e-8 * std::abs(b.value)) << c.f.name();
        EXPECT_LT((a.gradient - b.gradient).norm(), 1e-8 * std::max(b.gradient.norm(), std::abs(b.value)))
            << c.f.name();
    }
}

TEST(QuadratureGrid, GaussLegendreAgrees)
{
    QuadratureGrid gl;
    gl.rule = QuadratureRule::gauss_legendre;
    const Vector mu = make_vector({0.7});
    const double a = quadrature_F(gaussian_quadratic(1), mu, 0.5, epgs(2), gl);
    EXPECT_NEAR(a, closed_form_F(mu, 0.5, 2.0), 1e-8);
}

TEST(Quadrature, RejectsHighDimension)
{
    EXPECT_THROW(quadrature_F(gaussian_quadratic(3), Vector::Zero(3), 1.0, epgs(1)), InvalidParameter);
}

TEST(ArgmaxScan, MovesTowardGlobalPeakAsPowerGrows)
{
    const Objective f = two_log_1d();
    const ScanBox box{make_vector({-1.0}), make_vector({1.0})};
    double previous = INFINITY;
    for (double n : {1.0, 2.0, 4.0, 8.0}) {
        const Vector m = argmax_F_scan(f, 0.5, epgs(n), {}, box, 0.01);
        const double dist = std::abs(m[0] + 0.5);
        EXPECT_LE(dist, previous + 1e-12) << "N=" << n;
        previous = dist;
    }
}

TEST(ArgmaxScan, SymmetricPeaksSmallPowerCentres)
{
    const Objective f(
        "bimodal", 1,
        [](const Vector& x) { return -std::log((x[0] - 0.5) * (x[0] - 0.5) + 0.1) - std::log((x[0] + 0.5) * (x[0] + 0.5) + 0.1); },
        3.0);
    const ScanBox box{make_vector({-1.0}), make_vector({1.0})};
    const Vector m = argmax_F_scan(f, 1.0, epgs(0.5), {}, box, 0.01);
    EXPECT_LT(std::abs(m[0]), 0.05);
}

TEST(SignCondition, ThresholdPowerPasses)
{
    const Objective f = two_log_1d();
    const auto th = estimate_threshold_N(f, 0.5, 0.1, 1.0);
    ASSERT_TRUE(std::isfinite(th.threshold));
    const auto rep = check_sign_condition(f, 0.5, epgs(th.threshold), 0.1, 1.0, {}, 401);
    EXPECT_TRUE(rep.ok);
    EXPECT_TRUE(rep.violations.empty());
    EXPECT_EQ(rep.points, 401u);
}

TEST(SignCondition, ZeroPowerOnAsymmetricObjectiveFails)
{
    // With N = 0 the smoothed value is the Gaussian mass of S, peaked at the
    // centre of S, not at x*.
    const Objective f = two_log_1d();
    const auto rep = check_sign_condition(f, 0.5, epgs(0), 0.1, 1.0, {}, 101);
    EXPECT_FALSE(rep.ok);
    EXPECT_FALSE(rep.violations.empty());
}

TEST(SignCondition, BandIsUnconstrained)
{
    const Objective f = two_log_1d();
    const auto rep = check_sign_condition(f, 0.5, epgs(10), 0.1, 1.0, {}, 401);
    // Grid step 0.005: mu in [-0.6, -0.4] gives about 41 unconstrained points.
    EXPECT_LT(rep.constrained, rep.points);
    EXPECT_GE(rep.points - rep.constrained, 39u);
}

TEST(Threshold, NonNegativeAndMonotoneInRadius)
{
    const Objective f = two_log_1d();
    const auto small = estimate_threshold_N(f, 0.5, 0.1, 0.5);
    const auto large = estimate_threshold_N(f, 0.5, 0.1, 1.0);
    EXPECT_GE(small.threshold, 0.0);
    EXPECT_GE(large.threshold, small.threshold);
}

TEST(Threshold, FlatObjectiveViolatesAssumption)
{
    Objective f("flat", 1, [](const Vector&) { return 1.0; }, 1.0);
    f.with_optimum(make_vector({0.0}));
    EXPECT_THROW(estimate_threshold_N(f, 0.5, 0.1, 1.0), AssumptionViolation);
}

TEST(TheoryConstants, EpgsZeroMaximum)
{
    const auto c = theory_constants(gaussian_quadratic(3), epgs(7), 0.5);
    EXPECT_EQ(c.lipschitz, 1.0);
    EXPECT_DOUBLE_EQ(c.variance_bound, 3 * 0.25);
}

TEST(TheoryConstants, PgsArithmetic)
{
    Objective f("two", 2, [](const Vector& x) { return 2.0 - x.squaredNorm(); });
    f.with_optimum(Vector::Zero(2));
    const auto c = theory_constants(f, pgs(3), 1.0);
    EXPECT_DOUBLE_EQ(c.lipschitz, 8.0);
    EXPECT_DOUBLE_EQ(c.variance_bound, 128.0);
    const auto c2 = theory_constants(f, pgs(3), 2.0);
    EXPECT_DOUBLE_EQ(c2.variance_bound, 4.0 * c.variance_bound);
}

TEST(TheoryConstants, MissingMaximumIsConfigError)
{
    const Objective f("unknown", 1, [](const Vector& x) { return x[0]; });
    EXPECT_THROW(theory_constants(f, epgs(1), 1.0), ConfigError);
}
