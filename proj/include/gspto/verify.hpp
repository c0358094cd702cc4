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

// Numerical checks of the theory, shared by `gspto verify` and the
// acceptance binary. Each check is deterministic: fixed seeds, fixed grids.

#include "gspto/estimators.hpp"
#include "gspto/objectives.hpp"
#include "gspto/optimizers.hpp"
#include "gspto/oracle.hpp"
#include "gspto/transforms.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace gspto {

struct VerifyOutcome
{
    std::string name;
    bool passed = true;
    std::vector<std::string> details;

    explicit VerifyOutcome(std::string n) : name(std::move(n)) {}

    void note(bool ok, const std::string& line)
    {
        passed = passed && ok;
        details.push_back((ok ? "ok    " : "FAIL  ") + line);
    }

    void info(const std::string& line) { details.push_back("info  " + line); }
};

namespace detail {

template <typename... Args>
std::string format(const char* fmt, Args... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

/// Gaussian-quadratic closed forms for f = -|x|^2 / 2 under EPGS power N:
/// F(mu) = prod_i (1 + N s^2)^{-1/2} exp(-N mu_i^2 / (2 (1 + N s^2))) and
/// E[(x - mu) f_N(x)] = -s^2 N mu / (1 + N s^2) F(mu).
struct QuadraticClosedForm
{
    double value;
    Vector moment;
};

inline QuadraticClosedForm quadratic_closed_form(const Vector& mu, double sigma, double n)
{
    const double a = 1.0 + n * sigma * sigma;
    double value = 1.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        value *= std::exp(-n * mu[i] * mu[i] / (2.0 * a)) / std::sqrt(a);
    }
    return {value, (-sigma * sigma * n / a * value) * mu};
}

/// Objective scaled by a constant, keeping domain and optimum.
inline Objective scaled_objective(const Objective& base, double c)
{
    Objective out(base.name() + "_scaled", base.dimension(), [base, c](const Vector& x) { return c * base(x); },
                  base.box_half_width());
    if (base.known_optimum()) {
        out.with_optimum(*base.known_optimum());
    }
    return out;
}

inline bool traces_bitwise_equal(const RunTrace& a, const RunTrace& b)
{
    if (a.records.size() != b.records.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& ra = a.records[i];
        const auto& rb = b.records[i];
        if (ra.t != rb.t || ra.mu.size() != rb.mu.size() || ra.fitness != rb.fitness || ra.grad_norm != rb.grad_norm ||
            ra.step_size != rb.step_size || ra.degenerate != rb.degenerate) {
            return false;
        }
        for (Eigen::Index k = 0; k < ra.mu.size(); ++k) {
            if (ra.mu[k] != rb.mu[k]) {
                return false;
            }
        }
    }
    return true;
}

inline bool iterates_bitwise_equal(const RunTrace& a, const RunTrace& b)
{
    if (a.records.size() != b.records.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        if (a.records[i].mu != b.records[i].mu) {
            return false;
        }
    }
    return true;
}

inline double max_iterate_gap(const RunTrace& a, const RunTrace& b)
{
    if (a.records.size() != b.records.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        gap = std::max(gap, (a.records[i].mu - b.records[i].mu).lpNorm<Eigen::Infinity>());
    }
    return gap;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Power threshold and sign condition on the 1-D two-log objective
// ---------------------------------------------------------------------------

inline VerifyOutcome verify_threshold_sign()
{
    VerifyOutcome out{"power threshold and sign condition (1-D two-log, sigma=0.5, delta=0.1, M=1)"};
    const double sigma = 0.5;
    const double delta = 0.1;
    const double m = 1.0;
    const Objective obj = two_log(1, m);
    try {
        const ThresholdReport rep = estimate_threshold_N(obj, sigma, delta, m);
        out.info(detail::format("V_delta=%.6f D_delta=%.6f delta'=%.6f V=%.6g f*=%.6f", rep.v_delta, rep.d_delta,
                                rep.delta_prime, rep.ball_mass, rep.f_star));
        const double n = rep.threshold;
        out.note(std::isfinite(n), detail::format("threshold N = %.6f is finite", n));
        if (!std::isfinite(n)) {
            return out;
        }
        const SignReport sign = check_sign_condition(obj, sigma, epgs(n), delta, m, {}, 401);
        out.note(sign.ok, detail::format("sign condition on a 401-point grid: %zu constrained points, %zu violations",
                                         sign.constrained, sign.violations.size()));
        const ScanBox box{Vector::Constant(1, -m), Vector::Constant(1, m)};
        const Vector argmax = argmax_F_scan(obj, sigma, epgs(n), {}, box, 0.005);
        const double off = std::abs(argmax[0] + 0.5);
        out.note(off <= delta, detail::format("argmax of F_N at %.4f, |argmax - x*| = %.4f <= %.2f", argmax[0], off, delta));
    } catch (const Error& e) {
        out.note(false, std::string("threshold check raised: ") + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quadrature against closed forms
// ---------------------------------------------------------------------------

inline VerifyOutcome verify_closed_forms()
{
    VerifyOutcome out{"quadrature oracle vs. Gaussian-quadratic closed forms (abs tol 1e-6)"};
    struct Fixture
    {
        Vector mu;
        double sigma;
        double n;
    };
    const std::vector<Fixture> fixtures{
        {make_vector({0.0}), 1.0, 1.0},
        {make_vector({1.0}), 1.0, 1.0},
        {make_vector({-2.0}), 0.5, 3.0},
        {make_vector({0.5, -0.3}), 0.7, 2.0},
    };
    for (const auto& f : fixtures) {
        const Objective obj = gaussian_quadratic(static_cast<std::size_t>(f.mu.size()));
        try {
            const SmoothedValue q = smoothed_objective(obj, f.mu, f.sigma, epgs(f.n));
            const auto exact = detail::quadratic_closed_form(f.mu, f.sigma, f.n);
            const double value_err = std::abs(q.value - exact.value);
            const double grad_err = (q.gradient - exact.moment).lpNorm<Eigen::Infinity>();
            out.note(value_err <= 1e-6 && grad_err <= 1e-6,
                     detail::format("d=%ld mu0=%.2f sigma=%.2f N=%.1f: F=%.10f (exact %.10f), grad[0]=%.10f (exact "
                                    "%.10f), errors %.2e / %.2e",
                                    long(f.mu.size()), f.mu[0], f.sigma, f.n, q.value, exact.value, q.gradient[0],
                                    exact.moment[0], value_err, grad_err));
        } catch (const Error& e) {
            out.note(false, std::string("quadrature raised: ") + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unbiasedness
// ---------------------------------------------------------------------------

struct EstimatorFixture
{
    std::string label;
    Objective objective;
    Vector mu;
    double sigma;
    TransformMode mode;
};

inline std::vector<EstimatorFixture> unbiasedness_fixtures()
{
    return {
        {"quadratic d=1 EPGS N=1", gaussian_quadratic(1), make_vector({1.0}), 1.0, epgs(1.0, false)},
        {"quadratic d=2 EPGS N=2", gaussian_quadratic(2), make_vector({0.5, -1.0}), 0.7, epgs(2.0, false)},
        {"two-log+10 d=1 PGS N=2", two_log(1).shifted(10.0), make_vector({0.2}), 0.5, pgs(2.0, false)},
        {"ackley EPGS N=1", ackley(), make_vector({1.0, 0.5}), 1.0, epgs(1.0, false)},
        {"ackley PGS N=2", ackley(), make_vector({0.3, -0.2}), 0.5, pgs(2.0, false)},
    };
}

/// Mean of `draws` estimator evaluations (K samples each) against the oracle,
/// per coordinate within `z` standard errors.
inline VerifyOutcome verify_unbiasedness(std::size_t draws = 100000, std::size_t samples = 10, double z = 3.0)
{
    VerifyOutcome out{"estimator unbiasedness (mean of draws within 3 standard errors)"};
    std::uint64_t stream = 0;
    for (const auto& f : unbiasedness_fixtures()) {
        try {
            const Vector target = quadrature_grad_F(f.objective, f.mu, f.sigma, f.mode);
            RngStream rng(7, stream++);
            const auto d = f.mu.size();
            Vector sum = Vector::Zero(d);
            Vector sumsq = Vector::Zero(d);
            for (std::size_t i = 0; i < draws; ++i) {
                const Vector g = gspto_gradient(f.objective, f.mu, f.sigma, f.mode, samples, rng).g;
                sum += g;
                sumsq += g.cwiseProduct(g);
            }
            const Vector mean = sum / double(draws);
            const Vector var = (sumsq - double(draws) * mean.cwiseProduct(mean)) / double(draws - 1);
            double worst = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                const double se = std::sqrt(std::max(var[i], 0.0) / double(draws));
                worst = std::max(worst, std::abs(mean[i] - target[i]) / se);
            }
            out.note(worst <= z, detail::format("%s: mean[0]=%.6g oracle[0]=%.6g, worst |z| = %.2f", f.label.c_str(),
                                                mean[0], target[0], worst));
        } catch (const Error& e) {
            out.note(false, f.label + " raised: " + e.what());
        }
    }

    // ZO-SGD on a linear objective: E[g] = c exactly.
    const Vector c = make_vector({1.0, -2.0, 0.5});
    const Objective linear("linear", 3, [c](const Vector& x) { return c.dot(x); });
    RngStream rng(7, stream++);
    Vector sum = Vector::Zero(3);
    Vector sumsq = Vector::Zero(3);
    for (std::size_t i = 0; i < draws; ++i) {
        const Vector g = zo_sgd_gradient(linear, make_vector({0.3, 0.1, -0.4}), 0.5, 1, rng).g;
        sum += g;
        sumsq += g.cwiseProduct(g);
    }
    const Vector mean = sum / double(draws);
    const Vector var = (sumsq - double(draws) * mean.cwiseProduct(mean)) / double(draws - 1);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(mean[i] - c[i]) / std::sqrt(var[i] / double(draws)));
    }
    out.note(worst <= z, detail::format("ZO-SGD linear slope (1,-2,0.5): mean=(%.4f,%.4f,%.4f), worst |z| = %.2f",
                                        mean[0], mean[1], mean[2], worst));
    return out;
}

// ---------------------------------------------------------------------------
// Second-moment bound
// ---------------------------------------------------------------------------

inline VerifyOutcome verify_variance_bound(std::size_t repetitions = 10000, std::size_t samples = 10)
{
    VerifyOutcome out{"second-moment bound E|g|^2 <= d sigma^2 f_N(x*)^2"};
    const std::vector<EstimatorFixture> fixtures{
        {"quadratic d=1 EPGS N=1", gaussian_quadratic(1), make_vector({1.0}), 1.0, epgs(1.0, false)},
        {"quadratic d=2 EPGS N=3", gaussian_quadratic(2), make_vector({0.0, 0.0}), 0.5, epgs(3.0, false)},
        {"ackley PGS N=1", ackley(), make_vector({1.0, 1.0}), 1.0, pgs(1.0, false)},
        {"two-log+10 d=2 PGS N=2", two_log(2).shifted(10.0), make_vector({-0.4, -0.6}), 0.5, pgs(2.0, false)},
    };
    std::uint64_t stream = 100;
    for (const auto& f : fixtures) {
        try {
            const TheoryConstants tc = theory_constants(f.objective, f.mode, f.sigma);
            RngStream rng(11, stream++);
            double total = 0.0;
            for (std::size_t i = 0; i < repetitions; ++i) {
                const GradientEstimate est = gspto_gradient(f.objective, f.mu, f.sigma, f.mode, samples, rng);
                total += est.norm * est.norm;
            }
            const double mean = total / double(repetitions);
            out.note(mean <= tc.variance_bound, detail::format("%s: mean |g|^2 = %.6g <= G = %.6g", f.label.c_str(),
                                                               mean, tc.variance_bound));
        } catch (const Error& e) {
            out.note(false, f.label + " raised: " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Convergence inequality
// ---------------------------------------------------------------------------

struct ConvergenceTerms
{
    double lhs = 0.0; ///< sum_t alpha_t mean_s |grad F(mu_t)|^2
    double rhs = 0.0; ///< f_N(x*) - F(mu_0) + L G sum_t alpha_t^2
};

/// f = -x^2/2 on [-5, 5], EPGS, power schedule, mu_0 fixed; the true
/// gradient along each realized path comes from the quadrature oracle.
inline ConvergenceTerms convergence_terms(bool normalize, std::size_t seeds = 200, std::size_t iterations = 500,
                                          double gamma = 0.25, double power = 1.0, double sigma = 1.0,
                                          double mu0 = 2.0, std::size_t samples = 10)
{
    const Objective obj = gaussian_quadratic(1, 5.0);
    const TransformMode mode = epgs(power, false);
    OptimizerConfig cfg;
    cfg.algorithm = Algorithm::epgs;
    cfg.mode = mode;
    cfg.sigma = sigma;
    cfg.samples = samples;
    cfg.iterations = iterations;
    cfg.schedule = LearningRateSchedule::power_law(gamma);
    cfg.init = InitialPoint::at(make_vector({mu0}));
    cfg.seed = 2;
    cfg.normalize = normalize;

    std::vector<double> mean_sq(iterations, 0.0);
    for (std::size_t s = 0; s < seeds; ++s) {
        cfg.stream = s;
        const RunTrace trace = run_gspto(obj, cfg);
        for (std::size_t t = 0; t < iterations; ++t) {
            // Oracle moment E[(x - mu) f_N] carries sigma^2 relative to the true gradient.
            const Vector grad = quadrature_grad_F(obj, trace.records[t].mu, sigma, mode) / (sigma * sigma);
            mean_sq[t] += grad.squaredNorm() / double(seeds);
        }
    }
    ConvergenceTerms terms;
    for (std::size_t t = 0; t < iterations; ++t) {
        terms.lhs += cfg.schedule.at(t) * mean_sq[t];
    }
    const TheoryConstants tc = theory_constants(obj, mode, sigma);
    const double f_n_star = tc.lipschitz;
    const double f0 = quadrature_F(obj, make_vector({mu0}), sigma, mode);
    const double alpha_sq_sum = std::riemann_zeta(1.0 + 2.0 * gamma); // sum_{t>=0} (t+1)^{-(1+2 gamma)}
    terms.rhs = f_n_star - f0 + tc.lipschitz * tc.variance_bound * alpha_sq_sum;
    return terms;
}

inline VerifyOutcome verify_convergence_inequality(std::size_t seeds = 200)
{
    VerifyOutcome out{"convergence inequality (f=-x^2/2, EPGS N=1, sigma=1, gamma=0.25, T=500)"};
    try {
        const ConvergenceTerms plain = convergence_terms(false, seeds);
        out.note(plain.lhs <= plain.rhs, detail::format("update mu + alpha g over %zu seeds: lhs = %.6f <= rhs = %.6f",
                                                        seeds, plain.lhs, plain.rhs));
        const ConvergenceTerms normalized = convergence_terms(true, seeds);
        out.info(detail::format("normalized update (outside the theorem's rule): lhs = %.6f, rhs = %.6f",
                                normalized.lhs, normalized.rhs));
    } catch (const Error& e) {
        out.note(false, std::string("convergence check raised: ") + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Invariances of the normalized update
// ---------------------------------------------------------------------------

inline VerifyOutcome verify_invariances()
{
    VerifyOutcome out{"normalized-update invariances"};
    OptimizerConfig cfg;
    cfg.algorithm = Algorithm::epgs;
    cfg.mode = epgs(1.0);
    cfg.sigma = 1.0;
    cfg.samples = 100;
    cfg.iterations = 200;
    cfg.schedule = LearningRateSchedule::hyperbolic_decay(0.1);
    cfg.init = InitialPoint::gaussian(make_vector({5.0, 5.0}), 0.01);
    cfg.seed = 3;

    try {
        const Objective base = ackley();
        const RunTrace ref = run_gspto(base, cfg);
        for (double c : {-15.0, 7.5, 1000.0}) {
            const RunTrace shifted = run_gspto(base.shifted(c), cfg);
            const double gap = detail::max_iterate_gap(ref, shifted);
            out.note(gap <= 1e-9, detail::format("EPGS shift by %+g: max iterate difference %.3e <= 1e-9", c, gap));
        }

        OptimizerConfig p = cfg;
        p.algorithm = Algorithm::pgs;
        p.mode = pgs(20.0);
        const RunTrace pref = run_gspto(base, p);
        for (double c : {0.25, 8.0, 1024.0}) {
            const RunTrace scaled = run_gspto(detail::scaled_objective(base, c), p);
            out.note(detail::iterates_bitwise_equal(pref, scaled),
                     detail::format("PGS scale by %g: iterates bitwise identical", c));
        }

        for (Algorithm a : {Algorithm::pgs, Algorithm::epgs, Algorithm::zo_sgd, Algorithm::std_homotopy}) {
            OptimizerConfig q = cfg;
            q.algorithm = a;
            if (a == Algorithm::pgs) {
                q.mode = pgs(20.0);
            }
            if (a == Algorithm::std_homotopy) {
                q.sigma = 2.0;
                q.homotopy = HomotopyParams{};
            }
            const RunTrace first = run_optimizer(base, q);
            const RunTrace second = run_optimizer(base, q);
            out.note(detail::traces_bitwise_equal(first, second),
                     std::string("trace determinism for ") + to_string(a) + ": bitwise identical reruns");
        }
    } catch (const Error& e) {
        out.note(false, std::string("invariance suite raised: ") + e.what());
    }
    return out;
}

/// The oracle suite behind `gspto verify`.
inline std::vector<VerifyOutcome> verify_all()
{
    return {verify_threshold_sign(), verify_closed_forms(), verify_unbiasedness(), verify_variance_bound(),
            verify_convergence_inequality()};
}

} // namespace gspto
