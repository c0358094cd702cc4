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

// Deterministic ground truth for one- and two-dimensional problems: the
// smoothed objective F_N and its gradient by tensor quadrature, argmax scans,
// the sign condition on dF/dmu_i outside the delta-band, the sufficient power
// threshold for EPGS, and the Lipschitz / variance constants.

#include "gspto/core.hpp"
#include "gspto/objectives.hpp"
#include "gspto/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace gspto {

enum class QuadratureRule
{
    simpson,        ///< composite Simpson, `nodes` odd points per dimension
    gauss_legendre, ///< composite 8-point Gauss-Legendre on `nodes` panels
};

struct QuadratureGrid
{
    /// Initial resolution per dimension; refinement doubles it.
    std::size_t nodes = 401;
    QuadratureRule rule = QuadratureRule::simpson;
    /// Integration window is mu +- truncation * sigma, clipped to the domain box.
    double truncation = 8.0;
    /// Relative change between successive refinements that counts as converged.
    double rtol = 1e-10;
    /// Ceiling on the per-dimension resolution before giving up.
    std::size_t max_nodes_1d = (1u << 20) + 1;
    std::size_t max_nodes_2d = 4097;
    /// Put a panel edge at each coordinate of the known optimum. Peaks such as
    /// Ackley's are cusps, which stall refinement when they fall mid-panel.
    bool split_at_optimum = true;
    /// Explicit per-dimension intervals; overrides the window when set.
    std::optional<std::vector<std::pair<double, double>>> bounds;

    void validate() const
    {
        if (rule == QuadratureRule::simpson && (nodes < 3 || nodes % 2 == 0)) {
            throw InvalidParameter("Simpson grid needs an odd node count >= 3");
        }
        if (rule == QuadratureRule::gauss_legendre && nodes < 1) {
            throw InvalidParameter("Gauss-Legendre grid needs at least one panel");
        }
        if (!(truncation > 0.0) || !(rtol > 0.0)) {
            throw InvalidParameter("quadrature truncation and tolerance must be positive");
        }
    }
};

/// F_N(mu) together with E[(x - mu) f_N(x)] (no 1/sigma^2 factor).
struct SmoothedValue
{
    double value = 0.0;
    Vector gradient;
    std::size_t nodes = 0; ///< per-dimension resolution that converged
};

namespace detail {

struct Rule1D
{
    std::vector<double> x;
    std::vector<double> w;
};

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
inline Rule1D gauss_legendre_reference(std::size_t n)
{
    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * double(k) - 1.0) * z * p1 - (double(k) - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            dp = double(n) * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        r.x[i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
}

inline Rule1D make_panel_rule(QuadratureRule rule, std::size_t nodes, double lo, double hi)
{
    Rule1D r;
    if (!(hi > lo)) {
        return r;
    }
    if (rule == QuadratureRule::simpson) {
        const double h = (hi - lo) / double(nodes - 1);
        r.x.resize(nodes);
        r.w.resize(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            r.x[i] = (i + 1 == nodes) ? hi : lo + h * double(i);
            const double c = (i == 0 || i + 1 == nodes) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            r.w[i] = c * h / 3.0;
        }
        return r;
    }
    static const Rule1D ref = gauss_legendre_reference(8);
    const double panel = (hi - lo) / double(nodes);
    r.x.reserve(nodes * ref.x.size());
    r.w.reserve(nodes * ref.x.size());
    for (std::size_t p = 0; p < nodes; ++p) {
        const double a = lo + panel * double(p);
        for (std::size_t j = 0; j < ref.x.size(); ++j) {
            r.x.push_back(a + 0.5 * panel * (ref.x[j] + 1.0));
            r.w.push_back(0.5 * panel * ref.w[j]);
        }
    }
    return r;
}

/// Rule on [lo, hi] with a panel edge at every breakpoint inside the
/// interval. Each piece is graded toward its breakpoint ends with
/// x = a + (b - a) t^3, which turns a cusp there into a smooth integrand for
/// the underlying rule. The resolution is shared out by piece length.
inline Rule1D make_rule(QuadratureRule rule, std::size_t nodes, double lo, double hi,
                        const std::vector<double>& breakpoints = {})
{
    std::vector<double> cuts;
    for (double b : breakpoints) {
        if (b > lo && b < hi) {
            cuts.push_back(b);
        }
    }
    if (cuts.empty() || !(hi > lo)) {
        return make_panel_rule(rule, nodes, lo, hi);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> edges{lo};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(hi);

    constexpr double grade = 3.0;
    Rule1D r;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p];
        const double b = edges[p + 1];
        const double share = (b - a) / (hi - lo);
        std::size_t n = 0;
        if (rule == QuadratureRule::simpson) {
            n = static_cast<std::size_t>(std::ceil(share * double(nodes - 1) / 2.0)) * 2 + 1;
        } else {
            n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(share * double(nodes))));
        }
        const bool at_left = p > 0;                  // a is a breakpoint
        const bool at_right = p + 2 < edges.size(); // b is a breakpoint
        const Rule1D unit = make_panel_rule(rule, n, 0.0, 1.0);
        for (std::size_t j = 0; j < unit.x.size(); ++j) {
            const double t = unit.x[j];
            double x = 0.0;
            double jac = 0.0;
            if (at_left && at_right) {
                // Grade toward both ends: u in [-1, 1], x = mid + half * u^3.
                const double u = 2.0 * t - 1.0;
                x = 0.5 * (a + b) + 0.5 * (b - a) * u * u * u;
                jac = 0.5 * (b - a) * grade * u * u * 2.0;
            } else if (at_left) {
                x = a + (b - a) * t * t * t;
                jac = (b - a) * grade * t * t;
            } else {
                const double s = 1.0 - t;
                x = b - (b - a) * s * s * s;
                jac = (b - a) * grade * s * s;
            }
            r.x.push_back(x);
            r.w.push_back(unit.w[j] * jac);
        }
    }
    return r;
}

inline std::size_t refine(QuadratureRule rule, std::size_t nodes)
{
    return rule == QuadratureRule::simpson ? 2 * nodes - 1 : 2 * nodes;
}

inline std::pair<double, double> window(const Objective& objective, const QuadratureGrid& grid, double center,
                                        double sigma, std::size_t dim)
{
    if (grid.bounds) {
        return (*grid.bounds)[dim];
    }
    const double m = objective.box_half_width();
    return {std::max(-m, center - grid.truncation * sigma), std::min(m, center + grid.truncation * sigma)};
}

inline SmoothedValue integrate_once(const Objective& objective, const Vector& mu, double sigma,
                                    const TransformMode& mode, const QuadratureGrid& grid, std::size_t nodes)
{
    const auto d = objective.dimension();
    SmoothedValue out;
    out.gradient = Vector::Zero(static_cast<Eigen::Index>(d));
    out.nodes = nodes;
    const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
    const double norm1 = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);

    std::vector<Rule1D> rules;
    for (std::size_t i = 0; i < d; ++i) {
        const auto [lo, hi] = window(objective, grid, mu[static_cast<Eigen::Index>(i)], sigma, i);
        std::vector<double> breaks;
        if (grid.split_at_optimum && objective.known_optimum()) {
            breaks.push_back((*objective.known_optimum())[static_cast<Eigen::Index>(i)]);
        }
        rules.push_back(make_rule(grid.rule, nodes, lo, hi, breaks));
        if (rules.back().x.empty()) {
            return out; // window misses the domain entirely
        }
    }

    auto weight_at = [&](const Vector& x) {
        if (!objective.in_domain(x)) {
            return 0.0;
        }
        return transform(objective(x), true, mode);
    };

    if (d == 1) {
        Vector x(1);
        for (std::size_t a = 0; a < rules[0].x.size(); ++a) {
            x[0] = rules[0].x[a];
            const double dx = x[0] - mu[0];
            const double kernel = norm1 * std::exp(-dx * dx * inv_two_var);
            const double v = rules[0].w[a] * kernel * weight_at(x);
            out.value += v;
            out.gradient[0] += dx * v;
        }
        return out;
    }

    Vector x(2);
    for (std::size_t a = 0; a < rules[0].x.size(); ++a) {
        x[0] = rules[0].x[a];
        const double dx0 = x[0] - mu[0];
        const double k0 = norm1 * std::exp(-dx0 * dx0 * inv_two_var) * rules[0].w[a];
        for (std::size_t b = 0; b < rules[1].x.size(); ++b) {
            x[1] = rules[1].x[b];
            const double dx1 = x[1] - mu[1];
            const double k1 = norm1 * std::exp(-dx1 * dx1 * inv_two_var) * rules[1].w[b];
            const double v = k0 * k1 * weight_at(x);
            out.value += v;
            out.gradient[0] += dx0 * v;
            out.gradient[1] += dx1 * v;
        }
    }
    return out;
}

inline bool converged(const SmoothedValue& coarse, const SmoothedValue& fine, double sigma, double rtol)
{
    const double scale = std::abs(fine.value);
    if (std::abs(fine.value - coarse.value) > rtol * scale) {
        return false;
    }
    const double grad_scale = std::max(fine.gradient.lpNorm<Eigen::Infinity>(), sigma * scale);
    return (fine.gradient - coarse.gradient).lpNorm<Eigen::Infinity>() <= rtol * grad_scale;
}

inline void require_oracle_dimension(const Objective& objective)
{
    if (objective.dimension() < 1 || objective.dimension() > 2) {
        throw InvalidParameter("quadrature oracle supports d = 1 or d = 2 only, got d = " +
                               std::to_string(objective.dimension()));
    }
}

} // namespace detail

/// F_N(mu, sigma) and its paper-convention gradient, refined until stable.
inline SmoothedValue smoothed_objective(const Objective& objective, const Vector& mu, double sigma,
                                        const TransformMode& mode, const QuadratureGrid& grid = {})
{
    detail::require_oracle_dimension(objective);
    grid.validate();
    mode.validate();
    if (static_cast<std::size_t>(mu.size()) != objective.dimension()) {
        throw InvalidInput("quadrature: mu has the wrong dimension");
    }
    if (!(sigma > 0.0)) {
        throw InvalidParameter("quadrature: sigma must be positive");
    }
    const std::size_t cap = objective.dimension() == 1 ? grid.max_nodes_1d : grid.max_nodes_2d;
    std::size_t nodes = grid.nodes;
    SmoothedValue coarse = detail::integrate_once(objective, mu, sigma, mode, grid, nodes);
    while (true) {
        const std::size_t next = detail::refine(grid.rule, nodes);
        if (next > cap) {
            const SmoothedValue fine = detail::integrate_once(objective, mu, sigma, mode, grid, nodes);
            throw QuadratureError("quadrature refinement did not converge", coarse.value, fine.value);
        }
        SmoothedValue fine = detail::integrate_once(objective, mu, sigma, mode, grid, next);
        if (detail::converged(coarse, fine, sigma, grid.rtol)) {
            return fine;
        }
        coarse = std::move(fine);
        nodes = next;
    }
}

inline double quadrature_F(const Objective& objective, const Vector& mu, double sigma, const TransformMode& mode,
                           const QuadratureGrid& grid = {})
{
    return smoothed_objective(objective, mu, sigma, mode, grid).value;
}

/// E[(x - mu) f_N(x)], i.e. sigma^2 times the derivative of F_N in mu.
inline Vector quadrature_grad_F(const Objective& objective, const Vector& mu, double sigma,
                                const TransformMode& mode, const QuadratureGrid& grid = {})
{
    return smoothed_objective(objective, mu, sigma, mode, grid).gradient;
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

struct ScanBox
{
    Vector lo;
    Vector hi;
};

namespace detail {

/// Lexicographic grid lo, lo + step, ..., up to hi (inclusive within rounding).
inline std::vector<std::vector<double>> axis_points(const ScanBox& box, double step)
{
    std::vector<std::vector<double>> axes;
    for (Eigen::Index i = 0; i < box.lo.size(); ++i) {
        if (!(box.hi[i] >= box.lo[i])) {
            throw InvalidParameter("scan box is empty along dimension " + std::to_string(i));
        }
        const auto count = static_cast<std::size_t>(std::floor((box.hi[i] - box.lo[i]) / step + 1e-9)) + 1;
        std::vector<double> axis(count);
        for (std::size_t j = 0; j < count; ++j) {
            axis[j] = box.lo[i] + step * double(j);
        }
        axes.push_back(std::move(axis));
    }
    return axes;
}

template <typename Visit>
void for_each_grid_point(const std::vector<std::vector<double>>& axes, Visit&& visit)
{
    Vector mu(static_cast<Eigen::Index>(axes.size()));
    if (axes.size() == 1) {
        for (double a : axes[0]) {
            mu[0] = a;
            visit(mu);
        }
        return;
    }
    for (double a : axes[0]) {
        for (double b : axes[1]) {
            mu[0] = a;
            mu[1] = b;
            visit(mu);
        }
    }
}

} // namespace detail

/// Grid maximizer of F_N over the scan box; ties go to the lexicographically smallest point.
inline Vector argmax_F_scan(const Objective& objective, double sigma, const TransformMode& mode,
                            const QuadratureGrid& grid, const ScanBox& box, double step)
{
    detail::require_oracle_dimension(objective);
    if (static_cast<std::size_t>(box.lo.size()) != objective.dimension() || box.hi.size() != box.lo.size()) {
        throw InvalidParameter("scan box dimension does not match the objective");
    }
    if (!(step > 0.0)) {
        throw InvalidParameter("scan step must be positive");
    }
    const auto axes = detail::axis_points(box, step);
    Vector best;
    double best_value = -std::numeric_limits<double>::infinity();
    detail::for_each_grid_point(axes, [&](const Vector& mu) {
        const double value = quadrature_F(objective, mu, sigma, mode, grid);
        if (best.size() == 0 || value > best_value) {
            best_value = value;
            best = mu;
        }
    });
    return best;
}

struct SignViolation
{
    Vector mu;
    std::size_t coordinate = 0;
    double derivative = 0.0;
};

struct SignReport
{
    bool ok = true;
    std::size_t points = 0;      ///< grid points visited
    std::size_t constrained = 0; ///< (point, coordinate) pairs outside the delta-band
    std::vector<SignViolation> violations;
};

/**
 * Checks that dF_N/dmu_i > 0 for mu_i < x*_i - delta and < 0 for
 * mu_i > x*_i + delta on a grid over |mu|_inf <= M. Inside the band there is
 * nothing to check.
 */
inline SignReport check_sign_condition(const Objective& objective, double sigma, const TransformMode& mode,
                                       double delta, double scan_radius, const QuadratureGrid& grid = {},
                                       std::size_t points_per_dim = 401)
{
    detail::require_oracle_dimension(objective);
    if (!objective.known_optimum()) {
        throw InvalidParameter("sign check needs a known optimum");
    }
    if (!(delta > 0.0) || !(scan_radius > 0.0) || points_per_dim < 2) {
        throw InvalidParameter("sign check needs delta > 0, M > 0 and at least two grid points");
    }
    const Vector& xstar = *objective.known_optimum();
    const auto d = static_cast<Eigen::Index>(objective.dimension());
    for (Eigen::Index i = 0; i < d; ++i) {
        Vector corner = xstar;
        for (double s : {-delta, delta}) {
            corner[i] = xstar[i] + s;
            if (!objective.in_domain(corner)) {
                throw InvalidParameter("the delta-box around x* must lie inside S");
            }
        }
    }

    const double step = 2.0 * scan_radius / double(points_per_dim - 1);
    ScanBox box{Vector::Constant(d, -scan_radius), Vector::Constant(d, scan_radius)};
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(d));
    for (auto& axis : axes) {
        axis.resize(points_per_dim);
        for (std::size_t j = 0; j < points_per_dim; ++j) {
            axis[j] = (j + 1 == points_per_dim) ? scan_radius : -scan_radius + step * double(j);
        }
    }

    SignReport report;
    detail::for_each_grid_point(axes, [&](const Vector& mu) {
        ++report.points;
        std::optional<Vector> gradient;
        for (Eigen::Index i = 0; i < d; ++i) {
            const bool below = mu[i] < xstar[i] - delta;
            const bool above = mu[i] > xstar[i] + delta;
            if (!below && !above) {
                continue;
            }
            ++report.constrained;
            if (!gradient) {
                gradient = quadrature_grad_F(objective, mu, sigma, mode, grid);
            }
            const double g = (*gradient)[i];
            if ((below && !(g > 0.0)) || (above && !(g < 0.0))) {
                report.violations.push_back({mu, static_cast<std::size_t>(i), g});
            }
        }
    });
    report.ok = report.violations.empty();
    return report;
}

// ---------------------------------------------------------------------------
// Power threshold for EPGS
// ---------------------------------------------------------------------------

struct ThresholdOptions
{
    /// Grid spacing used for the sup over |x - x*| >= delta.
    double scan_step = 1e-4;
    /// Number of radii below delta tried when picking delta'.
    std::size_t radius_steps = 2000;
    /// Directions per shell in 2-D.
    std::size_t directions = 720;
    /// Centre the ball-mass kernel on x* instead of the origin.
    bool centered_kernel = false;
};

struct ThresholdReport
{
    double threshold = 0.0; ///< N_{delta, sigma, M}
    double f_star = 0.0;
    double v_delta = 0.0;     ///< sup f outside the delta-ball
    double d_delta = 0.0;     ///< (V_delta + f*) / 2
    double delta_prime = 0.0; ///< radius on which f >= D_delta throughout
    double ball_mass = 0.0;   ///< V(delta', d, sigma)
    double log_argument = 0.0;
};

namespace detail {

/// V(delta', d, sigma) = (2 pi)^{-d/2} sigma^{-(d+2)} * integral over B(x*; delta') of exp(-|x - c|^2 / sigma^2),
/// c = 0 (literal) or c = x* (centered).
inline double ball_mass(const Vector& xstar, double radius, double sigma, bool centered)
{
    const auto d = xstar.size();
    const double prefactor = std::pow(2.0 * std::numbers::pi, -0.5 * double(d)) * std::pow(sigma, -double(d + 2));
    const Vector c = centered ? xstar : Vector::Zero(d);
    if (d == 1) {
        const double a = (xstar[0] - radius - c[0]) / sigma;
        const double b = (xstar[0] + radius - c[0]) / sigma;
        return prefactor * 0.5 * std::sqrt(std::numbers::pi) * sigma * (std::erf(b) - std::erf(a));
    }
    // Polar coordinates about x*: Simpson in rho, trapezoid (spectral for periodic) in theta.
    constexpr std::size_t n_rho = 401;
    constexpr std::size_t n_theta = 512;
    const double h = radius / double(n_rho - 1);
    double total = 0.0;
    for (std::size_t i = 0; i < n_rho; ++i) {
        const double rho = h * double(i);
        const double wr = ((i == 0 || i + 1 == n_rho) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0)) * h / 3.0;
        double ring = 0.0;
        for (std::size_t j = 0; j < n_theta; ++j) {
            const double theta = 2.0 * std::numbers::pi * double(j) / double(n_theta);
            const double x0 = xstar[0] + rho * std::cos(theta) - c[0];
            const double x1 = xstar[1] + rho * std::sin(theta) - c[1];
            ring += std::exp(-(x0 * x0 + x1 * x1) / (sigma * sigma));
        }
        total += wr * rho * ring * (2.0 * std::numbers::pi / double(n_theta));
    }
    return prefactor * total;
}

/// Points x*+r u over the shell of radius r (two in 1-D, `directions` in 2-D).
template <typename Visit>
void for_each_shell_point(const Vector& xstar, double r, std::size_t directions, Visit&& visit)
{
    Vector x = xstar;
    if (xstar.size() == 1) {
        for (double s : {-1.0, 1.0}) {
            x[0] = xstar[0] + s * r;
            visit(x);
        }
        return;
    }
    for (std::size_t j = 0; j < directions; ++j) {
        const double theta = 2.0 * std::numbers::pi * double(j) / double(directions);
        x[0] = xstar[0] + r * std::cos(theta);
        x[1] = xstar[1] + r * std::sin(theta);
        visit(x);
    }
}

} // namespace detail

/**
 * Sufficient EPGS power for the sign condition on |mu| <= M:
 *
 *   N = max{0, ln( sqrt(pi/2) (delta - delta') e^{-M^2/sigma^2} V(delta', d, sigma) ) / (V_delta - D_delta)}.
 *
 * V_delta comes from a grid scan of S outside the delta-ball (plus the ball
 * boundary itself); delta' is the largest tested radius below delta on which
 * every shell keeps f >= D_delta, which errs on the small side.
 */
inline ThresholdReport estimate_threshold_N(const Objective& objective, double sigma, double delta,
                                            double scan_radius, const ThresholdOptions& options = {})
{
    detail::require_oracle_dimension(objective);
    if (!objective.known_optimum()) {
        throw InvalidParameter("threshold estimate needs a known optimum");
    }
    if (!std::isfinite(objective.box_half_width())) {
        throw InvalidParameter("threshold estimate needs a bounded domain box");
    }
    if (!(sigma > 0.0) || !(delta > 0.0) || !(scan_radius > 0.0) || !(options.scan_step > 0.0)) {
        throw InvalidParameter("threshold estimate needs positive sigma, delta, M and scan step");
    }
    const Vector& xstar = *objective.known_optimum();
    const auto d = xstar.size();

    ThresholdReport report;
    report.f_star = objective(xstar);

    // V_delta: sup over S minus the open delta-ball.
    double v_delta = -std::numeric_limits<double>::infinity();
    auto consider = [&](const Vector& x) {
        if (objective.in_domain(x) && (x - xstar).norm() >= delta) {
            v_delta = std::max(v_delta, objective(x));
        }
    };
    const double m = objective.box_half_width();
    const auto axes = detail::axis_points({Vector::Constant(d, -m), Vector::Constant(d, m)}, options.scan_step);
    detail::for_each_grid_point(axes, consider);
    detail::for_each_shell_point(xstar, delta, options.directions, consider);
    if (!std::isfinite(v_delta)) {
        throw AssumptionViolation("no domain point lies at distance >= delta from x*");
    }
    report.v_delta = v_delta;
    if (!(v_delta < report.f_star)) {
        throw AssumptionViolation("sup of f outside the delta-ball (" + std::to_string(v_delta) +
                                  ") is not below f(x*) (" + std::to_string(report.f_star) + ")");
    }
    report.d_delta = 0.5 * (v_delta + report.f_star);

    // delta': grow the radius while every shell stays at or above D_delta.
    const double dr = delta / double(options.radius_steps);
    double delta_prime = 0.0;
    for (std::size_t j = 1; j < options.radius_steps; ++j) {
        const double r = dr * double(j);
        bool holds = true;
        detail::for_each_shell_point(xstar, r, options.directions, [&](const Vector& x) {
            if (!objective.in_domain(x) || objective(x) < report.d_delta) {
                holds = false;
            }
        });
        if (!holds) {
            break;
        }
        delta_prime = r;
    }
    if (!(delta_prime > 0.0)) {
        throw AssumptionViolation("could not resolve a radius delta' > 0 with f >= D_delta; refine radius_steps");
    }
    report.delta_prime = delta_prime;
    report.ball_mass = detail::ball_mass(xstar, delta_prime, sigma, options.centered_kernel);

    report.log_argument = 0.5 * std::log(std::numbers::pi / 2.0) + std::log(delta - delta_prime) -
                          scan_radius * scan_radius / (sigma * sigma) + std::log(report.ball_mass);
    report.threshold = std::max(0.0, report.log_argument / (v_delta - report.d_delta));
    return report;
}

// ---------------------------------------------------------------------------
// Theory constants
// ---------------------------------------------------------------------------

struct TheoryConstants
{
    double lipschitz = 0.0;     ///< L = f_N(x*)
    double variance_bound = 0.0; ///< G = d sigma^2 f_N(x*)^2
    std::optional<double> threshold;
};

inline TheoryConstants theory_constants(const Objective& objective, const TransformMode& mode, double sigma)
{
    const auto f_star = objective.known_max_value();
    if (!f_star) {
        throw ConfigError("theory constants need the objective's known maximum value");
    }
    if (!(sigma > 0.0)) {
        throw InvalidParameter("theory constants need sigma > 0");
    }
    TheoryConstants c;
    c.lipschitz = transform(*f_star, true, mode);
    c.variance_bound = double(objective.dimension()) * sigma * sigma * c.lipschitz * c.lipschitz;
    return c;
}

} // namespace gspto
