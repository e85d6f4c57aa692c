#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "degree.hpp"
#include "dynamics.hpp"
#include "graph.hpp"

namespace pushpull {

namespace detail {

/// (1 - gamma x)^k evaluated in log space so large degrees stay accurate.
inline double survival_power(double gamma_x, std::int64_t k) {
    if (k == 0)
        return 1.0;
    const double base = 1.0 - gamma_x;
    if (base <= 0.0)
        return 0.0;
    return std::exp(static_cast<double>(k) * std::log1p(-gamma_x));
}

/// All roots of f on [0,1]: a uniform grid locates sign changes and exact
/// zeros, bisection then shrinks each bracket far below the requested
/// tolerance. Roots closer together than one grid cell can merge; the grid
/// default of 1e-3 is chosen so the stationarity curves here never do.
template <typename F>
std::vector<double> scan_roots(F&& f, double grid_step) {
    const auto cells = static_cast<std::int64_t>(std::lround(1.0 / grid_step));
    std::vector<double> roots;
    double x_prev = 0.0;
    double f_prev = f(0.0);
    if (f_prev == 0.0)
        roots.push_back(0.0);
    for (std::int64_t j = 1; j <= cells; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(cells);
        const double fx = f(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (f_prev != 0.0 && (f_prev < 0.0) != (fx < 0.0)) {
            double lo = x_prev, hi = x;
            double f_lo = f_prev;
            while (hi - lo > 1e-15) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((f_lo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        x_prev = x;
        f_prev = fx;
    }
    return roots;
}

}  // namespace detail

struct MeanFieldSolution {
    /// Smallest stationary infection probability in [0, 1].
    double rate = 0.0;
    /// Number of stationary points the scan located.
    int roots_found = 0;
    /// |f(rate)| at the reported root.
    double residual = 0.0;
};

/// Stationary infection probability of a degree-k node under the annealed
/// approximation in which every in-neighbor carries the same probability x:
/// beta x = [1 - (1-alpha)(1 - gamma x)^k] (1 - x). Reports the smallest
/// root. alpha = beta = 0 makes every x stationary in the k = 0 reduction
/// and the equation vacuous, so it is rejected as a domain error.
inline MeanFieldSolution solve_degree_rate(std::int64_t k, const EpidemicParams& p,
                                           double grid_step = 1e-3) {
    p.validate();
    if (k < 0)
        throw std::invalid_argument("degree must be non-negative");
    if (p.alpha == 0.0 && p.beta == 0.0)
        throw std::domain_error(
            "alpha = beta = 0 makes the stationarity equation degenerate; pick a positive "
            "pull or cure rate");
    if (!(grid_step > 0.0 && grid_step <= 0.5))
        throw std::invalid_argument("grid step must lie in (0, 0.5]");

    auto f = [&](double x) {
        return (1.0 - (1.0 - p.alpha) * detail::survival_power(p.gamma * x, k)) * (1.0 - x) -
               p.beta * x;
    };
    const std::vector<double> roots = detail::scan_roots(f, grid_step);
    if (roots.empty())
        throw std::logic_error("stationarity scan found no root in [0, 1]");
    MeanFieldSolution sol;
    sol.rate = roots.front();
    sol.roots_found = static_cast<int>(roots.size());
    sol.residual = std::abs(f(sol.rate));
    return sol;
}

/// Whole-graph counterpart with the product linearized around the average
/// degree: beta x = [1 - (1-alpha) exp(-avg_k gamma x)] (1 - x).
inline MeanFieldSolution solve_global_rate(double avg_degree, const EpidemicParams& p,
                                           double grid_step = 1e-3) {
    p.validate();
    if (!(avg_degree >= 0.0))
        throw std::invalid_argument("average degree must be non-negative");
    if (p.alpha == 0.0 && p.beta == 0.0)
        throw std::domain_error(
            "alpha = beta = 0 makes the stationarity equation degenerate; pick a positive "
            "pull or cure rate");
    if (!(grid_step > 0.0 && grid_step <= 0.5))
        throw std::invalid_argument("grid step must lie in (0, 0.5]");

    auto f = [&](double x) {
        return (1.0 - (1.0 - p.alpha) * std::exp(-avg_degree * p.gamma * x)) * (1.0 - x) -
               p.beta * x;
    };
    const std::vector<double> roots = detail::scan_roots(f, grid_step);
    if (roots.empty())
        throw std::logic_error("stationarity scan found no root in [0, 1]");
    MeanFieldSolution sol;
    sol.rate = roots.front();
    sol.roots_found = static_cast<int>(roots.size());
    sol.residual = std::abs(f(sol.rate));
    return sol;
}

/// Limit of the degree-k stationary rate as k grows without bound (any
/// positive gamma): the push product vanishes and the root is 1 / (1 + beta).
inline double limiting_rate(const EpidemicParams& p) {
    p.validate();
    return 1.0 / (1.0 + p.beta);
}

/// gamma * avg_k, the parameter whose smallness justifies the linearization
/// behind the whole-graph equation.
inline double linearization_size(double gamma, double avg_degree) {
    return gamma * avg_degree;
}

struct DegreeRateProfile {
    /// Smallest stationary rate per degree present in the graph.
    std::map<std::int64_t, MeanFieldSolution> by_degree;
};

/// Solves the degree equation once per degree that occurs in the graph.
inline DegreeRateProfile degree_rate_profile(const Graph& g, const EpidemicParams& p,
                                             double grid_step = 1e-3) {
    const DegreeStats stats = degree_statistics(g);
    DegreeRateProfile profile;
    for (std::size_t k = 0; k < stats.histogram.size(); ++k)
        if (stats.histogram[k] > 0)
            profile.by_degree[static_cast<std::int64_t>(k)] =
                solve_degree_rate(static_cast<std::int64_t>(k), p, grid_step);
    return profile;
}

}  // namespace pushpull
