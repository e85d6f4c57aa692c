#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "degree.hpp"
#include "dynamics.hpp"
#include "graph.hpp"
#include "spectral.hpp"

namespace pushpull {

/// The checks certify decay or stability; they are sufficient conditions, so
/// a failed inequality is reported as inconclusive, never as "unstable".
enum class Verdict { stable, dies_out, inconclusive, equilibrium_not_found };

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::stable:
        return "stable";
    case Verdict::dies_out:
        return "dies_out";
    case Verdict::inconclusive:
        return "inconclusive";
    case Verdict::equilibrium_not_found:
        return "equilibrium_not_found";
    }
    return "?";
}

enum class CaseBranch { low_beta, high_beta, not_applicable };

inline std::string_view to_string(CaseBranch b) {
    switch (b) {
    case CaseBranch::low_beta:
        return "low_beta";
    case CaseBranch::high_beta:
        return "high_beta";
    case CaseBranch::not_applicable:
        return "not_applicable";
    }
    return "?";
}

/// Strict threshold inequalities are decided with this safety margin:
/// quantities within it of the boundary count as equality and yield
/// inconclusive. lambda1 and spectral radii carry iteration error on the
/// order of the default 1e-10 tolerance, so deciding a strict inequality
/// closer than that would report solver noise as a verdict.
inline constexpr double kBoundaryMargin = 1e-9;

struct DieoutCheck {
    Verdict verdict = Verdict::inconclusive;
    /// The epidemic dies out when lambda1 < threshold (strictly).
    double threshold = 0.0;
};

/// Pull-free decay test: with alpha = 0 the zero profile is an equilibrium
/// and lambda1 < beta/gamma certifies global decay toward it. The condition
/// is one-sided; equality or violation yields inconclusive. gamma = 0 means
/// no spread at all, so any positive cure rate decays.
inline DieoutCheck check_dieout_threshold(double lambda1, const EpidemicParams& p,
                                          double margin = kBoundaryMargin) {
    p.validate();
    if (p.alpha != 0.0)
        throw std::domain_error("the die-out threshold applies only when alpha = 0");
    if (!(lambda1 >= 0.0))
        throw std::invalid_argument("lambda1 must be non-negative");

    DieoutCheck check;
    if (p.gamma == 0.0) {
        check.threshold = std::numeric_limits<double>::infinity();
        check.verdict = p.beta > 0.0 ? Verdict::dies_out : Verdict::inconclusive;
        return check;
    }
    check.threshold = p.beta / p.gamma;
    check.verdict =
        lambda1 < check.threshold - margin ? Verdict::dies_out : Verdict::inconclusive;
    return check;
}

struct SuccinctCheck {
    /// psi = max(|1-alpha-beta|, |-beta + (1-alpha)(1-gamma)^m|), the largest
    /// diagonal entry the stability matrix can reach over any equilibrium.
    double psi = 0.0;
    CaseBranch branch = CaseBranch::not_applicable;
    /// Equilibrium-free lambda1 bound for the active branch; stability is
    /// certified when lambda1 stays strictly below it.
    double bound = std::numeric_limits<double>::infinity();
    Verdict verdict = Verdict::inconclusive;
};

/// Equilibrium-free stability test from lambda1 and the maximum in-degree m
/// alone. The verdict is computed from the unified inequality
/// psi + gamma (1-alpha) lambda1 < 1; the branch bound on lambda1 is the same
/// condition solved for lambda1 and is reported for presentation. When
/// gamma (1-alpha) = 0 the adjacency term vanishes and psi < 1 decides.
inline SuccinctCheck check_succinct_threshold(double lambda1, std::int64_t max_degree,
                                              const EpidemicParams& p,
                                              double margin = kBoundaryMargin) {
    p.validate();
    if (max_degree < 0)
        throw std::invalid_argument("max degree must be non-negative");
    if (!(lambda1 >= 0.0))
        throw std::invalid_argument("lambda1 must be non-negative");

    const double q = std::pow(1.0 - p.gamma, static_cast<double>(max_degree));
    const double survive = (1.0 - p.alpha) * q;
    SuccinctCheck check;
    check.psi = std::max(std::abs(1.0 - p.alpha - p.beta), std::abs(-p.beta + survive));

    const double scale = p.gamma * (1.0 - p.alpha);
    if (scale == 0.0) {
        check.branch = CaseBranch::not_applicable;
        check.bound = std::numeric_limits<double>::infinity();
        check.verdict = check.psi < 1.0 - margin ? Verdict::stable : Verdict::inconclusive;
        return check;
    }
    const bool low = p.beta < (1.0 - p.alpha) * (1.0 + q) / 2.0;
    check.branch = low ? CaseBranch::low_beta : CaseBranch::high_beta;
    check.bound = low ? (p.alpha + p.beta) / scale : (1.0 - p.beta + survive) / scale;
    check.verdict = check.psi + scale * lambda1 < 1.0 - margin ? Verdict::stable
                                                               : Verdict::inconclusive;
    return check;
}

struct GeneralSettings {
    /// Starting profile for the equilibrium search, uniform across nodes.
    double initial_value = 0.0;
    double equilibrium_tol = 1e-10;
    std::int64_t equilibrium_max_iter = 100000;
    double spectral_tol = 1e-10;
    std::int64_t spectral_max_iter = 10000;
    double boundary_margin = kBoundaryMargin;
};

struct GeneralCheck {
    Equilibrium equilibrium;
    SpectralEstimate radius;
    Verdict verdict = Verdict::equilibrium_not_found;
};

/// Equilibrium-based test: find a fixed point, then certify stability when
/// the stability matrix built at it has spectral radius strictly below 1.
/// A non-converged fixed-point search yields equilibrium_not_found.
inline GeneralCheck check_general_threshold(const Graph& g, const EpidemicParams& p,
                                            const GeneralSettings& settings = {}) {
    GeneralCheck check;
    check.equilibrium =
        find_equilibrium(g, p, InfectionProfile::uniform(g.num_nodes(), settings.initial_value),
                         settings.equilibrium_tol, settings.equilibrium_max_iter);
    if (!check.equilibrium.converged)
        return check;
    check.radius = stability_matrix_radius(g, p, check.equilibrium, settings.spectral_tol,
                                           settings.spectral_max_iter);
    check.verdict =
        (check.radius.converged && check.radius.value < 1.0 - settings.boundary_margin)
            ? Verdict::stable
            : Verdict::inconclusive;
    return check;
}

struct StabilityReport {
    SpectralEstimate lambda1;
    NodeId max_degree = 0;
    /// Populated only when alpha = 0; the test does not apply otherwise.
    bool dieout_applicable = false;
    DieoutCheck dieout;
    SuccinctCheck succinct;
    GeneralCheck general;
};

/// Runs every threshold check that applies to (g, p).
inline StabilityReport analyze_stability(const Graph& g, const EpidemicParams& p,
                                         const GeneralSettings& settings = {}) {
    p.validate();
    StabilityReport report;
    report.lambda1 = spectral_radius(g, settings.spectral_tol, settings.spectral_max_iter);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        report.max_degree = std::max(report.max_degree, g.degree(v));
    if (p.alpha == 0.0) {
        report.dieout_applicable = true;
        report.dieout =
            check_dieout_threshold(report.lambda1.value, p, settings.boundary_margin);
    }
    report.succinct = check_succinct_threshold(report.lambda1.value, report.max_degree, p,
                                               settings.boundary_margin);
    report.general = check_general_threshold(g, p, settings);
    return report;
}

/// Upper bound on the long-run infection probability of a node with the
/// given in-degree.
inline double theta_plus_for_degree(std::int64_t deg, const EpidemicParams& p) {
    const double q = std::pow(1.0 - p.gamma, static_cast<double>(deg));
    const double numerator = 1.0 - (1.0 - p.alpha) * q;
    const double denominator = std::min(1.0 + p.beta - (1.0 - p.alpha) * q, 1.0);
    if (denominator <= 0.0)
        return 1.0;  // alpha = beta = gamma*deg = 0: the profile is frozen
    return numerator / denominator;
}

/// Matching lower bound. nu = min(1-beta, alpha) is a floor every node's
/// infection probability reaches after one step from anywhere, which feeds
/// the in-neighbor product.
inline double theta_minus_for_degree(std::int64_t deg, const EpidemicParams& p) {
    const double nu = std::min(1.0 - p.beta, p.alpha);
    const double w = (1.0 - p.alpha) * std::pow(1.0 - p.gamma * nu, static_cast<double>(deg));
    if (w >= p.beta) {
        const double denominator = 1.0 + p.beta - w;
        if (denominator <= 0.0)
            return 0.0;
        return (1.0 - w) / denominator;
    }
    return (w - p.beta) * theta_plus_for_degree(deg, p) + 1.0 - w;
}

struct BoundsProfile {
    std::vector<double> theta_minus;
    std::vector<double> theta_plus;
    /// One-step floor min(1-beta, alpha).
    double nu = 0.0;

    double mean_minus() const {
        double s = 0.0;
        for (double x : theta_minus)
            s += x;
        return s / static_cast<double>(theta_minus.size());
    }
    double mean_plus() const {
        double s = 0.0;
        for (double x : theta_plus)
            s += x;
        return s / static_cast<double>(theta_plus.size());
    }
};

/// Per-node sandwich theta_minus(v) <= liminf i_v <= limsup i_v <=
/// theta_plus(v), each depending on v only through its in-degree.
inline BoundsProfile infection_bounds(const Graph& g, const EpidemicParams& p) {
    p.validate();
    if (g.num_nodes() < 1)
        throw std::invalid_argument("bounds need at least one node");
    BoundsProfile bounds;
    bounds.nu = std::min(1.0 - p.beta, p.alpha);
    const NodeId n = g.num_nodes();
    bounds.theta_minus.resize(static_cast<std::size_t>(n));
    bounds.theta_plus.resize(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) {
        bounds.theta_minus[v] = theta_minus_for_degree(g.degree(v), p);
        bounds.theta_plus[v] = theta_plus_for_degree(g.degree(v), p);
    }
    return bounds;
}

/// Scalar majorant x(t+1) = x(t) - gamma x(t)^2 used to show decay without a
/// spectral certificate; it dominates the per-node probabilities of the
/// matched two-node system when beta = gamma and x0 = 1. Requires
/// 0 < gamma < 1/2 so the map sends [0,1] into itself monotonically.
inline std::vector<double> scalar_comparison_trajectory(double gamma, double x0,
                                                        std::int64_t steps) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw std::domain_error("the scalar comparison map needs 0 < gamma < 1/2");
    if (!(x0 >= 0.0 && x0 <= 1.0))
        throw std::invalid_argument("x0 must lie in [0, 1]");
    if (steps < 0)
        throw std::invalid_argument("step count must be non-negative");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(steps) + 1);
    double x = x0;
    values.push_back(x);
    for (std::int64_t t = 0; t < steps; ++t) {
        x = x - gamma * x * x;
        values.push_back(x);
    }
    return values;
}

}  // namespace pushpull
