#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "graph.hpp"

namespace pushpull {

struct SpectralEstimate {
    double value = 0.0;
    /// Change of the Rayleigh quotient over the final iteration.
    double residual = 0.0;
    std::int64_t iterations = 0;
    bool converged = false;
    /// Non-empty when the estimate needs a caveat (e.g. disconnected graph).
    std::string note;
};

namespace detail {

/// Power iteration on M + I for a nonnegative matrix M, starting from the
/// all-ones direction. The +1 shift turns every eigenvalue nonnegative, so
/// the iteration cannot oscillate between opposite-sign extremes; the shift
/// is subtracted out because the Rayleigh quotient is formed against M alone.
/// Convergence requires both the Rayleigh quotient change and the eigenpair
/// defect max|Mx - rx| to fall to tol (relative to max(1, r)); the quotient
/// alone can stall for an iteration without x being near an eigenvector.
template <typename MatVec>
SpectralEstimate shifted_power_iteration(NodeId n, MatVec&& apply, double tol,
                                         std::int64_t max_iter) {
    if (n < 1)
        throw std::invalid_argument("power iteration needs at least one node");
    if (!(tol > 0.0) || max_iter < 1)
        throw std::invalid_argument("tolerance and iteration budget must be positive");

    // Max-norm normalization: when the dominant eigenvector is exactly
    // representable (all-ones on a regular graph, say) the iterates stay
    // exact, so simple rational spectra come out bit-exact instead of off by
    // an ulp from repeated 2-norm scaling.
    std::vector<double> x(static_cast<std::size_t>(n), 1.0);
    std::vector<double> y(static_cast<std::size_t>(n));

    SpectralEstimate est;
    double prev = 0.0;
    for (std::int64_t it = 1; it <= max_iter; ++it) {
        apply(x, y);
        double xy = 0.0;
        double xx = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            xy += x[v] * y[v];
            xx += x[v] * x[v];
        }
        const double rayleigh = xy / xx;
        double defect = 0.0;
        for (NodeId v = 0; v < n; ++v)
            defect = std::max(defect, std::abs(y[v] - rayleigh * x[v]));
        est.value = rayleigh;
        est.iterations = it;
        if (it > 1) {
            est.residual = std::abs(rayleigh - prev);
            if (est.residual <= tol && defect <= tol * std::max(1.0, std::abs(rayleigh))) {
                est.converged = true;
                return est;
            }
        }
        prev = rayleigh;
        double max_abs = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            y[v] += x[v];
            max_abs = std::max(max_abs, std::abs(y[v]));
        }
        for (NodeId v = 0; v < n; ++v)
            x[v] = y[v] / max_abs;
    }
    return est;
}

inline void check_row_sum_bracket(const SpectralEstimate& est, double row_min, double row_max) {
    if (!est.converged)
        return;
    const double slack = 1e-7 * std::max(1.0, row_max);
    if (est.value < row_min - slack || est.value > row_max + slack)
        throw std::logic_error("spectral estimate escaped its row-sum bracket");
}

inline std::string disconnect_note(const Graph& g) {
    if (g.weak_component_count() > 1)
        return "graph is disconnected; the estimate reflects the dominant component";
    return {};
}

}  // namespace detail

/// Largest-magnitude eigenvalue of the adjacency matrix A = [a_vu] with
/// a_vu = 1 iff the arc (u,v) exists, i.e. row v sums over in-neighbors.
/// The radius is invariant under transposing A, so the in-neighbor
/// orientation also serves callers thinking in out-neighbor terms.
inline SpectralEstimate spectral_radius(const Graph& g, double tol = 1e-10,
                                        std::int64_t max_iter = 10000) {
    const NodeId n = g.num_nodes();
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (NodeId v = 0; v < n; ++v) {
            double sum = 0.0;
            for (NodeId u : g.in_neighbors(v))
                sum += x[u];
            y[v] = sum;
        }
    };
    SpectralEstimate est = detail::shifted_power_iteration(n, apply, tol, max_iter);

    double row_min = g.num_nodes() ? static_cast<double>(g.degree(0)) : 0.0;
    double row_max = row_min;
    for (NodeId v = 1; v < n; ++v) {
        const double d = static_cast<double>(g.degree(v));
        row_min = std::min(row_min, d);
        row_max = std::max(row_max, d);
    }
    detail::check_row_sum_bracket(est, row_min, row_max);
    est.note = detail::disconnect_note(g);
    return est;
}

/// Spectral radius of the equilibrium stability matrix H + gamma (1-alpha) A,
/// where H is diagonal with h_v = |-beta + (1-alpha) prod over in-neighbors
/// of (1 - gamma i*_u)|. Requires a converged equilibrium.
inline SpectralEstimate stability_matrix_radius(const Graph& g, const EpidemicParams& p,
                                                const Equilibrium& eq, double tol = 1e-10,
                                                std::int64_t max_iter = 10000) {
    p.validate();
    const NodeId n = g.num_nodes();
    if (static_cast<NodeId>(eq.i_star.size()) != n)
        throw std::invalid_argument("equilibrium size does not match the graph");
    if (!eq.converged)
        throw std::invalid_argument("stability analysis needs a converged equilibrium");

    std::vector<double> h(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) {
        double prod = 1.0;
        for (NodeId u : g.in_neighbors(v))
            prod *= 1.0 - p.gamma * eq.i_star[u];
        h[v] = std::abs(-p.beta + (1.0 - p.alpha) * prod);
    }
    const double scale = p.gamma * (1.0 - p.alpha);

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (NodeId v = 0; v < n; ++v) {
            double sum = 0.0;
            for (NodeId u : g.in_neighbors(v))
                sum += x[u];
            y[v] = h[v] * x[v] + scale * sum;
        }
    };
    SpectralEstimate est = detail::shifted_power_iteration(n, apply, tol, max_iter);

    double row_min = h.empty() ? 0.0 : h[0] + scale * g.degree(0);
    double row_max = row_min;
    for (NodeId v = 1; v < n; ++v) {
        const double r = h[v] + scale * g.degree(v);
        row_min = std::min(row_min, r);
        row_max = std::max(row_max, r);
    }
    detail::check_row_sum_bracket(est, row_min, row_max);
    est.note = detail::disconnect_note(g);
    return est;
}

}  // namespace pushpull
