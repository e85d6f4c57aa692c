#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace pushpull {

/// Per-step probabilities of the process: alpha pulls infection from outside
/// the graph, gamma rides each arc from an infected in-neighbor, beta cures.
struct EpidemicParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    void validate() const {
        auto ok = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
        if (!ok(alpha) || !ok(beta) || !ok(gamma))
            throw std::invalid_argument("alpha, beta, gamma must lie in [0, 1]");
    }
};

/// Dense per-node time series: row t holds the n values at step t.
struct NodeSeries {
    NodeId n = 0;
    std::vector<double> data;

    std::int64_t steps() const {
        return n > 0 ? static_cast<std::int64_t>(data.size()) / n - 1 : -1;
    }

    double at(std::int64_t t, NodeId v) const { return data[t * n + v]; }

    std::vector<double> row(std::int64_t t) const {
        return {data.begin() + t * n, data.begin() + (t + 1) * n};
    }

    void append(const std::vector<double>& values) {
        data.insert(data.end(), values.begin(), values.end());
    }
};

/// Infection-probability profile at one instant.
struct InfectionProfile {
    std::vector<double> i;

    double mean() const {
        if (i.empty())
            throw std::invalid_argument("empty infection profile");
        return std::accumulate(i.begin(), i.end(), 0.0) / static_cast<double>(i.size());
    }

    static InfectionProfile uniform(NodeId n, double value) {
        return {std::vector<double>(static_cast<std::size_t>(n), value)};
    }

    /// Exactly ceil(fraction * n) nodes set to 1, chosen uniformly at random;
    /// the small negative nudge keeps exact products like 0.2 * 2000 from
    /// rounding up through floating point.
    static InfectionProfile seeded_fraction(NodeId n, double fraction, std::uint64_t seed) {
        if (fraction < 0.0 || fraction > 1.0)
            throw std::invalid_argument("initial fraction must lie in [0, 1]");
        auto k = static_cast<std::int64_t>(std::ceil(fraction * n - 1e-9));
        k = std::clamp<std::int64_t>(k, 0, n);
        std::vector<NodeId> ids(static_cast<std::size_t>(n));
        std::iota(ids.begin(), ids.end(), 0);
        SplitMix64 rng(seed);
        InfectionProfile p = uniform(n, 0.0);
        for (std::int64_t j = 0; j < k; ++j) {
            std::swap(ids[j], ids[j + static_cast<std::int64_t>(rng.next_below(
                                          static_cast<std::uint64_t>(n - j)))]);
            p.i[ids[j]] = 1.0;
        }
        return p;
    }
};

namespace detail {

inline void validate_profile(const Graph& g, const std::vector<double>& i) {
    if (static_cast<NodeId>(i.size()) != g.num_nodes())
        throw std::invalid_argument("profile size does not match the graph");
    for (double x : i)
        if (!(x >= 0.0 && x <= 1.0))
            throw std::invalid_argument("infection probabilities must lie in [0, 1]");
}

/// One synchronous update. The push product over in-neighbors is formed
/// first; using it directly in the susceptible branch (rather than going
/// through 1 - delta) keeps the update monotone to the last ulp, which the
/// scalar-domination analysis relies on.
inline void step_into(const Graph& g, const EpidemicParams& p, const std::vector<double>& cur,
                      std::vector<double>& next, std::vector<double>* delta) {
    const NodeId n = g.num_nodes();
    next.resize(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) {
        double prod = 1.0;
        for (NodeId u : g.in_neighbors(v))
            prod *= 1.0 - p.gamma * cur[u];
        if (delta)
            (*delta)[v] = 1.0 - prod;
        const double value =
            (1.0 - (1.0 - p.alpha) * prod) * (1.0 - cur[v]) + (1.0 - p.beta) * cur[v];
        next[v] = std::clamp(value, 0.0, 1.0);
    }
}

}  // namespace detail

/// Push probabilities delta_v = 1 - prod over in-neighbors of (1 - gamma i_u).
inline std::vector<double> push_probabilities(const Graph& g, const EpidemicParams& p,
                                              const InfectionProfile& state) {
    p.validate();
    detail::validate_profile(g, state.i);
    std::vector<double> delta(state.i.size());
    std::vector<double> scratch;
    detail::step_into(g, p, state.i, scratch, &delta);
    return delta;
}

/// Advances the master equation by one synchronous step.
inline InfectionProfile step(const Graph& g, const EpidemicParams& p,
                             const InfectionProfile& state) {
    p.validate();
    detail::validate_profile(g, state.i);
    InfectionProfile next;
    detail::step_into(g, p, state.i, next.i, nullptr);
    return next;
}

struct IntegrateOptions {
    bool record_profiles = false;
};

struct Trajectory {
    /// ibar[t] = mean infection probability at step t, t = 0..T.
    std::vector<double> ibar;
    /// Full per-node series; populated only when requested.
    NodeSeries profiles;
};

inline Trajectory integrate(const Graph& g, const EpidemicParams& p, const InfectionProfile& i0,
                            std::int64_t steps, IntegrateOptions options = {}) {
    p.validate();
    detail::validate_profile(g, i0.i);
    if (steps < 1)
        throw std::invalid_argument("integration needs at least one step");

    Trajectory out;
    out.ibar.reserve(static_cast<std::size_t>(steps) + 1);
    if (options.record_profiles) {
        out.profiles.n = g.num_nodes();
        out.profiles.data.reserve(static_cast<std::size_t>(steps + 1) * g.num_nodes());
    }

    std::vector<double> cur = i0.i, next;
    auto record = [&](const std::vector<double>& row) {
        out.ibar.push_back(std::accumulate(row.begin(), row.end(), 0.0) /
                           static_cast<double>(row.size()));
        if (options.record_profiles)
            out.profiles.append(row);
    };
    record(cur);
    for (std::int64_t t = 0; t < steps; ++t) {
        detail::step_into(g, p, cur, next, nullptr);
        cur.swap(next);
        record(cur);
    }
    return out;
}

struct Equilibrium {
    std::vector<double> i_star;
    /// Max-norm defect |f(i*) - i*| measured after the iteration stopped.
    double residual = 0.0;
    std::int64_t iterations = 0;
    bool converged = false;

    double mean() const {
        return std::accumulate(i_star.begin(), i_star.end(), 0.0) /
               static_cast<double>(i_star.size());
    }
};

/// Fixed-point iteration of the master equation. Convergence means the
/// max-norm step difference fell to tol or below; running out of iterations
/// reports converged = false rather than throwing, because slow decay toward
/// extinction is a legitimate regime, not a usage error.
inline Equilibrium find_equilibrium(const Graph& g, const EpidemicParams& p,
                                    const InfectionProfile& i0, double tol = 1e-10,
                                    std::int64_t max_iter = 100000) {
    p.validate();
    detail::validate_profile(g, i0.i);
    if (!(tol > 0.0) || max_iter < 1)
        throw std::invalid_argument("tolerance and iteration budget must be positive");

    Equilibrium eq;
    std::vector<double> cur = i0.i, next;
    for (std::int64_t it = 1; it <= max_iter; ++it) {
        detail::step_into(g, p, cur, next, nullptr);
        double diff = 0.0;
        for (std::size_t v = 0; v < cur.size(); ++v)
            diff = std::max(diff, std::abs(next[v] - cur[v]));
        cur.swap(next);
        eq.iterations = it;
        if (diff <= tol) {
            eq.converged = true;
            break;
        }
    }
    detail::step_into(g, p, cur, next, nullptr);
    double defect = 0.0;
    for (std::size_t v = 0; v < cur.size(); ++v)
        defect = std::max(defect, std::abs(next[v] - cur[v]));
    eq.residual = defect;
    eq.i_star = std::move(cur);
    return eq;
}

}  // namespace pushpull
