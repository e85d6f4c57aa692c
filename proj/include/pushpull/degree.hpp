#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace pushpull {

/// Degree statistics plus the second-order degree quantities used by the
/// localized monitoring machinery. For directed graphs "degree" means
/// in-degree throughout, matching what the dynamics read.
struct DegreeStats {
    std::vector<NodeId> degree;
    double avg_degree = 0.0;
    NodeId max_degree = 0;
    /// histogram[k] = number of nodes with degree k, k = 0..max_degree.
    std::vector<std::int64_t> histogram;
    /// 2deg(v) = sum of deg(u) over in-neighbors u, minus the number of
    /// reciprocated arcs at v (deg(v) itself when undirected).
    std::vector<std::int64_t> second_order;
    /// k'(v) = 2deg(v) / avg_degree, the locally estimable degree proxy.
    /// Zero-filled when the graph has no edges.
    std::vector<double> k_prime;
    /// Average degree rounded half-up, before the existing-degree fallback.
    NodeId rounded_avg_degree = 0;
    /// Rounded average degree widened to the nearest degree that actually
    /// occurs (ties resolved toward the smaller degree).
    NodeId resolved_avg_degree = 0;
    /// Number of nodes whose degree equals resolved_avg_degree.
    std::int64_t avg_class_size = 0;
    /// Mean of 2deg(v) over that class; the target the panel ranks against.
    double mean_2deg_at_avg = 0.0;
};

/// Picks the degree class standing in for the average: round half-up, then
/// widen to the nearest degree with at least one node, preferring the smaller
/// degree on ties.
inline NodeId resolve_average_degree(const std::vector<std::int64_t>& histogram, double avg) {
    const NodeId rounded = static_cast<NodeId>(std::floor(avg + 0.5));
    const NodeId max_deg = static_cast<NodeId>(histogram.size()) - 1;
    if (rounded >= 0 && rounded <= max_deg && histogram[rounded] > 0)
        return rounded;
    NodeId best = -1;
    for (NodeId k = 0; k <= max_deg; ++k) {
        if (histogram[k] == 0)
            continue;
        if (best < 0 || std::abs(static_cast<std::int64_t>(k) - rounded) <
                            std::abs(static_cast<std::int64_t>(best) - rounded))
            best = k;
    }
    if (best < 0)
        throw std::invalid_argument("degree histogram is empty");
    return best;
}

inline DegreeStats degree_statistics(const Graph& g) {
    const NodeId n = g.num_nodes();
    if (n < 1)
        throw std::invalid_argument("degree statistics need at least one node");

    DegreeStats stats;
    stats.degree.resize(static_cast<std::size_t>(n));
    std::int64_t total = 0;
    for (NodeId v = 0; v < n; ++v) {
        stats.degree[v] = g.degree(v);
        total += stats.degree[v];
        stats.max_degree = std::max(stats.max_degree, stats.degree[v]);
    }
    stats.avg_degree = static_cast<double>(total) / n;

    stats.histogram.assign(static_cast<std::size_t>(stats.max_degree) + 1, 0);
    for (NodeId v = 0; v < n; ++v)
        ++stats.histogram[stats.degree[v]];

    stats.second_order.resize(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) {
        std::int64_t sum = 0;
        std::int64_t reciprocal = 0;
        for (NodeId u : g.in_neighbors(v)) {
            sum += stats.degree[u];
            if (g.is_directed()) {
                if (g.has_arc(v, u))
                    ++reciprocal;
            }
        }
        if (!g.is_directed())
            reciprocal = stats.degree[v];
        stats.second_order[v] = sum - reciprocal;
    }

    stats.k_prime.resize(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v)
        stats.k_prime[v] =
            stats.avg_degree > 0.0 ? stats.second_order[v] / stats.avg_degree : 0.0;

    stats.rounded_avg_degree = static_cast<NodeId>(std::floor(stats.avg_degree + 0.5));
    stats.resolved_avg_degree = resolve_average_degree(stats.histogram, stats.avg_degree);
    std::int64_t class_sum = 0;
    for (NodeId v = 0; v < n; ++v)
        if (stats.degree[v] == stats.resolved_avg_degree) {
            ++stats.avg_class_size;
            class_sum += stats.second_order[v];
        }
    stats.mean_2deg_at_avg =
        stats.avg_class_size > 0 ? static_cast<double>(class_sum) / stats.avg_class_size : 0.0;
    return stats;
}

}  // namespace pushpull
