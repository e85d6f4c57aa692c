#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "degree.hpp"
#include "dynamics.hpp"
#include "graph.hpp"

namespace pushpull {

/// Nodes picked to stand in for the population average. Selection uses only
/// locally observable structure: a node qualifies by second-order degree
/// proximity to the mean 2deg of the average-degree class.
struct MonitorPanel {
    std::vector<NodeId> nodes;
    /// Degree class the panel represents (rounded average degree widened to
    /// one that occurs).
    NodeId k_hat = 0;
    /// Mean 2deg over that class; the ranking target.
    double target_2deg = 0.0;
    /// |2deg(v) - target| for each panel node, in panel order.
    std::vector<double> distances;
    std::int64_t requested = 0;
};

/// Ranks the nodes of the k_hat degree class by |2deg(v) - target| with node
/// id as the tie-break and keeps the first x (all of them when the class is
/// smaller). The ranking is a fixed total order, so panels nest: the size-x
/// panel is a prefix of the size-y panel whenever x <= y.
inline MonitorPanel select_panel(const DegreeStats& stats, std::int64_t size) {
    if (size < 1)
        throw std::invalid_argument("panel size must be at least 1");
    const auto n = static_cast<std::int64_t>(stats.degree.size());
    if (n < 1)
        throw std::invalid_argument("panel selection needs at least one node");

    MonitorPanel panel;
    panel.requested = size;
    panel.k_hat = stats.resolved_avg_degree;
    panel.target_2deg = stats.mean_2deg_at_avg;

    std::vector<std::pair<double, NodeId>> ranked;
    for (NodeId v = 0; v < n; ++v)
        if (stats.degree[v] == panel.k_hat)
            ranked.emplace_back(std::abs(stats.second_order[v] - panel.target_2deg), v);
    std::sort(ranked.begin(), ranked.end());

    const auto keep = std::min(static_cast<std::size_t>(size), ranked.size());
    panel.nodes.reserve(keep);
    panel.distances.reserve(keep);
    for (std::size_t j = 0; j < keep; ++j) {
        panel.distances.push_back(ranked[j].first);
        panel.nodes.push_back(ranked[j].second);
    }
    return panel;
}

inline MonitorPanel select_panel(const Graph& g, std::int64_t size) {
    return select_panel(degree_statistics(g), size);
}

namespace detail {

inline void validate_panel_series(const NodeSeries& series, const MonitorPanel& panel,
                                  std::int64_t t0, std::int64_t t1) {
    if (panel.nodes.empty())
        throw std::invalid_argument("panel is empty");
    if (series.n < 1 || series.steps() < 0)
        throw std::invalid_argument("series is empty");
    for (NodeId v : panel.nodes)
        if (v < 0 || v >= series.n)
            throw std::invalid_argument("panel node is not in the series");
    if (t0 < 0 || t1 < t0 || t1 > series.steps())
        throw std::invalid_argument("window must satisfy 0 <= t0 <= t1 <= last step");
}

}  // namespace detail

/// Panel estimator: the observed series averaged over the window [t0, t1]
/// and over the panel nodes. Takes only observations and the panel; the
/// process parameters never enter.
inline double panel_estimate(const NodeSeries& series, const MonitorPanel& panel,
                             std::int64_t t0, std::int64_t t1) {
    detail::validate_panel_series(series, panel, t0, t1);
    double sum = 0.0;
    for (std::int64_t t = t0; t <= t1; ++t)
        for (NodeId v : panel.nodes)
            sum += series.at(t, v);
    return sum / (static_cast<double>(t1 - t0 + 1) * static_cast<double>(panel.nodes.size()));
}

/// Running variant: entry j is the panel estimate over [t0, t0 + j], so the
/// last entry equals panel_estimate(series, panel, t0, last step).
inline std::vector<double> running_estimate(const NodeSeries& series, const MonitorPanel& panel,
                                            std::int64_t t0) {
    detail::validate_panel_series(series, panel, t0, series.steps());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(series.steps() - t0 + 1));
    double sum = 0.0;
    for (std::int64_t t = t0; t <= series.steps(); ++t) {
        for (NodeId v : panel.nodes)
            sum += series.at(t, v);
        out.push_back(sum / (static_cast<double>(t - t0 + 1) *
                             static_cast<double>(panel.nodes.size())));
    }
    return out;
}

/// Window mean of the series restricted to each degree class; used to compare
/// observed per-degree activity against the per-degree stationary rates.
inline std::map<std::int64_t, double> degree_class_window_means(const Graph& g,
                                                                const NodeSeries& series,
                                                                std::int64_t t0,
                                                                std::int64_t t1) {
    if (series.n != g.num_nodes())
        throw std::invalid_argument("series does not match the graph");
    if (t0 < 0 || t1 < t0 || t1 > series.steps())
        throw std::invalid_argument("window must satisfy 0 <= t0 <= t1 <= last step");
    std::map<std::int64_t, double> sums;
    std::map<std::int64_t, std::int64_t> counts;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        double s = 0.0;
        for (std::int64_t t = t0; t <= t1; ++t)
            s += series.at(t, v);
        sums[g.degree(v)] += s / static_cast<double>(t1 - t0 + 1);
        counts[g.degree(v)] += 1;
    }
    for (auto& [k, s] : sums)
        s /= static_cast<double>(counts[k]);
    return sums;
}

}  // namespace pushpull
