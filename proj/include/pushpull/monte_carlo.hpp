#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dynamics.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace pushpull {

struct MonteCarloOptions {
    /// Worker threads; runs are split by index, values below 1 mean 1.
    int threads = 1;
    /// Record per-node infection frequencies (memory: (steps+1) * n doubles).
    bool record_node_series = true;
};

struct MonteCarloResult {
    std::int64_t runs = 0;
    /// Mean over runs of the per-run infected fraction, per step.
    std::vector<double> ibar_mean;
    /// Sample standard deviation (n-1 denominator) of the same quantity.
    std::vector<double> ibar_std;
    /// node_freq.at(t, v) = fraction of runs with v infected at step t.
    NodeSeries node_freq;
};

namespace detail {

/// Per-thread accumulators. Everything is integer so that merging is exact
/// and independent of thread count and merge order; doubles appear only in
/// the final conversion.
struct McAccumulator {
    std::vector<std::uint64_t> count_sum;
    std::vector<std::uint64_t> count_sq_sum;
    std::vector<std::uint32_t> node_counts;

    McAccumulator(std::int64_t steps, NodeId n, bool record_nodes)
        : count_sum(static_cast<std::size_t>(steps) + 1, 0),
          count_sq_sum(static_cast<std::size_t>(steps) + 1, 0) {
        if (record_nodes)
            node_counts.assign((static_cast<std::size_t>(steps) + 1) * n, 0);
    }

    void merge(const McAccumulator& other) {
        for (std::size_t t = 0; t < count_sum.size(); ++t) {
            count_sum[t] += other.count_sum[t];
            count_sq_sum[t] += other.count_sq_sum[t];
        }
        for (std::size_t j = 0; j < node_counts.size(); ++j)
            node_counts[j] += other.node_counts[j];
    }
};

/// One stochastic realization. The draw order is part of the contract: the
/// initial set is a partial Fisher-Yates over node ids; each step then visits
/// nodes in ascending id, an infected node consumes one cure draw, a
/// susceptible node consumes one pull draw followed by one push draw per
/// infected in-neighbor (in adjacency order), whether or not the pull already
/// infected it.
inline void simulate_run(const Graph& g, const EpidemicParams& p, std::int64_t initial_count,
                         std::int64_t steps, std::uint64_t seed, McAccumulator& acc) {
    const NodeId n = g.num_nodes();
    SplitMix64 rng(seed);

    std::vector<std::uint8_t> state(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> next(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    for (std::int64_t j = 0; j < initial_count; ++j) {
        std::swap(ids[j], ids[j + static_cast<std::int64_t>(
                                      rng.next_below(static_cast<std::uint64_t>(n - j)))]);
        state[ids[j]] = 1;
    }

    for (std::int64_t t = 0;; ++t) {
        std::uint64_t infected = 0;
        for (NodeId v = 0; v < n; ++v)
            infected += state[v];
        acc.count_sum[t] += infected;
        acc.count_sq_sum[t] += infected * infected;
        if (!acc.node_counts.empty()) {
            std::uint32_t* row = acc.node_counts.data() + static_cast<std::size_t>(t) * n;
            for (NodeId v = 0; v < n; ++v)
                row[v] += state[v];
        }
        if (t == steps)
            break;

        for (NodeId v = 0; v < n; ++v) {
            if (state[v]) {
                next[v] = rng.next_double() < p.beta ? 0 : 1;
            } else {
                bool hit = rng.next_double() < p.alpha;
                for (NodeId u : g.in_neighbors(v))
                    if (state[u])
                        hit = (rng.next_double() < p.gamma) || hit;
                next[v] = hit ? 1 : 0;
            }
        }
        state.swap(next);
    }
}

}  // namespace detail

/// Ensemble of independent realizations. Run r draws from the stream
/// derive_stream(master_seed, r), so results are identical for any thread
/// count, and a run keeps its trajectory when the ensemble grows.
inline MonteCarloResult monte_carlo(const Graph& g, const EpidemicParams& p,
                                    double initial_fraction, std::int64_t steps,
                                    std::int64_t runs, std::uint64_t master_seed,
                                    MonteCarloOptions options = {}) {
    p.validate();
    const NodeId n = g.num_nodes();
    if (n < 1)
        throw std::invalid_argument("simulation needs at least one node");
    if (runs < 1)
        throw std::invalid_argument("at least one run is required");
    if (steps < 0)
        throw std::invalid_argument("step count must be non-negative");
    if (initial_fraction < 0.0 || initial_fraction > 1.0)
        throw std::invalid_argument("initial fraction must lie in [0, 1]");

    auto initial_count = static_cast<std::int64_t>(std::ceil(initial_fraction * n - 1e-9));
    initial_count = std::clamp<std::int64_t>(initial_count, 0, n);

    int workers = std::max(options.threads, 1);
    workers = static_cast<int>(std::min<std::int64_t>(workers, runs));

    std::vector<detail::McAccumulator> parts;
    parts.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        parts.emplace_back(steps, n, options.record_node_series);

    auto work = [&](int w) {
        for (std::int64_t r = w; r < runs; r += workers)
            detail::simulate_run(g, p, initial_count, steps,
                                 derive_stream(master_seed, static_cast<std::uint64_t>(r)),
                                 parts[w]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto& th : pool)
            th.join();
    }
    for (int w = 1; w < workers; ++w)
        parts[0].merge(parts[w]);
    const detail::McAccumulator& acc = parts[0];

    MonteCarloResult result;
    result.runs = runs;
    const auto rows = static_cast<std::size_t>(steps) + 1;
    result.ibar_mean.resize(rows);
    result.ibar_std.resize(rows);
    const double dn = static_cast<double>(n);
    const double dr = static_cast<double>(runs);
    for (std::size_t t = 0; t < rows; ++t) {
        const double s1 = static_cast<double>(acc.count_sum[t]);
        const double s2 = static_cast<double>(acc.count_sq_sum[t]);
        result.ibar_mean[t] = s1 / (dr * dn);
        if (runs > 1) {
            const double var = std::max(0.0, (s2 - s1 * s1 / dr) / (dr - 1.0));
            result.ibar_std[t] = std::sqrt(var) / dn;
        }
    }
    if (options.record_node_series) {
        result.node_freq.n = n;
        result.node_freq.data.resize(rows * static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < result.node_freq.data.size(); ++j)
            result.node_freq.data[j] = acc.node_counts[j] / dr;
    }
    return result;
}

}  // namespace pushpull
