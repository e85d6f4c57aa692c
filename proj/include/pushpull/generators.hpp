#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace pushpull {

enum class GraphModel { regular, erdos_renyi, preferential_attachment };

inline GraphModel parse_graph_model(std::string_view name) {
    if (name == "regular" || name == "reg")
        return GraphModel::regular;
    if (name == "erdos_renyi" || name == "er")
        return GraphModel::erdos_renyi;
    if (name == "preferential_attachment" || name == "pa")
        return GraphModel::preferential_attachment;
    throw std::invalid_argument("unknown graph model: " + std::string(name));
}

namespace detail {

inline std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b)
        std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace detail

/// Random d-regular undirected graph via the configuration model: every node
/// contributes d stubs, a shuffle pairs them, and the pairs that came out as
/// self-loops or duplicates are repaired by degree-preserving 2-swaps against
/// randomly chosen accepted edges. The repair budget is generous but bounded;
/// exhausting it raises GenerationError rather than looping forever.
inline Graph generate_regular(NodeId n, NodeId degree, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("regular graph needs at least one node");
    if (degree < 0 || degree >= n)
        throw std::invalid_argument("regular degree must satisfy 0 <= d < n");
    if ((static_cast<std::int64_t>(n) * degree) % 2 != 0)
        throw std::invalid_argument("regular graph needs n*d even");

    SplitMix64 rng(seed);
    std::vector<NodeId> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * degree);
    for (NodeId v = 0; v < n; ++v)
        for (NodeId j = 0; j < degree; ++j)
            stubs.push_back(v);
    shuffle(stubs, rng);

    std::unordered_set<std::uint64_t> present;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::pair<NodeId, NodeId>> rejected;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        NodeId a = stubs[i], b = stubs[i + 1];
        if (a == b || !present.insert(detail::edge_key(a, b)).second)
            rejected.emplace_back(a, b);
        else
            edges.emplace_back(a, b);
    }

    std::int64_t budget = 500ll * n + 10000;
    for (auto [a, b] : rejected) {
        for (;;) {
            if (--budget < 0)
                throw GenerationError("regular graph repair budget exhausted");
            if (edges.empty())
                throw GenerationError("regular graph has no edges to swap against");
            std::size_t j = static_cast<std::size_t>(rng.next_below(edges.size()));
            auto [c, d] = edges[j];
            if (a == b) {
                // Self-loop pair: split (c,d) into (a,c) and (a,d).
                if (c == a || d == a || present.count(detail::edge_key(a, c)) ||
                    present.count(detail::edge_key(a, d)))
                    continue;
                present.erase(detail::edge_key(c, d));
                present.insert(detail::edge_key(a, c));
                present.insert(detail::edge_key(a, d));
                edges[j] = {a, c};
                edges.emplace_back(a, d);
            } else {
                // Duplicate pair: split (c,d) into (a,c) and (b,d).
                if (c == a || d == b || present.count(detail::edge_key(a, c)) ||
                    present.count(detail::edge_key(b, d)) ||
                    detail::edge_key(a, c) == detail::edge_key(b, d))
                    continue;
                present.erase(detail::edge_key(c, d));
                present.insert(detail::edge_key(a, c));
                present.insert(detail::edge_key(b, d));
                edges[j] = {a, c};
                edges.emplace_back(b, d);
            }
            break;
        }
    }
    return Graph(n, edges, false);
}

/// Uniform undirected graph with exactly m edges (the G(n,M) model). Sparse
/// targets are drawn by rejection; when m exceeds half of all pairs the
/// complement is drawn instead, so the draw stays uniform and never stalls.
inline Graph generate_erdos_renyi(NodeId n, std::int64_t m, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("random graph needs at least one node");
    const std::int64_t possible = static_cast<std::int64_t>(n) * (n - 1) / 2;
    if (m < 0 || m > possible)
        throw std::invalid_argument("edge count must lie in [0, n*(n-1)/2]");

    SplitMix64 rng(seed);
    const bool complement = m > possible / 2;
    const std::int64_t draw = complement ? possible - m : m;

    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(draw) * 2);
    while (static_cast<std::int64_t>(chosen.size()) < draw) {
        NodeId u = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
        NodeId v = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (u == v)
            continue;
        chosen.insert(detail::edge_key(u, v));
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    if (!complement) {
        for (std::uint64_t key : chosen)
            edges.emplace_back(static_cast<NodeId>(key >> 32),
                               static_cast<NodeId>(key & 0xffffffffu));
    } else {
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (!chosen.count(detail::edge_key(u, v)))
                    edges.emplace_back(u, v);
    }
    return Graph(n, edges, false);
}

/// Converts an edge probability to the matching exact edge count.
inline std::int64_t erdos_renyi_edge_count(NodeId n, double p) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("edge probability must lie in [0, 1]");
    const double possible = 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0);
    return static_cast<std::int64_t>(std::llround(p * possible));
}

/// Preferential attachment: the seed is a clique on target+1 nodes, then each
/// arriving node attaches to `target` distinct existing nodes drawn with
/// probability proportional to current degree (without replacement).
inline Graph generate_preferential_attachment(NodeId n, NodeId target, std::uint64_t seed) {
    if (target < 1)
        throw std::invalid_argument("attachment count must be at least 1");
    const NodeId clique = target + 1;
    if (n <= clique)
        throw std::invalid_argument("node count must exceed the seed clique size");

    SplitMix64 rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(static_cast<std::size_t>(clique) * (clique - 1) / 2 +
                  static_cast<std::size_t>(n - clique) * target);
    // pool holds each node once per unit of degree, so a uniform index into it
    // is a degree-proportional draw.
    std::vector<NodeId> pool;
    pool.reserve(2 * edges.capacity());
    for (NodeId u = 0; u < clique; ++u)
        for (NodeId v = u + 1; v < clique; ++v) {
            edges.emplace_back(u, v);
            pool.push_back(u);
            pool.push_back(v);
        }

    std::vector<NodeId> picks;
    for (NodeId v = clique; v < n; ++v) {
        picks.clear();
        std::int64_t guard = 1000000;
        while (static_cast<NodeId>(picks.size()) < target) {
            if (--guard < 0)
                throw GenerationError("preferential attachment draw stalled");
            NodeId t = pool[rng.next_below(pool.size())];
            if (std::find(picks.begin(), picks.end(), t) != picks.end())
                continue;
            picks.push_back(t);
        }
        for (NodeId t : picks) {
            edges.emplace_back(t, v);
            pool.push_back(t);
            pool.push_back(v);
        }
    }
    return Graph(n, edges, false);
}

/// Dispatch used by the CLI: model:n:param with param meaning degree
/// (regular), edge count or probability (erdos_renyi), or attachments per
/// node (preferential_attachment). A fractional erdos_renyi param below 1 is
/// treated as a probability and converted to the matching exact edge count.
inline Graph generate(GraphModel model, NodeId n, double param, std::uint64_t seed) {
    switch (model) {
    case GraphModel::regular:
        return generate_regular(n, static_cast<NodeId>(std::llround(param)), seed);
    case GraphModel::erdos_renyi: {
        std::int64_t m = (param > 0.0 && param < 1.0)
                             ? erdos_renyi_edge_count(n, param)
                             : static_cast<std::int64_t>(std::llround(param));
        return generate_erdos_renyi(n, m, seed);
    }
    case GraphModel::preferential_attachment:
        return generate_preferential_attachment(n, static_cast<NodeId>(std::llround(param)),
                                                seed);
    }
    throw std::invalid_argument("unknown graph model");
}

}  // namespace pushpull
