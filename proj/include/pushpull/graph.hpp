#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pushpull {

using NodeId = std::int32_t;

/// Thrown when an edge-list stream contains malformed content.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a random generator exhausts its retry budget.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable sparse graph in CSR form with node ids 0..n-1.
///
/// Directed graphs keep separate out- and in-adjacency; an arc (u,v) means u
/// can push to v, so the dynamics read in_neighbors(v). Undirected graphs
/// store each edge as two arcs and the two views coincide. Adjacency rows are
/// sorted, free of self-loops and free of duplicates.
class Graph {
public:
    /// Builds from an edge list. Undirected edges are given once per pair in
    /// either orientation. Throws std::invalid_argument on out-of-range ids,
    /// self-loops or duplicate edges.
    Graph(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges, bool directed)
        : n_(n), directed_(directed), num_edges_(static_cast<std::int64_t>(edges.size())) {
        if (n < 0)
            throw std::invalid_argument("node count must be non-negative");
        for (const auto& [u, v] : edges) {
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw std::invalid_argument("edge endpoint out of range");
            if (u == v)
                throw std::invalid_argument("self-loops are not allowed");
        }
        build_csr(edges);
    }

    NodeId num_nodes() const { return n_; }
    bool is_directed() const { return directed_; }

    /// Undirected: number of edges. Directed: number of arcs.
    std::int64_t num_edges() const { return num_edges_; }
    std::int64_t num_arcs() const { return directed_ ? num_edges_ : 2 * num_edges_; }

    std::span<const NodeId> out_neighbors(NodeId v) const {
        return {out_adj_.data() + out_off_[v], out_adj_.data() + out_off_[v + 1]};
    }

    std::span<const NodeId> in_neighbors(NodeId v) const {
        if (!directed_)
            return out_neighbors(v);
        return {in_adj_.data() + in_off_[v], in_adj_.data() + in_off_[v + 1]};
    }

    NodeId out_degree(NodeId v) const {
        return static_cast<NodeId>(out_off_[v + 1] - out_off_[v]);
    }

    NodeId in_degree(NodeId v) const {
        if (!directed_)
            return out_degree(v);
        return static_cast<NodeId>(in_off_[v + 1] - in_off_[v]);
    }

    /// Degree as used by the dynamics and the statistics: the number of
    /// neighbors that can push to v, i.e. the in-degree.
    NodeId degree(NodeId v) const { return in_degree(v); }

    bool has_arc(NodeId u, NodeId v) const {
        auto row = out_neighbors(u);
        return std::binary_search(row.begin(), row.end(), v);
    }

    /// Number of weakly connected components (arc direction ignored).
    std::int64_t weak_component_count() const {
        if (n_ == 0)
            return 0;
        std::vector<NodeId> parent(static_cast<std::size_t>(n_));
        for (NodeId v = 0; v < n_; ++v)
            parent[v] = v;
        auto find = [&](NodeId v) {
            while (parent[v] != v) {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            return v;
        };
        for (NodeId u = 0; u < n_; ++u)
            for (NodeId v : out_neighbors(u)) {
                NodeId ru = find(u), rv = find(v);
                if (ru != rv)
                    parent[ru] = rv;
            }
        std::int64_t components = 0;
        for (NodeId v = 0; v < n_; ++v)
            if (find(v) == v)
                ++components;
        return components;
    }

private:
    void build_csr(const std::vector<std::pair<NodeId, NodeId>>& edges) {
        out_off_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const auto& [u, v] : edges) {
            ++out_off_[u + 1];
            if (!directed_)
                ++out_off_[v + 1];
        }
        for (NodeId v = 0; v < n_; ++v)
            out_off_[v + 1] += out_off_[v];
        out_adj_.resize(static_cast<std::size_t>(out_off_[n_]));
        std::vector<std::int64_t> cursor(out_off_.begin(), out_off_.end() - 1);
        for (const auto& [u, v] : edges) {
            out_adj_[cursor[u]++] = v;
            if (!directed_)
                out_adj_[cursor[v]++] = u;
        }
        sort_rows(out_off_, out_adj_);

        if (directed_) {
            in_off_.assign(static_cast<std::size_t>(n_) + 1, 0);
            for (const auto& [u, v] : edges) {
                (void)u;
                ++in_off_[v + 1];
            }
            for (NodeId v = 0; v < n_; ++v)
                in_off_[v + 1] += in_off_[v];
            in_adj_.resize(static_cast<std::size_t>(in_off_[n_]));
            cursor.assign(in_off_.begin(), in_off_.end() - 1);
            for (const auto& [u, v] : edges)
                in_adj_[cursor[v]++] = u;
            sort_rows(in_off_, in_adj_);
        }
    }

    void sort_rows(const std::vector<std::int64_t>& off, std::vector<NodeId>& adj) {
        for (NodeId v = 0; v < n_; ++v) {
            auto first = adj.begin() + off[v];
            auto last = adj.begin() + off[v + 1];
            std::sort(first, last);
            if (std::adjacent_find(first, last) != last)
                throw std::invalid_argument("duplicate edges are not allowed");
        }
    }

    NodeId n_ = 0;
    bool directed_ = false;
    std::int64_t num_edges_ = 0;
    std::vector<std::int64_t> out_off_, in_off_;
    std::vector<NodeId> out_adj_, in_adj_;
};

struct LoadReport {
    std::int64_t nodes = 0;
    std::int64_t edges = 0;
    std::int64_t duplicates_dropped = 0;
    std::int64_t self_loops_dropped = 0;
};

struct LoadedGraph {
    Graph graph;
    LoadReport report;
};

namespace detail {

inline bool parse_id_token(const char*& p, const char* end, std::int64_t& out) {
    if (p == end || *p < '0' || *p > '9')
        return false;
    std::int64_t value = 0;
    while (p != end && *p >= '0' && *p <= '9') {
        if (value > (INT64_MAX - (*p - '0')) / 10)
            return false;
        value = value * 10 + (*p - '0');
        ++p;
    }
    out = value;
    return true;
}

}  // namespace detail

/// Reads a whitespace-separated edge list. Lines whose first non-blank
/// character is '#' are comments; blank lines are skipped. Every other line
/// must hold exactly two non-negative integer ids, which are remapped to
/// 0..n-1 in order of first appearance (ids on dropped lines still claim a
/// slot). Self-loops and repeated edges are dropped and counted; for
/// undirected input the pair {u,v} is repeated regardless of orientation.
/// Throws ParseError with a 1-based line number on malformed content and
/// std::invalid_argument when no data lines are present.
inline LoadedGraph load_edge_list(std::istream& in, bool directed) {
    std::unordered_map<std::int64_t, NodeId> remap;
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::pair<NodeId, NodeId>> edges;
    LoadReport report;

    auto intern = [&](std::int64_t raw) {
        auto [it, inserted] = remap.emplace(raw, static_cast<NodeId>(remap.size()));
        (void)inserted;
        return it->second;
    };

    std::string line;
    std::int64_t line_no = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p != end && (*p == ' ' || *p == '\t' || *p == '\r'))
            ++p;
        if (p == end || *p == '#')
            continue;

        std::int64_t raw_u = 0, raw_v = 0;
        if (!detail::parse_id_token(p, end, raw_u))
            throw ParseError("line " + std::to_string(line_no) + ": expected integer node id");
        if (p == end || (*p != ' ' && *p != '\t'))
            throw ParseError("line " + std::to_string(line_no) + ": expected two node ids");
        while (p != end && (*p == ' ' || *p == '\t'))
            ++p;
        if (!detail::parse_id_token(p, end, raw_v))
            throw ParseError("line " + std::to_string(line_no) + ": expected integer node id");
        while (p != end && (*p == ' ' || *p == '\t' || *p == '\r'))
            ++p;
        if (p != end)
            throw ParseError("line " + std::to_string(line_no) + ": trailing content after edge");

        saw_data = true;
        NodeId u = intern(raw_u);
        NodeId v = intern(raw_v);
        if (u == v) {
            ++report.self_loops_dropped;
            continue;
        }
        std::uint64_t a = static_cast<std::uint32_t>(u), b = static_cast<std::uint32_t>(v);
        if (!directed && a > b)
            std::swap(a, b);
        if (!seen.insert((a << 32) | b).second) {
            ++report.duplicates_dropped;
            continue;
        }
        edges.emplace_back(u, v);
    }
    if (!saw_data)
        throw std::invalid_argument("edge list holds no data lines");

    report.nodes = static_cast<std::int64_t>(remap.size());
    report.edges = static_cast<std::int64_t>(edges.size());
    return {Graph(static_cast<NodeId>(remap.size()), edges, directed), report};
}

}  // namespace pushpull
