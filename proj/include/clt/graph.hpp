#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "clt/error.hpp"

namespace clt {

using NodeId = std::uint32_t; // 0-based internally; files use 1-based ids
using EdgeId = std::uint32_t;

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
};

/// Directed graph with a per-node in-neighbor index. The stored edge list has
/// no self-loops and no duplicates; self-influence is added separately by the
/// network compiler.
class Graph {
public:
    Graph() = default;
    Graph(std::uint32_t node_count, std::vector<Edge> edges);

    std::uint32_t node_count() const { return n_; }
    std::uint32_t edge_count() const { return static_cast<std::uint32_t>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    /// Edge ids of in-edges of `v` (sources are in-neighbors).
    const std::vector<EdgeId>& in_edges(NodeId v) const { return in_edges_[v]; }
    std::uint32_t in_degree(NodeId v) const {
        return static_cast<std::uint32_t>(in_edges_[v].size());
    }

    bool operator==(const Graph& o) const {
        return n_ == o.n_ && edges_equal(o);
    }

private:
    bool edges_equal(const Graph& o) const;

    std::uint32_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> in_edges_;
};

} // namespace clt
