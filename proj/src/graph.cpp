#include "clt/graph.hpp"

#include <algorithm>
#include <unordered_set>

namespace clt {

Graph::Graph(std::uint32_t node_count, std::vector<Edge> edges)
    : n_(node_count), edges_(std::move(edges)) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (const Edge& e : edges_) {
        if (e.src >= n_ || e.dst >= n_)
            fail(ErrorCode::IndexOutOfRange, "edge endpoint out of range");
        if (e.src == e.dst)
            fail(ErrorCode::InvariantViolation, "self-loop in edge list");
        std::uint64_t k = (static_cast<std::uint64_t>(e.src) << 32) | e.dst;
        if (!seen.insert(k).second)
            fail(ErrorCode::InvariantViolation, "duplicate edge in edge list");
    }
    in_edges_.assign(n_, {});
    for (EdgeId i = 0; i < edges_.size(); ++i)
        in_edges_[edges_[i].dst].push_back(i);
}

bool Graph::edges_equal(const Graph& o) const {
    if (edges_.size() != o.edges_.size()) return false;
    auto key = [](const Edge& e) {
        return (static_cast<std::uint64_t>(e.src) << 32) | e.dst;
    };
    std::vector<std::uint64_t> a, b;
    a.reserve(edges_.size());
    b.reserve(edges_.size());
    for (const Edge& e : edges_) a.push_back(key(e));
    for (const Edge& e : o.edges_) b.push_back(key(e));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

} // namespace clt
