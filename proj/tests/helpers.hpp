#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "clt/datagen.hpp"
#include "clt/instance.hpp"
#include "clt/scaled.hpp"

namespace clt::test {

struct EdgeSpec {
    std::uint32_t src;      // 1-based
    std::uint32_t dst;      // 1-based
    std::uint32_t cascade;
    std::string weight;
};

/// Small-instance builder: 1-based nodes, decimal-string weights/thresholds.
inline CltInstance make_instance_q3(std::uint32_t n, std::uint32_t s,
                                    const std::vector<EdgeSpec>& weights,
                                    const std::string& default_theta = "0.500") {
    std::vector<Edge> edges;
    auto edge_id = [&](std::uint32_t src, std::uint32_t dst) -> std::uint32_t {
        for (std::uint32_t e = 0; e < edges.size(); ++e)
            if (edges[e].src == src - 1 && edges[e].dst == dst - 1) return e;
        edges.push_back({src - 1, dst - 1});
        return static_cast<std::uint32_t>(edges.size() - 1);
    };
    for (const EdgeSpec& w : weights) edge_id(w.src, w.dst);
    CltInstance instance(Graph(n, edges), s, 3);
    for (NodeId v = 0; v < n; ++v)
        for (CascadeId c = 1; c <= s; ++c)
            instance.set_threshold_units(v, c,
                                         scaled_from_decimal_string(default_theta, 3).units);
    for (const EdgeSpec& w : weights)
        instance.set_weight_units(edge_id(w.src, w.dst), w.cascade,
                                  scaled_from_decimal_string(w.weight, 3).units);
    return instance;
}

inline CascadeLabels seeds(std::uint32_t n,
                           const std::vector<std::pair<std::uint32_t, CascadeId>>& entries) {
    CascadeLabels labels(n, 0);
    for (auto [node, cascade] : entries) labels[node - 1] = cascade;
    return labels;
}

/// Random valid instance via the generators (both graph families/schemes).
inline CltInstance random_instance(std::uint32_t n_hint, std::uint32_t s, std::uint64_t seed,
                                   WeightScheme scheme = WeightScheme::WeightedCascade) {
    Graph graph = gen_power_law(std::max(3u, n_hint), std::min(2u, std::max(1u, n_hint / 2)),
                                seed);
    return make_instance(graph, s, 3, scheme, seed ^ 0x5bd1e995).instance;
}

} // namespace clt::test
