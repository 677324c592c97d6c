#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clt/graph.hpp"
#include "clt/scaled.hpp"

namespace clt {

using CascadeId = std::uint32_t; // 1-based; 0 means "inactive"

/// A competitive linear threshold model: graph, per-edge-per-cascade weights
/// and per-node-per-cascade thresholds, all on the 10^(-q) grid.
///
/// Weight units are indexed [cascade-1][edge id], thresholds
/// [cascade-1][node]. Cascade count is capped at 64 so per-node candidate
/// sets fit in a machine word.
class CltInstance {
public:
    static constexpr std::uint32_t kMaxCascades = 64;

    CltInstance() = default;
    CltInstance(Graph graph, std::uint32_t cascade_count, std::int32_t q);

    const Graph& graph() const { return graph_; }
    std::uint32_t node_count() const { return graph_.node_count(); }
    std::uint32_t cascade_count() const { return s_; }
    std::int32_t precision() const { return q_; }
    std::int64_t unit_one() const { return unit_one_; } // 10^q

    std::int64_t weight_units(EdgeId e, CascadeId s) const { return weights_[s - 1][e]; }
    std::int64_t threshold_units(NodeId v, CascadeId s) const { return thetas_[s - 1][v]; }
    ScaledValue weight(EdgeId e, CascadeId s) const { return {weights_[s - 1][e], q_}; }
    ScaledValue threshold(NodeId v, CascadeId s) const { return {thetas_[s - 1][v], q_}; }

    void set_weight_units(EdgeId e, CascadeId s, std::int64_t units);
    void set_threshold_units(NodeId v, CascadeId s, std::int64_t units);

    /// Exact in-weight column sum for (node, cascade), in units.
    std::int64_t in_weight_sum_units(NodeId v, CascadeId s) const;

    bool operator==(const CltInstance& o) const;

private:
    Graph graph_;
    std::uint32_t s_ = 0;
    std::int32_t q_ = 0;
    std::int64_t unit_one_ = 1;
    std::vector<std::vector<std::int64_t>> weights_; // [s-1][edge]
    std::vector<std::vector<std::int64_t>> thetas_;  // [s-1][node]
};

struct ValidationIssue {
    enum class Kind { Normalization, ThresholdRange, WeightRange };
    Kind kind;
    NodeId node;      // target node (normalization/threshold) or edge dst
    CascadeId cascade;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

/// Reports every violated model invariant: per-(node, cascade) in-weight sums
/// above one, thresholds outside [10^-q, 1], weights outside [0, 1].
ValidationReport validate_instance(const CltInstance& instance);

} // namespace clt
