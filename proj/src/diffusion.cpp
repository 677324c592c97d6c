#include "clt/diffusion.hpp"

namespace clt {

namespace {

void check_prev(const CltInstance& instance, const CascadeLabels& prev) {
    if (prev.size() != instance.node_count())
        fail(ErrorCode::ShapeMismatch, "status has wrong node count");
    for (CascadeId s : prev)
        if (s > instance.cascade_count())
            fail(ErrorCode::InvariantViolation, "status label out of cascade range");
}

} // namespace

ScaledValue influence_sum(const CltInstance& instance, const CascadeLabels& prev, NodeId node,
                          CascadeId cascade) {
    if (node >= instance.node_count() || cascade < 1 || cascade > instance.cascade_count())
        fail(ErrorCode::IndexOutOfRange, "influence_sum index out of range");
    check_prev(instance, prev);
    std::int64_t sum = 0;
    for (EdgeId e : instance.graph().in_edges(node))
        if (prev[instance.graph().edge(e).src] == cascade)
            sum += instance.weight_units(e, cascade);
    return {sum, instance.precision()};
}

StepOutcome step(const CltInstance& instance, const CascadeLabels& prev) {
    check_prev(instance, prev);
    const std::uint32_t n = instance.node_count();
    const std::uint32_t s_count = instance.cascade_count();
    StepOutcome out;
    out.phase1.assign(n, 0);
    out.phase2.assign(n, 0);

    // Per-node per-cascade influence sums, accumulated edge-wise: an edge
    // contributes only to its source's own cascade.
    std::vector<std::int64_t> zeta(static_cast<std::size_t>(n) * s_count, 0);
    for (EdgeId e = 0; e < instance.graph().edge_count(); ++e) {
        const Edge& edge = instance.graph().edge(e);
        CascadeId s = prev[edge.src];
        if (s != 0 && prev[edge.dst] == 0)
            zeta[static_cast<std::size_t>(edge.dst) * s_count + s - 1] +=
                instance.weight_units(e, s);
    }

    for (NodeId v = 0; v < n; ++v) {
        if (prev[v] != 0) {
            out.phase1[v] = 1ULL << (prev[v] - 1);
            out.phase2[v] = prev[v];
            continue;
        }
        std::uint64_t mask = 0;
        CascadeId best = 0;
        std::int64_t best_sum = -1;
        for (CascadeId s = 1; s <= s_count; ++s) {
            std::int64_t z = zeta[static_cast<std::size_t>(v) * s_count + s - 1];
            if (z >= instance.threshold_units(v, s)) {
                mask |= 1ULL << (s - 1);
                if (z > best_sum) { // strict: ties keep the smaller index
                    best_sum = z;
                    best = s;
                }
            }
        }
        out.phase1[v] = mask;
        out.phase2[v] = best;
    }
    return out;
}

StatusTensor run(const CltInstance& instance, const CascadeLabels& initial) {
    StatusTensor tensor;
    tensor.initial = initial;
    tensor.logical_steps = instance.node_count();
    const CascadeLabels* prev = &initial;
    for (std::uint32_t t = 1; t <= tensor.logical_steps; ++t) {
        StepOutcome outcome = step(instance, *prev);
        bool fixed = outcome.phase2 == *prev;
        // The first repeated step is kept: later steps replicate it exactly.
        tensor.steps.push_back(std::move(outcome));
        prev = &tensor.steps.back().phase2;
        if (fixed) break;
    }
    return tensor;
}

CascadeLabels influence_function(const CltInstance& instance, const CascadeLabels& initial) {
    return run(instance, initial).final_phase2();
}

} // namespace clt
