#pragma once

#include <cstdint>
#include <vector>

#include "clt/error.hpp"
#include "clt/graph.hpp"
#include "clt/instance.hpp"

namespace clt {

/// Per-node resolved status: 0 = inactive, s >= 1 = s-active. A node owns at
/// most one cascade by construction, which encodes the single-ownership
/// invariant of phase-2 slices.
using CascadeLabels = std::vector<CascadeId>;

/// Per-node phase-1 candidate set, bit (s-1) per cascade.
using CandidateMasks = std::vector<std::uint64_t>;

/// One diffusion step: candidates after phase 1, resolved labels after
/// phase 2. phase1 carries already-active nodes' bits, so it is a superset of
/// the previous phase-2 status.
struct StepOutcome {
    CandidateMasks phase1;
    CascadeLabels phase2;

    bool operator==(const StepOutcome& o) const = default;
};

/// Full trajectory of one diffusion run. Steps are stored up to the fixed
/// point; logically the trajectory always has `logical_steps` entries, the
/// trailing ones repeating the fixed point.
struct StatusTensor {
    CascadeLabels initial;
    std::vector<StepOutcome> steps; // distinct prefix
    std::uint32_t logical_steps = 0;

    std::uint32_t distinct_steps() const { return static_cast<std::uint32_t>(steps.size()); }

    /// True when the stored prefix ends in a repeated status (the run stores
    /// the first repeated step so the fixed point's phase-1 view is kept).
    bool fixed_point_reached() const {
        if (steps.empty()) return logical_steps == 0;
        if (distinct_steps() < logical_steps) return true;
        const CascadeLabels& before =
            steps.size() >= 2 ? steps[steps.size() - 2].phase2 : initial;
        return steps.back().phase2 == before;
    }

    /// Phase-2 labels after step t (t in [0, logical_steps], 0 = initial).
    const CascadeLabels& phase2_at(std::uint32_t t) const {
        if (t == 0) return initial;
        if (t > logical_steps) fail(ErrorCode::IndexOutOfRange, "step index out of range");
        std::uint32_t i = t > distinct_steps() ? distinct_steps() : t;
        return steps[i - 1].phase2;
    }

    /// Phase-1 masks at step t (t in [1, logical_steps]).
    const CandidateMasks& phase1_at(std::uint32_t t) const {
        if (t == 0 || t > logical_steps)
            fail(ErrorCode::IndexOutOfRange, "step index out of range");
        std::uint32_t i = t > distinct_steps() ? distinct_steps() : t;
        return steps[i - 1].phase1;
    }

    const CascadeLabels& final_phase2() const { return phase2_at(logical_steps); }

    bool operator==(const StatusTensor& o) const = default;
};

using Sample = StatusTensor;

/// Ordered list of observed cascades plus the shape metadata needed to
/// interpret them.
struct Dataset {
    std::uint32_t node_count = 0;
    std::uint32_t cascade_count = 0;
    std::int32_t precision = 0;
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
    bool operator==(const Dataset& o) const = default;
};

/// Structural self-consistency of one sample: label ranges, monotone
/// persistence, phase-1 carrying previously active bits, phase-2 labels drawn
/// from phase-1 candidates. Throws InconsistentSample on the first violation.
void check_sample_consistency(const Sample& sample, std::uint32_t node_count,
                              std::uint32_t cascade_count);

/// Dense (node, cascade) bit view of labels, for metrics and bindings.
std::vector<std::uint8_t> labels_to_bits(const CascadeLabels& labels,
                                         std::uint32_t cascade_count);
CascadeLabels labels_from_bits(const std::vector<std::uint8_t>& bits, std::uint32_t node_count,
                               std::uint32_t cascade_count);

} // namespace clt
