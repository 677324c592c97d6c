#include "clt/status.hpp"

namespace clt {

void check_sample_consistency(const Sample& sample, std::uint32_t node_count,
                              std::uint32_t cascade_count) {
    auto bad = [](const std::string& what) { fail(ErrorCode::InconsistentSample, what); };
    if (sample.initial.size() != node_count) bad("initial status has wrong node count");
    if (sample.logical_steps < sample.distinct_steps()) bad("logical step count too small");
    for (CascadeId s : sample.initial)
        if (s > cascade_count) bad("initial label out of range");

    const CascadeLabels* prev = &sample.initial;
    for (const StepOutcome& step : sample.steps) {
        if (step.phase1.size() != node_count || step.phase2.size() != node_count)
            bad("step status has wrong node count");
        for (NodeId v = 0; v < node_count; ++v) {
            CascadeId before = (*prev)[v];
            CascadeId after = step.phase2[v];
            if (after > cascade_count) bad("phase-2 label out of range");
            if (step.phase1[v] >> cascade_count) bad("phase-1 candidate out of range");
            if (before != 0) {
                if (after != before) bad("active node changed or lost its cascade");
                if ((step.phase1[v] & (1ULL << (before - 1))) == 0)
                    bad("phase 1 dropped an active node's bit");
            } else if (after != 0) {
                if ((step.phase1[v] & (1ULL << (after - 1))) == 0)
                    bad("phase-2 winner was not a phase-1 candidate");
            }
        }
        prev = &step.phase2;
    }
}

std::vector<std::uint8_t> labels_to_bits(const CascadeLabels& labels,
                                         std::uint32_t cascade_count) {
    std::vector<std::uint8_t> bits(labels.size() * cascade_count, 0);
    for (NodeId v = 0; v < labels.size(); ++v)
        if (labels[v] != 0) {
            if (labels[v] > cascade_count)
                fail(ErrorCode::IndexOutOfRange, "label out of range");
            bits[static_cast<std::size_t>(v) * cascade_count + labels[v] - 1] = 1;
        }
    return bits;
}

CascadeLabels labels_from_bits(const std::vector<std::uint8_t>& bits, std::uint32_t node_count,
                               std::uint32_t cascade_count) {
    if (bits.size() != static_cast<std::size_t>(node_count) * cascade_count)
        fail(ErrorCode::ShapeMismatch, "bit matrix has wrong shape");
    CascadeLabels labels(node_count, 0);
    for (NodeId v = 0; v < node_count; ++v) {
        for (CascadeId s = 1; s <= cascade_count; ++s) {
            if (bits[static_cast<std::size_t>(v) * cascade_count + s - 1]) {
                if (labels[v] != 0)
                    fail(ErrorCode::InvariantViolation,
                         "node " + std::to_string(v + 1) + " active in two cascades");
                labels[v] = s;
            }
        }
    }
    return labels;
}

} // namespace clt
