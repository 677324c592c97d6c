#pragma once

#include "clt/instance.hpp"
#include "clt/scaled.hpp"
#include "clt/status.hpp"

namespace clt {

/// Influence pulled by `node` from its s-active in-neighbors under `prev`
/// phase-2 statuses. Exact fixed-point sum; empty sums are zero.
ScaledValue influence_sum(const CltInstance& instance, const CascadeLabels& prev, NodeId node,
                          CascadeId cascade);

/// One diffusion step. Phase 1 marks, for every inactive node, each cascade
/// whose influence sum reaches the node's threshold (active nodes keep their
/// bit). Phase 2 resolves newly multi-activated nodes to the candidate with
/// the largest influence sum, ties to the smallest cascade index; active
/// nodes never change cascade.
StepOutcome step(const CltInstance& instance, const CascadeLabels& prev);

/// Runs `step` for node_count steps with early fixed-point detection. The
/// returned trajectory always has node_count logical steps.
StatusTensor run(const CltInstance& instance, const CascadeLabels& initial);

/// Final phase-2 status after node_count steps (Definition of the influence
/// function).
CascadeLabels influence_function(const CltInstance& instance, const CascadeLabels& initial);

} // namespace clt
