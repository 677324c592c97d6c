#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "clt/instance.hpp"
#include "clt/lp.hpp"
#include "clt/status.hpp"

namespace clt {

enum class ErmObjective : std::uint8_t {
    Feasibility, // zero objective: any point replaying the data exactly
    MinWeight,   // minimize total learned weight (sparser models)
    MaxMargin,   // maximize a shared slack on the strict rows
};

struct ErmConfig {
    /// Margin realizing the strict inequalities, in 10^-q units (>= 1). Any
    /// strict inequality between grid values has slack >= one unit, so the
    /// default is always valid for data a grid model generated.
    std::int64_t epsilon_units = 1;
    /// Restrict candidate in-neighbors to the true in-edges of this graph
    /// instead of all other nodes (ablation mode; the default treats the
    /// graph as unknown).
    std::optional<Graph> known_graph;
    ErmObjective objective = ErmObjective::Feasibility;
    LpSolverConfig solver;
    std::uint32_t jobs = 1; // 0 = hardware concurrency
};

struct NodeLpBuild {
    LpProblem problem;
    NodeId node = 0;
    std::vector<std::pair<NodeId, CascadeId>> weight_vars; // by variable index
    std::vector<std::uint32_t> theta_vars;                 // [s-1] -> variable index
    std::uint64_t emitted_rows = 0;   // after dedup/domination reduction
    std::uint64_t transcribed_rows = 0; // full per-step transcription count
};

struct BuildOptions {
    /// Drop rows implied by later ones through weight nonnegativity (within a
    /// sample, per-cascade active sets only grow, so one maximal "stays
    /// inactive" row carries all earlier ones). The feasible set is
    /// unchanged.
    bool reduce_dominated_rows = true;
    /// Fix to zero candidate weights that appear in no activation row (they
    /// only relax normalization). Shrinks the solver problem; the public
    /// per-node LP keeps the full variable set.
    bool prune_unused_vars = false;
};

/// Per-node constraint system over unit-scaled variables (weights in
/// [0, 10^q], thresholds in [1, 10^q]): activation rows per observed step
/// while the node was inactive, phase-2 dominance rows at its activation
/// step, and one normalization row per cascade.
NodeLpBuild build_node_lp(const Dataset& dataset, NodeId node, const ErmConfig& config,
                          const BuildOptions& options = {});

struct NodeDiagnostics {
    NodeId node = 0;
    LpStatus status = LpStatus::Feasible;
    bool snapped = true;
    std::uint64_t rows = 0;
    std::uint64_t transcribed_rows = 0;
    std::uint64_t variables = 0;
    std::uint64_t iterations = 0;
    double seconds = 0.0;
};

struct LearnedInstance {
    CltInstance instance; // learned edges with weight zero pruned
    std::vector<NodeDiagnostics> diagnostics;
    bool all_feasible = true;
    bool all_snapped = true;
};

/// Solves one LP per node (optionally in parallel) and assembles the learned
/// model. Throws NodeLpInfeasible when any node system has no solution —
/// data not generated by any grid CLT model, or a margin above the data's
/// true slack.
LearnedInstance fit(const Dataset& dataset, const ErmConfig& config);

/// Prediction = influence function of the learned model.
CascadeLabels predict(const LearnedInstance& learned, const CascadeLabels& initial);

/// Replay every training sample through the learned model; returns the
/// number of mismatched final (node, cascade) cells (0 = zero training
/// error).
std::uint64_t training_replay_mismatches(const LearnedInstance& learned,
                                         const Dataset& dataset);

struct WitnessReport {
    std::uint64_t rows_checked = 0;
    std::uint64_t violations = 0;
    /// Smallest exact slack over all checked rows (slack >= 0 means
    /// satisfied; strict rows carry their margin in the rhs already).
    std::int64_t min_slack_units = 0;
};

/// Substitutes `truth` into the full (unreduced) constraint transcription of
/// every node and checks each row with exact integer arithmetic.
WitnessReport verify_witness(const Dataset& dataset, const CltInstance& truth,
                             const ErmConfig& config);

} // namespace clt
