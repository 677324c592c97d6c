#include "clt/erm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "clt/diffusion.hpp"

namespace clt {

namespace {

// One activation/dominance/normalization row in node-variable space:
// sum of +1 weights over `plus` (cascade s_plus) minus weights over `minus`
// (cascade s_minus) minus theta(s_theta), relation, rhs in units.
struct RawRow {
    CascadeId s_plus = 0;
    const std::vector<NodeId>* plus = nullptr;
    CascadeId s_minus = 0;
    const std::vector<NodeId>* minus = nullptr;
    CascadeId s_theta = 0; // 0 = no threshold term
    Relation relation = Relation::Ge;
    std::int64_t rhs_units = 0;
};

/// Active candidate in-neighbors of `node`, per cascade, at one prev status.
struct ActiveSets {
    std::vector<std::vector<NodeId>> per_cascade; // [s-1] sorted node lists
};

class RowEmitter {
public:
    RowEmitter(const Dataset& dataset, NodeId node, const ErmConfig& config)
        : dataset_(dataset), node_(node), config_(config) {
        if (dataset.samples.empty()) fail(ErrorCode::EmptyDataset, "dataset has no samples");
        s_count_ = dataset.cascade_count;
        if (config.known_graph) {
            const Graph& g = *config.known_graph;
            for (EdgeId e : g.in_edges(node)) candidates_.push_back(g.edge(e).src);
            std::sort(candidates_.begin(), candidates_.end());
        } else {
            for (NodeId j = 0; j < dataset.node_count; ++j)
                if (j != node) candidates_.push_back(j);
        }
        candidate_set_.assign(dataset.node_count, 0);
        for (NodeId j : candidates_) candidate_set_[j] = 1;
    }

    const std::vector<NodeId>& candidates() const { return candidates_; }
    std::uint64_t transcribed() const { return transcribed_; }

    /// Emits the node's rows sample by sample. With `reduce` set, dominated
    /// "stays inactive" rows collapse onto the maximal active set.
    void emit(bool reduce, const std::function<void(const RawRow&)>& sink) {
        for (const Sample& sample : dataset_.samples) {
            if (sample.initial[node_] != 0) continue; // seeded: no constraints
            if (reduce)
                emit_sample_reduced(sample, sink);
            else
                emit_sample_full(sample, sink);
        }
    }

private:
    const Dataset& dataset_;
    NodeId node_;
    const ErmConfig& config_;
    std::uint32_t s_count_ = 0;
    std::vector<NodeId> candidates_;
    std::vector<std::uint8_t> candidate_set_;
    std::uint64_t transcribed_ = 0;

    ActiveSets active_sets(const CascadeLabels& prev) const {
        ActiveSets sets;
        sets.per_cascade.assign(s_count_, {});
        for (NodeId j = 0; j < prev.size(); ++j)
            if (prev[j] != 0 && candidate_set_[j]) sets.per_cascade[prev[j] - 1].push_back(j);
        return sets;
    }

    /// First step at which the node is active, or 0 if it never activates
    /// within the stored prefix (it then stays inactive for all logical
    /// steps, since the prefix ends at the fixed point).
    std::uint32_t activation_step(const Sample& sample) const {
        for (std::uint32_t t = 1; t <= sample.distinct_steps(); ++t)
            if (sample.steps[t - 1].phase2[node_] != 0) return t;
        return 0;
    }

    void emit_phase_rows(const Sample& sample, std::uint32_t t, const ActiveSets& prev_sets,
                         const std::function<void(const RawRow&)>& sink) {
        std::uint64_t mask = sample.phase1_at(t)[node_];
        CascadeId winner = sample.phase2_at(t)[node_];
        for (CascadeId s = 1; s <= s_count_; ++s) {
            RawRow row;
            row.s_plus = s;
            row.plus = &prev_sets.per_cascade[s - 1];
            row.s_theta = s;
            if (mask & (1ULL << (s - 1))) {
                row.relation = Relation::Ge;
                row.rhs_units = 0;
            } else {
                row.relation = Relation::Le;
                row.rhs_units = -config_.epsilon_units;
            }
            ++transcribed_;
            sink(row);
        }
        if (winner != 0) {
            for (CascadeId s = 1; s <= s_count_; ++s) {
                if (s == winner || (mask & (1ULL << (s - 1))) == 0) continue;
                RawRow row;
                row.s_plus = winner;
                row.plus = &prev_sets.per_cascade[winner - 1];
                row.s_minus = s;
                row.minus = &prev_sets.per_cascade[s - 1];
                row.relation = Relation::Ge;
                row.rhs_units = s < winner ? config_.epsilon_units : 0;
                ++transcribed_;
                sink(row);
            }
        }
    }

    void emit_sample_full(const Sample& sample, const std::function<void(const RawRow&)>& sink) {
        // The stored prefix keeps the first repeated step, so iterating it
        // covers every distinct logical step's rows.
        for (std::uint32_t t = 1; t <= sample.distinct_steps(); ++t) {
            if (sample.phase2_at(t - 1)[node_] != 0) break; // active: no more rows
            ActiveSets prev_sets = active_sets(sample.phase2_at(t - 1));
            emit_phase_rows(sample, t, prev_sets, sink);
        }
    }

    void emit_sample_reduced(const Sample& sample,
                             const std::function<void(const RawRow&)>& sink) {
        std::uint32_t t0 = activation_step(sample);
        if (t0 == 0) {
            // Never activates: the last stored prev status dominates all
            // earlier "stays inactive" rows.
            std::uint32_t last_prev = sample.distinct_steps() >= 1
                                          ? sample.distinct_steps() - 1
                                          : 0;
            // Count what full transcription would have produced.
            for (std::uint32_t t = 1; t <= sample.distinct_steps(); ++t)
                transcribed_ += s_count_;
            ActiveSets sets = active_sets(sample.phase2_at(last_prev));
            for (CascadeId s = 1; s <= s_count_; ++s) {
                RawRow row;
                row.s_plus = s;
                row.plus = &sets.per_cascade[s - 1];
                row.s_theta = s;
                row.relation = Relation::Le;
                row.rhs_units = -config_.epsilon_units;
                sink(row);
            }
            return;
        }
        for (std::uint32_t t = 1; t < t0; ++t) transcribed_ += s_count_;
        ActiveSets at_activation = active_sets(sample.phase2_at(t0 - 1));
        emit_phase_rows(sample, t0, at_activation, sink);
        if (t0 >= 2) {
            // Candidate cascades at t0 still need their strongest earlier
            // "was not yet a candidate" row.
            ActiveSets before = active_sets(sample.phase2_at(t0 - 2));
            std::uint64_t mask = sample.phase1_at(t0)[node_];
            for (CascadeId s = 1; s <= s_count_; ++s) {
                if ((mask & (1ULL << (s - 1))) == 0) continue;
                RawRow row;
                row.s_plus = s;
                row.plus = &before.per_cascade[s - 1];
                row.s_theta = s;
                row.relation = Relation::Le;
                row.rhs_units = -config_.epsilon_units;
                sink(row);
            }
        }
    }
};

std::uint64_t hash_row(const std::vector<LpTerm>& terms, Relation rel, double rhs) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    for (const LpTerm& t : terms) {
        mix(t.var);
        mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(t.coef)));
    }
    mix(static_cast<std::uint64_t>(rel));
    mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(rhs)));
    return h;
}

} // namespace

NodeLpBuild build_node_lp(const Dataset& dataset, NodeId node, const ErmConfig& config,
                          const BuildOptions& options) {
    if (dataset.samples.empty()) fail(ErrorCode::EmptyDataset, "dataset has no samples");
    if (node >= dataset.node_count) fail(ErrorCode::IndexOutOfRange, "node out of range");
    if (config.epsilon_units < 1)
        fail(ErrorCode::InvalidInput, "margin must be at least one unit");

    const std::uint32_t s_count = dataset.cascade_count;
    const std::int64_t one = pow10_i64(dataset.precision);

    RowEmitter emitter(dataset, node, config);

    // First pass: collect rows in node-variable space and find the support.
    struct PendingRow {
        std::vector<LpTerm> terms;
        Relation relation;
        double rhs;
    };

    std::vector<std::uint8_t> used; // (candidate_pos * S + s-1) -> appears in a row
    std::vector<std::uint32_t> cand_pos(dataset.node_count, 0);
    const std::vector<NodeId>& candidates = emitter.candidates();
    for (std::uint32_t p = 0; p < candidates.size(); ++p) cand_pos[candidates[p]] = p;
    used.assign(candidates.size() * s_count, 0);

    auto w_slot = [&](NodeId j, CascadeId s) { return cand_pos[j] * s_count + (s - 1); };

    std::vector<PendingRow> rows;
    std::unordered_set<std::uint64_t> seen;
    auto sink = [&](const RawRow& raw) {
        PendingRow row;
        for (NodeId j : *raw.plus) {
            used[w_slot(j, raw.s_plus)] = 1;
            row.terms.push_back({w_slot(j, raw.s_plus), 1.0});
        }
        if (raw.minus)
            for (NodeId j : *raw.minus) {
                used[w_slot(j, raw.s_minus)] = 1;
                row.terms.push_back({static_cast<std::uint32_t>(w_slot(j, raw.s_minus)), -1.0});
            }
        if (raw.s_theta != 0)
            row.terms.push_back(
                {static_cast<std::uint32_t>(used.size() + raw.s_theta - 1), -1.0});
        row.relation = raw.relation;
        row.rhs = static_cast<double>(raw.rhs_units);
        if (seen.insert(hash_row(row.terms, row.relation, row.rhs)).second)
            rows.push_back(std::move(row));
    };
    emitter.emit(options.reduce_dominated_rows, sink);

    // Variable layout: kept weight slots first, then thetas.
    NodeLpBuild build;
    build.node = node;
    std::vector<std::uint32_t> slot_to_var(used.size(), UINT32_MAX);
    for (std::uint32_t p = 0; p < candidates.size(); ++p) {
        for (CascadeId s = 1; s <= s_count; ++s) {
            std::uint32_t slot = p * s_count + (s - 1);
            if (options.prune_unused_vars && !used[slot]) continue;
            std::string name = "w_" + std::to_string(candidates[p] + 1) + "_" +
                               std::to_string(s);
            slot_to_var[slot] = build.problem.add_variable(name, 0.0, static_cast<double>(one));
            build.weight_vars.push_back({candidates[p], s});
        }
    }
    build.theta_vars.resize(s_count);
    for (CascadeId s = 1; s <= s_count; ++s) {
        build.theta_vars[s - 1] = build.problem.add_variable(
            "th_" + std::to_string(s), 1.0, static_cast<double>(one));
    }

    for (PendingRow& row : rows) {
        std::vector<LpTerm> terms;
        terms.reserve(row.terms.size());
        for (const LpTerm& t : row.terms) {
            if (t.var >= used.size()) { // theta slot
                terms.push_back({build.theta_vars[t.var - used.size()], t.coef});
            } else {
                std::uint32_t var = slot_to_var[t.var];
                if (var == UINT32_MAX) continue; // pruned, weight fixed at zero
                terms.push_back({var, t.coef});
            }
        }
        build.problem.add_constraint(std::move(terms), row.relation, row.rhs);
    }

    // Normalization per cascade over the kept weight variables.
    for (CascadeId s = 1; s <= s_count; ++s) {
        std::vector<LpTerm> terms;
        for (std::uint32_t v = 0; v < build.weight_vars.size(); ++v)
            if (build.weight_vars[v].second == s) terms.push_back({v, 1.0});
        build.problem.add_constraint(std::move(terms), Relation::Le,
                                     static_cast<double>(one),
                                     "norm_" + std::to_string(s));
    }

    build.emitted_rows = build.problem.constraints.size();
    build.transcribed_rows = emitter.transcribed() + s_count;
    return build;
}

namespace {

void apply_objective(const NodeLpBuild& build, const ErmConfig& config, LpProblem& problem) {
    switch (config.objective) {
        case ErmObjective::Feasibility: break;
        case ErmObjective::MinWeight:
            problem.sense = LpSense::Minimize;
            for (std::uint32_t v = 0; v < build.weight_vars.size(); ++v)
                problem.objective.push_back({v, 1.0});
            break;
        case ErmObjective::MaxMargin: {
            // Shared extra slack on strict rows, capped to keep it bounded.
            std::uint32_t t = problem.add_variable("margin", 0.0,
                                                   10.0 * config.epsilon_units);
            for (LpConstraint& c : problem.constraints) {
                if (c.name.rfind("norm_", 0) == 0) continue;
                if (c.relation == Relation::Le && c.rhs < 0) c.terms.push_back({t, 1.0});
                if (c.relation == Relation::Ge && c.rhs > 0) c.terms.push_back({t, -1.0});
            }
            problem.sense = LpSense::Maximize;
            problem.objective.push_back({t, 1.0});
            break;
        }
    }
}

void run_parallel(std::uint32_t count, std::uint32_t jobs,
                  const std::function<void(std::uint32_t)>& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, count == 0 ? 1u : count);
    if (jobs <= 1) {
        for (std::uint32_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint32_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::uint32_t w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::uint32_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

LearnedInstance fit(const Dataset& dataset, const ErmConfig& config) {
    if (dataset.samples.empty()) fail(ErrorCode::EmptyDataset, "dataset has no samples");
    for (const Sample& sample : dataset.samples)
        check_sample_consistency(sample, dataset.node_count, dataset.cascade_count);

    const std::uint32_t n = dataset.node_count;
    const std::uint32_t s_count = dataset.cascade_count;
    const std::int64_t one = pow10_i64(dataset.precision);

    struct NodeResult {
        NodeDiagnostics diag;
        std::vector<std::pair<NodeId, CascadeId>> weight_vars;
        std::vector<std::int64_t> weight_units;
        std::vector<std::int64_t> theta_units;
    };
    std::vector<NodeResult> results(n);

    BuildOptions options;
    options.reduce_dominated_rows = true;
    options.prune_unused_vars = true;

    run_parallel(n, config.jobs, [&](std::uint32_t node) {
        auto start = std::chrono::steady_clock::now();
        NodeLpBuild build = build_node_lp(dataset, node, config, options);
        apply_objective(build, config, build.problem);

        LpSolverConfig solver_config = config.solver;
        solver_config.snap_grid = 1.0;
        LpSolution sol = solve(build.problem, solver_config);

        NodeResult& result = results[node];
        result.diag.node = node;
        result.diag.status = sol.status;
        result.diag.rows = build.emitted_rows;
        result.diag.transcribed_rows = build.transcribed_rows;
        result.diag.variables = build.problem.variables.size();
        result.diag.iterations = sol.iterations;
        result.diag.snapped = sol.snapped;
        result.weight_vars = build.weight_vars;
        if (sol.status == LpStatus::Feasible) {
            result.weight_units.resize(build.weight_vars.size());
            result.theta_units.resize(s_count);
            for (std::uint32_t v = 0; v < build.weight_vars.size(); ++v)
                result.weight_units[v] = sol.snapped
                                             ? sol.snapped_units[v]
                                             : std::llround(sol.values[v]);
            for (CascadeId s = 1; s <= s_count; ++s) {
                std::uint32_t var = build.theta_vars[s - 1];
                result.theta_units[s - 1] =
                    sol.snapped ? sol.snapped_units[var] : std::llround(sol.values[var]);
                result.theta_units[s - 1] =
                    std::clamp<std::int64_t>(result.theta_units[s - 1], 1, one);
            }
        }
        result.diag.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    LearnedInstance learned;
    std::vector<NodeId> infeasible;
    for (const NodeResult& result : results) {
        learned.diagnostics.push_back(result.diag);
        if (result.diag.status != LpStatus::Feasible) {
            infeasible.push_back(result.diag.node);
            learned.all_feasible = false;
        }
        if (!result.diag.snapped) learned.all_snapped = false;
    }
    if (!infeasible.empty()) {
        std::string msg = "no grid model replays the data; infeasible node LPs:";
        for (NodeId v : infeasible) msg += " " + std::to_string(v + 1);
        fail(ErrorCode::NodeLpInfeasible, msg);
    }

    // Assemble the learned model, pruning weight-zero edges.
    std::vector<Edge> edges;
    std::vector<std::vector<std::int64_t>> edge_weights; // parallel to edges, [s-1]
    std::unordered_map<std::uint64_t, std::uint32_t> edge_index;
    for (NodeId node = 0; node < n; ++node) {
        const NodeResult& result = results[node];
        for (std::uint32_t v = 0; v < result.weight_vars.size(); ++v) {
            if (result.weight_units[v] == 0) continue;
            auto [src, cascade] = result.weight_vars[v];
            std::uint64_t key = (static_cast<std::uint64_t>(src) << 32) | node;
            auto it = edge_index.find(key);
            std::uint32_t idx;
            if (it == edge_index.end()) {
                idx = static_cast<std::uint32_t>(edges.size());
                edges.push_back({src, node});
                edge_weights.emplace_back(s_count, 0);
                edge_index.emplace(key, idx);
            } else {
                idx = it->second;
            }
            edge_weights[idx][cascade - 1] = result.weight_units[v];
        }
    }
    Graph graph(n, edges);
    CltInstance instance(graph, s_count, dataset.precision);
    for (EdgeId e = 0; e < edges.size(); ++e)
        for (CascadeId s = 1; s <= s_count; ++s)
            if (edge_weights[e][s - 1] != 0)
                instance.set_weight_units(e, s, edge_weights[e][s - 1]);
    for (NodeId node = 0; node < n; ++node)
        for (CascadeId s = 1; s <= s_count; ++s)
            instance.set_threshold_units(node, s, results[node].theta_units[s - 1]);
    learned.instance = std::move(instance);
    return learned;
}

CascadeLabels predict(const LearnedInstance& learned, const CascadeLabels& initial) {
    return influence_function(learned.instance, initial);
}

std::uint64_t training_replay_mismatches(const LearnedInstance& learned,
                                         const Dataset& dataset) {
    std::uint64_t mismatches = 0;
    for (const Sample& sample : dataset.samples) {
        CascadeLabels predicted = influence_function(learned.instance, sample.initial);
        const CascadeLabels& truth = sample.final_phase2();
        for (NodeId v = 0; v < predicted.size(); ++v) {
            if (predicted[v] == truth[v]) continue;
            mismatches += (predicted[v] != 0 && truth[v] != 0) ? 2 : 1;
        }
    }
    return mismatches;
}

WitnessReport verify_witness(const Dataset& dataset, const CltInstance& truth,
                             const ErmConfig& config) {
    WitnessReport report;
    report.min_slack_units = std::numeric_limits<std::int64_t>::max();
    const std::uint32_t s_count = dataset.cascade_count;

    // Exact in-weight lookup: weight of edge (j -> i) for cascade s, zero for
    // non-edges (unknown-graph candidates genuinely contribute zero).
    const Graph& g = truth.graph();

    for (NodeId node = 0; node < dataset.node_count; ++node) {
        std::vector<std::int64_t> w(static_cast<std::size_t>(dataset.node_count) * s_count, 0);
        for (EdgeId e : g.in_edges(node))
            for (CascadeId s = 1; s <= s_count; ++s)
                w[static_cast<std::size_t>(g.edge(e).src) * s_count + s - 1] =
                    truth.weight_units(e, s);

        RowEmitter emitter(dataset, node, config);
        auto sink = [&](const RawRow& raw) {
            std::int64_t lhs = 0;
            for (NodeId j : *raw.plus) lhs += w[static_cast<std::size_t>(j) * s_count +
                                                raw.s_plus - 1];
            if (raw.minus)
                for (NodeId j : *raw.minus)
                    lhs -= w[static_cast<std::size_t>(j) * s_count + raw.s_minus - 1];
            if (raw.s_theta != 0) lhs -= truth.threshold_units(node, raw.s_theta);
            std::int64_t slack =
                raw.relation == Relation::Ge ? lhs - raw.rhs_units : raw.rhs_units - lhs;
            ++report.rows_checked;
            if (slack < 0) ++report.violations;
            report.min_slack_units = std::min(report.min_slack_units, slack);
        };
        emitter.emit(/*reduce=*/false, sink);

        // Normalization rows.
        for (CascadeId s = 1; s <= s_count; ++s) {
            std::int64_t slack = truth.unit_one() - truth.in_weight_sum_units(node, s);
            ++report.rows_checked;
            if (slack < 0) ++report.violations;
            report.min_slack_units = std::min(report.min_slack_units, slack);
        }
    }
    return report;
}

} // namespace clt
