#include <doctest.h>

#include <algorithm>

#include "clt/datagen.hpp"
#include "clt/diffusion.hpp"
#include "clt/erm.hpp"
#include "helpers.hpp"

using namespace clt;
using namespace clt::test;

namespace {

Dataset dataset_from_runs(const CltInstance& instance,
                          const std::vector<CascadeLabels>& initials) {
    Dataset dataset;
    dataset.node_count = instance.node_count();
    dataset.cascade_count = instance.cascade_count();
    dataset.precision = instance.precision();
    for (const CascadeLabels& initial : initials)
        dataset.samples.push_back(run(instance, initial));
    return dataset;
}

} // namespace

TEST_CASE("a never-activated node transcribes to a single stays-inactive row") {
    // Three nodes, one cascade; v1 and v2 seeded, v3 silent (weights too
    // small to clear its threshold).
    CltInstance instance = make_instance_q3(
        3, 1, {{1, 3, 1, "0.200"}, {2, 3, 1, "0.200"}}, "0.500");
    Dataset dataset = dataset_from_runs(instance, {seeds(3, {{1, 1}, {2, 1}})});

    ErmConfig config;
    NodeLpBuild build = build_node_lp(dataset, 2, config);
    // Variables: w_1_1, w_2_1 and th_1.
    REQUIRE(build.problem.variables.size() == 3);
    CHECK(build.problem.variables[0].name == "w_1_1");
    CHECK(build.problem.variables[2].name == "th_1");
    // One activation row plus the normalization row.
    REQUIRE(build.problem.constraints.size() == 2);
    const LpConstraint& row = build.problem.constraints[0];
    CHECK(row.relation == Relation::Le);
    CHECK(row.rhs == -1.0); // -epsilon in units
    REQUIRE(row.terms.size() == 3);
    // w_1_1 + w_2_1 - th_1 <= -eps
    CHECK(row.terms[0].coef == 1.0);
    CHECK(row.terms[1].coef == 1.0);
    CHECK(row.terms[2].coef == -1.0);
    const LpConstraint& norm = build.problem.constraints[1];
    CHECK(norm.relation == Relation::Le);
    CHECK(norm.rhs == 1000.0);
}

TEST_CASE("steps where the node was already active produce no rows") {
    CltInstance instance = make_instance_q3(2, 1, {{1, 2, 1, "0.900"}});
    Dataset dataset = dataset_from_runs(instance, {seeds(2, {{1, 1}})});
    ErmConfig config;
    // v1 is seeded: nothing to learn from it beyond normalization.
    NodeLpBuild seeded = build_node_lp(dataset, 0, config);
    CHECK(seeded.problem.constraints.size() == 1);
    CHECK(seeded.transcribed_rows == 1);
    // v2 activates at step 1 and contributes rows only for that step.
    NodeLpBuild active = build_node_lp(dataset, 1, config);
    CHECK(active.problem.constraints.size() == 2); // one >= row + normalization
    CHECK(active.problem.constraints[0].relation == Relation::Ge);
}

TEST_CASE("the generating parameters satisfy every transcribed row with the default margin") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        std::uint32_t s_count = 1 + seed % 4;
        CltInstance instance = random_instance(
            24, s_count, seed * 3,
            seed % 2 ? WeightScheme::WeightedCascade : WeightScheme::UniformNormalized);
        Dataset dataset = generate_dataset(instance, 12, seed * 101);
        ErmConfig config;
        WitnessReport report = verify_witness(dataset, instance, config);
        CHECK(report.violations == 0);
        CHECK(report.min_slack_units >= 0);
        CHECK(report.rows_checked > 0);
    }
}

TEST_CASE("fitting generated data replays it exactly") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        std::uint32_t s_count = 1 + seed % 3;
        CltInstance instance = random_instance(
            20, s_count, seed * 17,
            seed % 2 ? WeightScheme::WeightedCascade : WeightScheme::UniformNormalized);
        Dataset dataset = generate_dataset(instance, 10, seed);
        ErmConfig config;
        LearnedInstance learned = fit(dataset, config);
        CHECK(learned.all_feasible);
        CHECK(learned.all_snapped);
        CHECK(training_replay_mismatches(learned, dataset) == 0);
        CHECK(validate_instance(learned.instance).valid());
    }
}

TEST_CASE("a zero-diffusion dataset is feasible and replays") {
    CltInstance instance = make_instance_q3(5, 2, {}, "1.000");
    Rng rng(3);
    Dataset dataset = dataset_from_runs(
        instance, {sample_initial(5, 2, rng), sample_initial(5, 2, rng)});
    LearnedInstance learned = fit(dataset, ErmConfig{});
    CHECK(learned.all_feasible);
    CHECK(training_replay_mismatches(learned, dataset) == 0);
}

TEST_CASE("an impossible activation makes the node's system infeasible") {
    // v2 claims cascade 1 at step 1 although nothing was 1-active at step 0.
    Sample sample;
    sample.initial = seeds(2, {{1, 2}});
    StepOutcome outcome;
    outcome.phase1 = {0b10, 0b01};
    outcome.phase2 = {2, 1};
    sample.steps = {outcome, outcome};
    sample.logical_steps = 2;
    Dataset dataset;
    dataset.node_count = 2;
    dataset.cascade_count = 2;
    dataset.precision = 3;
    dataset.samples = {sample};
    check_sample_consistency(sample, 2, 2); // structurally fine...
    CHECK_THROWS_AS(fit(dataset, ErmConfig{}), Error);
    try {
        fit(dataset, ErmConfig{});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NodeLpInfeasible);
    }
}

TEST_CASE("structurally corrupted samples are rejected up front") {
    CltInstance instance = make_instance_q3(3, 2, {{1, 2, 1, "0.900"}});
    Dataset dataset = dataset_from_runs(instance, {seeds(3, {{1, 1}})});
    // Flip the activated node's cascade mid-trajectory.
    Dataset corrupted = dataset;
    corrupted.samples[0].steps.back().phase2[1] = 2;
    CHECK_THROWS_AS(fit(corrupted, ErmConfig{}), Error);
    try {
        fit(corrupted, ErmConfig{});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InconsistentSample);
    }
}

TEST_CASE("empty datasets are rejected") {
    Dataset dataset;
    dataset.node_count = 3;
    dataset.cascade_count = 1;
    dataset.precision = 3;
    CHECK_THROWS_AS(build_node_lp(dataset, 0, ErmConfig{}), Error);
    CHECK_THROWS_AS(fit(dataset, ErmConfig{}), Error);
}

TEST_CASE("per-node systems decompose the union problem") {
    CltInstance instance = random_instance(8, 2, 55);
    Dataset dataset = generate_dataset(instance, 4, 7);
    ErmConfig config;
    // Union of all nodes' rows in one problem, variables renamed per node.
    LpProblem union_problem;
    for (NodeId v = 0; v < 8; ++v) {
        NodeLpBuild build = build_node_lp(dataset, v, config);
        std::uint32_t offset = static_cast<std::uint32_t>(union_problem.variables.size());
        for (const LpVariable& var : build.problem.variables)
            union_problem.add_variable("n" + std::to_string(v) + "_" + var.name, var.lower,
                                       var.upper);
        for (const LpConstraint& c : build.problem.constraints) {
            std::vector<LpTerm> terms = c.terms;
            for (LpTerm& t : terms) t.var += offset;
            union_problem.add_constraint(terms, c.relation, c.rhs);
        }
    }
    CHECK(solve(union_problem).status == LpStatus::Feasible);
    for (NodeId v = 0; v < 8; ++v)
        CHECK(solve(build_node_lp(dataset, v, config).problem).status == LpStatus::Feasible);
}

TEST_CASE("edges learned at weight zero are safely prunable") {
    CltInstance instance = random_instance(15, 2, 31);
    Dataset dataset = generate_dataset(instance, 8, 44);
    LearnedInstance learned = fit(dataset, ErmConfig{});
    // Add explicit zero-weight edges back; predictions must not move.
    const Graph& g = learned.instance.graph();
    std::vector<Edge> edges = g.edges();
    std::vector<Edge> extra;
    for (NodeId a = 0; a < 5; ++a)
        for (NodeId b = 5; b < 10; ++b) {
            bool exists = false;
            for (const Edge& e : edges)
                if (e.src == a && e.dst == b) exists = true;
            if (!exists) extra.push_back({a, b});
        }
    for (const Edge& e : extra) edges.push_back(e);
    CltInstance padded(Graph(15, edges), 2, 3);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        for (CascadeId s = 1; s <= 2; ++s)
            padded.set_weight_units(e, s, learned.instance.weight_units(e, s));
    for (NodeId v = 0; v < 15; ++v)
        for (CascadeId s = 1; s <= 2; ++s)
            padded.set_threshold_units(v, s, learned.instance.threshold_units(v, s));
    Rng rng(6);
    for (int i = 0; i < 10; ++i) {
        CascadeLabels initial = sample_initial(15, 2, rng);
        CHECK(influence_function(padded, initial) ==
              influence_function(learned.instance, initial));
    }
}

TEST_CASE("known-graph mode shrinks the variable set and still replays") {
    CltInstance instance = random_instance(20, 2, 61);
    Dataset dataset = generate_dataset(instance, 8, 62);
    ErmConfig config;
    config.known_graph = instance.graph();
    LearnedInstance learned = fit(dataset, config);
    CHECK(learned.all_feasible);
    CHECK(training_replay_mismatches(learned, dataset) == 0);

    ErmConfig unknown;
    NodeLpBuild wide = build_node_lp(dataset, 5, unknown);
    NodeLpBuild narrow = build_node_lp(dataset, 5, config);
    CHECK(narrow.problem.variables.size() <= wide.problem.variables.size());
}

TEST_CASE("alternative objectives stay feasible and replay") {
    CltInstance instance = random_instance(16, 3, 91);
    Dataset dataset = generate_dataset(instance, 6, 14);
    for (ErmObjective objective :
         {ErmObjective::MinWeight, ErmObjective::MaxMargin}) {
        ErmConfig config;
        config.objective = objective;
        LearnedInstance learned = fit(dataset, config);
        CHECK(learned.all_feasible);
        CHECK(training_replay_mismatches(learned, dataset) == 0);
    }
}

TEST_CASE("margins must be positive") {
    CltInstance instance = make_instance_q3(2, 1, {});
    Dataset dataset = dataset_from_runs(instance, {seeds(2, {{1, 1}})});
    ErmConfig config;
    config.epsilon_units = 0;
    CHECK_THROWS_AS(build_node_lp(dataset, 1, config), Error);
}
