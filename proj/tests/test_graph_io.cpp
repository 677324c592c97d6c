#include <doctest.h>

#include <sstream>

#include "clt/datagen.hpp"
#include "clt/diffusion.hpp"
#include "clt/io.hpp"
#include "helpers.hpp"

using namespace clt;
using namespace clt::test;

TEST_CASE("graph construction enforces edge-list invariants") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), Error);          // self-loop
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {0, 1}}), Error);  // duplicate
    CHECK_THROWS_AS(Graph(2, {{0, 5}}), Error);          // out of range
    Graph g(3, {{0, 2}, {1, 2}});
    CHECK(g.in_degree(2) == 2);
    CHECK(g.in_degree(0) == 0);
    CHECK(g.edge(g.in_edges(2)[0]).src == 0);
}

TEST_CASE("validate_instance accepts all-zero weights") {
    CltInstance instance = make_instance_q3(3, 2, {});
    CHECK(validate_instance(instance).valid());
}

TEST_CASE("validate_instance reports over-normalized columns with coordinates") {
    CltInstance instance = make_instance_q3(
        3, 1, {{1, 3, 1, "0.600"}, {2, 3, 1, "0.600"}});
    ValidationReport report = validate_instance(instance);
    REQUIRE(report.issues.size() == 1);
    CHECK(report.issues[0].kind == ValidationIssue::Kind::Normalization);
    CHECK(report.issues[0].node == 2);
    CHECK(report.issues[0].cascade == 1);
}

TEST_CASE("validate_instance rejects zero thresholds") {
    CltInstance instance = make_instance_q3(2, 1, {});
    instance.set_threshold_units(0, 1, 0);
    ValidationReport report = validate_instance(instance);
    REQUIRE(report.issues.size() == 1);
    CHECK(report.issues[0].kind == ValidationIssue::Kind::ThresholdRange);
}

TEST_CASE("generated instances validate, with brute-force column sums agreeing") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        for (WeightScheme scheme :
             {WeightScheme::WeightedCascade, WeightScheme::UniformNormalized}) {
            Graph graph = gen_power_law(40, 2, seed);
            CltInstance instance = make_instance(graph, 3, 3, scheme, seed).instance;
            CHECK(validate_instance(instance).valid());
            for (NodeId v = 0; v < graph.node_count(); ++v) {
                for (CascadeId s = 1; s <= 3; ++s) {
                    std::int64_t brute = 0;
                    for (EdgeId e = 0; e < graph.edge_count(); ++e)
                        if (graph.edge(e).dst == v) brute += instance.weight_units(e, s);
                    CHECK(brute == instance.in_weight_sum_units(v, s));
                    CHECK(brute <= instance.unit_one());
                }
            }
        }
    }
}

TEST_CASE("graph and instance files round-trip exactly") {
    for (std::uint64_t seed : {10ULL, 11ULL, 12ULL}) {
        CltInstance instance = random_instance(30, 3, seed, WeightScheme::UniformNormalized);
        Json gj = graph_to_json(instance.graph());
        CHECK(graph_from_json(gj) == instance.graph());
        Json ij = instance_to_json(instance);
        CHECK(instance_from_json(ij) == instance);
        // Through actual text, to catch formatting loss.
        CHECK(instance_from_json(Json::parse(ij.dump())) == instance);
    }
}

TEST_CASE("datasets round-trip through the JSONL format") {
    CltInstance instance = random_instance(25, 2, 77);
    Dataset dataset = generate_dataset(instance, 8, 1234);
    std::ostringstream out;
    save_dataset(out, dataset);
    std::istringstream in(out.str());
    Dataset loaded = load_dataset(in);
    CHECK(loaded == dataset);
}

TEST_CASE("sample serialization preserves phase-1 candidate masks") {
    CltInstance instance = make_instance_q3(
        3, 2, {{1, 3, 1, "0.700"}, {2, 3, 2, "0.600"}});
    StatusTensor run_result = run(instance, seeds(3, {{1, 1}, {2, 2}}));
    Json j = sample_to_json(run_result, 2);
    Sample loaded = sample_from_json(j, 3, 2);
    CHECK(loaded == run_result);
    CHECK(loaded.steps[0].phase1[2] == 0b11); // both cascades were candidates
}

TEST_CASE("net dumps reload to an equivalent simulator") {
    CltInstance instance = random_instance(12, 3, 99);
    LayeredNet net = compile(instance);
    LayeredNet reloaded = net_from_json(net_to_json(net));
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        CascadeLabels labels = sample_initial(instance.node_count(), 3, rng);
        CHECK(forward_step_labels(net, labels) == forward_step_labels(reloaded, labels));
    }
}

TEST_CASE("edge list import autodetects base and drops bad lines") {
    std::istringstream in("1 2\n2 3\n3 3\n1 2\n# note\n2 1\n");
    EdgeListReport report = import_edge_list(in);
    CHECK_FALSE(report.detected_zero_based);
    CHECK(report.graph.node_count() == 3);
    CHECK(report.graph.edge_count() == 3);
    CHECK(report.dropped_self_loops == 1);
    CHECK(report.dropped_duplicates == 1);

    std::istringstream zero("0 1\n1 2\n");
    EdgeListReport zr = import_edge_list(zero);
    CHECK(zr.detected_zero_based);
    CHECK(zr.graph.node_count() == 3);

    std::istringstream iso("1 2\n");
    EdgeListReport ir = import_edge_list(iso, 10);
    CHECK(ir.graph.node_count() == 10); // isolated trailing nodes kept
}
