#include <doctest.h>

#include "clt/datagen.hpp"
#include "clt/diffusion.hpp"
#include "helpers.hpp"

using namespace clt;
using namespace clt::test;

TEST_CASE("influence sums are exact edge-weight totals") {
    CltInstance instance = make_instance_q3(
        3, 1, {{1, 3, 1, "0.300"}, {2, 3, 1, "0.400"}});
    CascadeLabels none(3, 0);
    CHECK(influence_sum(instance, none, 2, 1).units == 0); // empty sum
    CascadeLabels both = seeds(3, {{1, 1}, {2, 1}});
    CHECK(influence_sum(instance, both, 2, 1) == scaled_from_decimal_string("0.700", 3));
    CHECK_THROWS_AS(influence_sum(instance, both, 7, 1), Error);
    CHECK_THROWS_AS(influence_sum(instance, both, 2, 9), Error);
}

TEST_CASE("influence sums match a brute-force edge walk on a random instance") {
    CltInstance instance = random_instance(50, 3, 21, WeightScheme::UniformNormalized);
    Rng rng(4);
    CascadeLabels status = sample_initial(instance.node_count(), 3, rng);
    const Graph& g = instance.graph();
    for (NodeId v = 0; v < instance.node_count(); ++v) {
        for (CascadeId s = 1; s <= 3; ++s) {
            std::int64_t brute = 0;
            for (EdgeId e = 0; e < g.edge_count(); ++e)
                if (g.edge(e).dst == v && status[g.edge(e).src] == s)
                    brute += instance.weight_units(e, s);
            CHECK(influence_sum(instance, status, v, s).units == brute);
        }
    }
}

TEST_CASE("a step from an empty status changes nothing") {
    CltInstance instance = make_instance_q3(4, 2, {{1, 2, 1, "0.900"}});
    StepOutcome out = step(instance, CascadeLabels(4, 0));
    CHECK(out.phase2 == CascadeLabels(4, 0));
    for (auto mask : out.phase1) CHECK(mask == 0);
}

TEST_CASE("two candidate cascades resolve to the larger influence sum") {
    // v2 pushes cascade 1 at 0.700, v1 pushes cascade 2 at 0.600; both clear
    // v3's threshold of 0.500, and cascade 1 wins the competition.
    CltInstance instance = make_instance_q3(
        4, 2, {{2, 3, 1, "0.700"}, {1, 3, 2, "0.600"}, {3, 4, 1, "0.800"}});
    CascadeLabels initial = seeds(4, {{2, 1}, {1, 2}});
    StepOutcome out = step(instance, initial);
    CHECK(out.phase1[2] == 0b11);
    CHECK(out.phase2[2] == 1);
    // Carried statuses for the seeds.
    CHECK(out.phase1[0] == 0b10);
    CHECK(out.phase2[0] == 2);
    // And the downstream node follows one step later.
    StatusTensor tensor = run(instance, initial);
    CHECK(tensor.phase2_at(1)[3] == 0);
    CHECK(tensor.phase2_at(2)[3] == 1);
    CHECK(tensor.final_phase2() == CascadeLabels{2, 1, 1, 1});
}

TEST_CASE("exact ties prefer the smallest cascade index") {
    CltInstance instance = make_instance_q3(
        3, 2, {{1, 3, 1, "0.500"}, {2, 3, 2, "0.500"}});
    StepOutcome out = step(instance, seeds(3, {{1, 1}, {2, 2}}));
    CHECK(out.phase1[2] == 0b11);
    CHECK(out.phase2[2] == 1);
}

TEST_CASE("the tie rule is label-based, not value-based") {
    // Same geometry with cascade labels reversed: the winner is again the
    // smaller label, which now corresponds to the other cascade's role.
    CltInstance instance = make_instance_q3(
        3, 2, {{1, 3, 2, "0.500"}, {2, 3, 1, "0.500"}});
    StepOutcome out = step(instance, seeds(3, {{1, 2}, {2, 1}}));
    CHECK(out.phase2[2] == 1);
}

TEST_CASE("single isolated node keeps its seed") {
    CltInstance instance = make_instance_q3(1, 2, {});
    StatusTensor tensor = run(instance, seeds(1, {{1, 2}}));
    CHECK(tensor.final_phase2() == CascadeLabels{2});
    CHECK(tensor.logical_steps == 1);
}

TEST_CASE("a weight-1 chain advances one hop per step") {
    CltInstance instance = make_instance_q3(
        3, 1, {{1, 2, 1, "1.000"}, {2, 3, 1, "1.000"}});
    StatusTensor tensor = run(instance, seeds(3, {{1, 1}}));
    CHECK(tensor.phase2_at(1) == CascadeLabels{1, 1, 0});
    CHECK(tensor.phase2_at(2) == CascadeLabels{1, 1, 1});
    CHECK(tensor.final_phase2() == CascadeLabels{1, 1, 1});
}

TEST_CASE("runs are deterministic") {
    CltInstance instance = random_instance(30, 3, 5);
    Rng rng(9);
    CascadeLabels initial = sample_initial(instance.node_count(), 3, rng);
    CHECK(run(instance, initial) == run(instance, initial));
}

TEST_CASE("statuses with a doubly active node are rejected") {
    CltInstance instance = make_instance_q3(2, 2, {});
    std::vector<std::uint8_t> bits = {1, 1, 0, 0};
    CHECK_THROWS_AS(labels_from_bits(bits, 2, 2), Error);
}

TEST_CASE("trajectory properties hold on random instances") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        std::uint32_t s_count = 1 + seed % 4;
        CltInstance instance = random_instance(
            20 + 3 * static_cast<std::uint32_t>(seed), s_count, seed,
            seed % 2 ? WeightScheme::WeightedCascade : WeightScheme::UniformNormalized);
        Rng rng(seed * 31);
        CascadeLabels initial =
            sample_initial(instance.node_count(), s_count, rng);
        StatusTensor tensor = run(instance, initial);

        // Fixed point: one more step leaves the final status unchanged.
        StepOutcome extra = step(instance, tensor.final_phase2());
        CHECK(extra.phase2 == tensor.final_phase2());

        // Monotone persistence and single ownership, step by step.
        const CascadeLabels* prev = &tensor.initial;
        for (const StepOutcome& outcome : tensor.steps) {
            for (NodeId v = 0; v < instance.node_count(); ++v) {
                if ((*prev)[v] != 0) CHECK(outcome.phase2[v] == (*prev)[v]);
                if (outcome.phase2[v] != 0)
                    CHECK((outcome.phase1[v] >> (outcome.phase2[v] - 1)) & 1);
            }
            prev = &outcome.phase2;
        }
        check_sample_consistency(tensor, instance.node_count(), s_count);
    }
}

TEST_CASE("phase-1 candidates are sound and complete against brute force") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        CltInstance instance = random_instance(18, 3, seed * 7);
        Rng rng(seed);
        CascadeLabels initial = sample_initial(instance.node_count(), 3, rng);
        StatusTensor tensor = run(instance, initial);
        const CascadeLabels* prev = &tensor.initial;
        for (const StepOutcome& outcome : tensor.steps) {
            for (NodeId v = 0; v < instance.node_count(); ++v) {
                if ((*prev)[v] != 0) continue;
                for (CascadeId s = 1; s <= 3; ++s) {
                    bool candidate = (outcome.phase1[v] >> (s - 1)) & 1;
                    ScaledValue zeta = influence_sum(instance, *prev, v, s);
                    CHECK(candidate == (zeta >= instance.threshold(v, s)));
                }
            }
            prev = &outcome.phase2;
        }
    }
}
