#include <doctest.h>

#include "clt/datagen.hpp"
#include "clt/diffusion.hpp"
#include "clt/io.hpp"
#include "clt/netsim.hpp"
#include "helpers.hpp"

using namespace clt;
using namespace clt::test;

namespace {

void check_step_equivalence(const CltInstance& instance, const LayeredNet& net,
                            std::uint64_t seed, int trials) {
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) {
        CascadeLabels status =
            sample_initial(instance.node_count(), instance.cascade_count(), rng);
        // From a raw seed status and from an evolved one.
        for (int hop = 0; hop < 3; ++hop) {
            CascadeLabels expected = step(instance, status).phase2;
            CascadeLabels got = forward_step_labels(net, status);
            REQUIRE(got == expected);
            if (status == expected) break;
            status = expected;
        }
    }
}

} // namespace

TEST_CASE("two-cascade nets use the two-layer fast path") {
    CltInstance instance = random_instance(10, 2, 3);
    LayeredNet net = compile(instance);
    CHECK(net.fast_path);
    CHECK(net.layers.size() == 2);
    CHECK(net.layers[0].role == LayerRole::Phase1);
    CHECK(net.layers[1].role == LayerRole::FastResolve);
    check_step_equivalence(instance, net, 17, 20);
}

TEST_CASE("general-path depth is 2Z+5 with halving comparison widths") {
    for (std::uint32_t s : {2u, 4u, 8u, 16u}) {
        CltInstance instance = random_instance(6, s, 40 + s);
        CompileOptions options;
        options.force_general_path = true;
        LayeredNet net = compile(instance, options);
        CHECK_FALSE(net.fast_path);
        CHECK(net.layers.size() == 2 * net.z + 5);
        CHECK(net.layers.front().width_in == 6 * s);
        CHECK(net.layers.back().width_out == 6 * s);
        // Each comparison round halves the per-node width after its merge.
        std::uint32_t expected = s;
        for (const LayerSpec& layer : net.layers) {
            if (layer.role == LayerRole::CompareMerge) {
                expected /= 2;
                CHECK(layer.width_out == 6 * expected);
            }
        }
        CHECK(expected == 1);
        check_step_equivalence(instance, net, 90 + s, 10);
    }
}

TEST_CASE("depth formula example: four cascades on three nodes gives nine layers") {
    CltInstance instance = make_instance_q3(3, 4, {{1, 2, 1, "0.600"}});
    LayeredNet net = compile(instance);
    CHECK(net.z == 2);
    CHECK(net.layers.size() == 9);
}

TEST_CASE("audit counts adjustable weights as S*(M+N)") {
    CltInstance small = make_instance_q3(
        4, 2, {{1, 2, 1, "0.100"}, {1, 3, 1, "0.100"}, {2, 4, 1, "0.100"}});
    NetAudit a = audit(compile(small));
    CHECK(a.adjustable_weights == 2 * (3 + 4));

    CltInstance bigger = random_instance(30, 4, 5);
    NetAudit b = audit(compile(bigger));
    CHECK(b.adjustable_weights ==
          4ull * (bigger.graph().edge_count() + bigger.node_count()));
    // Unit count stays within a small constant of N*S.
    CHECK(b.computation_units <= 8ull * bigger.node_count() * 4);
    // Modulo piece count is linear in 10^Q.
    CHECK(b.modulo_pieces > 0);
    CHECK(b.modulo_pieces <= 4 * 1000);
}

TEST_CASE("padded cascade counts strip dummies at the output") {
    CltInstance instance = random_instance(9, 3, 77, WeightScheme::UniformNormalized);
    LayeredNet net = compile(instance);
    CHECK(net.cascades_padded == 4);
    CHECK(net.layers.back().width_out == 9 * 3);
    check_step_equivalence(instance, net, 5, 20);
}

TEST_CASE("single-cascade nets work through the general path") {
    CltInstance instance = random_instance(8, 1, 13);
    LayeredNet net = compile(instance);
    CHECK(net.z == 0);
    CHECK(net.layers.size() == 5);
    check_step_equivalence(instance, net, 3, 10);
}

TEST_CASE("all-zero input stays all-zero") {
    CltInstance instance = random_instance(12, 4, 19);
    LayeredNet net = compile(instance);
    std::vector<std::uint8_t> zero(12 * 4, 0);
    std::vector<std::uint8_t> out = forward_step(net, zero);
    for (std::uint8_t b : out) CHECK(b == 0);
}

TEST_CASE("three candidates resolve to the largest sum, ties to the smallest index") {
    // v4 hears cascade 1 at 0.400, cascade 2 at 0.700, cascade 3 at 0.600.
    CltInstance instance = make_instance_q3(4, 4,
                                            {{1, 4, 1, "0.400"},
                                             {2, 4, 2, "0.700"},
                                             {3, 4, 3, "0.600"}},
                                            "0.300");
    LayeredNet net = compile(instance);
    CascadeLabels initial = seeds(4, {{1, 1}, {2, 2}, {3, 3}});
    CascadeLabels out = forward_step_labels(net, initial);
    CHECK(out[3] == 2);
    CHECK(out == step(instance, initial).phase2);

    // Equal sums for cascades 1 and 3: the smaller index wins.
    CltInstance tie = make_instance_q3(4, 4,
                                       {{1, 4, 1, "0.600"},
                                        {3, 4, 3, "0.600"}},
                                       "0.300");
    CascadeLabels tie_out = forward_step_labels(compile(tie), initial);
    CHECK(tie_out[3] == 1);
}

TEST_CASE("encode layer stamps reversed codes under the scaled sums") {
    CltInstance instance = make_instance_q3(3, 4,
                                            {{1, 3, 1, "0.500"}, {2, 3, 2, "0.800"}},
                                            "0.400");
    CompileOptions options;
    options.force_general_path = true;
    LayeredNet net = compile(instance, options);
    CascadeLabels initial = seeds(3, {{1, 1}, {2, 2}});
    auto trace = forward_step_instrumented(net, labels_to_bits(initial, 4));
    const std::int64_t shift = pow10_i64(net.digit_budget);
    // Layer order: input, phase1, encode, ...
    const auto& phase1 = trace[1];
    const auto& encoded = trace[2];
    REQUIRE(encoded.size() == 3 * net.cascades_padded);
    for (NodeId v = 0; v < 3; ++v) {
        for (std::uint32_t slot = 0; slot < net.cascades_padded; ++slot) {
            std::int64_t e = encoded[v * net.cascades_padded + slot];
            std::int64_t sum = phase1[v * net.cascades_padded + slot];
            if (sum == 0) {
                CHECK(e == 0);
            } else {
                CHECK(e % shift == static_cast<std::int64_t>(net.cascades_padded - slot));
                CHECK(e / shift == sum);
            }
        }
    }
}

TEST_CASE("comparison layers keep exact pairwise maxima") {
    CltInstance instance = random_instance(5, 8, 23);
    CompileOptions options;
    options.force_general_path = true;
    LayeredNet net = compile(instance, options);
    Rng rng(8);
    CascadeLabels initial = sample_initial(5, 8, rng);
    auto trace = forward_step_instrumented(net, labels_to_bits(initial, 8));
    for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
        if (net.layers[l + 1].role != LayerRole::CompareMerge) continue;
        const auto& before = trace[l];     // input of the diff layer pair
        const auto& after = trace[l + 2];  // output of the merge layer
        REQUIRE(before.size() == after.size() * 2);
        for (std::size_t r = 0; r < after.size(); ++r)
            CHECK(after[r] == std::max(before[2 * r], before[2 * r + 1]));
    }
}

TEST_CASE("forward at a diffusion fixed point is idempotent") {
    CltInstance instance = random_instance(20, 3, 31);
    LayeredNet net = compile(instance);
    Rng rng(2);
    CascadeLabels initial = sample_initial(20, 3, rng);
    CascadeLabels fixed = influence_function(instance, initial);
    CHECK(forward_step_labels(net, fixed) == fixed);
}

TEST_CASE("unrolled nets equal the influence function, step by step") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::uint32_t s_count = 1 + seed % 5;
        CltInstance instance = random_instance(
            15 + static_cast<std::uint32_t>(seed), s_count, seed * 13,
            seed % 2 ? WeightScheme::WeightedCascade : WeightScheme::UniformNormalized);
        LayeredNet net = compile(instance);
        Rng rng(seed);
        for (int i = 0; i < 5; ++i) {
            CascadeLabels initial =
                sample_initial(instance.node_count(), s_count, rng);
            StatusTensor expected = run(instance, initial);
            NetTrajectory got = unroll_trajectory(net, initial);
            REQUIRE(unroll_forward(net, initial) == expected.final_phase2());
            for (std::uint32_t t = 1; t <= expected.logical_steps; ++t)
                REQUIRE(got.at(t) == expected.phase2_at(t));
        }
    }
}

TEST_CASE("a perturbed net dump diverges and is detected") {
    CltInstance instance = make_instance_q3(
        3, 2, {{1, 3, 1, "0.700"}, {2, 3, 2, "0.600"}});
    Json dump = net_to_json(compile(instance));
    // Weaken the one weight that should activate v3 in cascade 1.
    for (Json& layer : dump["layers"]) {
        if (layer["role"] != "phase1") continue;
        for (Json& unit : layer["units"])
            for (Json& entry : unit["in"])
                if (entry[1] == "0.700") entry[1] = "0.100";
    }
    LayeredNet corrupted = net_from_json(dump);
    CascadeLabels initial = seeds(3, {{1, 1}, {2, 2}});
    CHECK(forward_step_labels(corrupted, initial) != step(instance, initial).phase2);
}

TEST_CASE("compilation rejects precisions that would overflow the arithmetic") {
    CltInstance instance(Graph(2, {{0, 1}}), 8, 17);
    CHECK_THROWS_AS(compile(instance), Error);
}

TEST_CASE("width mismatches are rejected") {
    CltInstance instance = random_instance(6, 2, 3);
    LayeredNet net = compile(instance);
    std::vector<std::uint8_t> wrong(5, 0);
    CHECK_THROWS_AS(forward_step(net, wrong), Error);
}
