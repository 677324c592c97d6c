#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "clt/instance.hpp"
#include "clt/rng.hpp"
#include "clt/status.hpp"

namespace clt {

enum class WeightScheme : std::uint8_t {
    WeightedCascade,   // w = 1/(indeg + s/7), rounded toward zero to q digits
    UniformNormalized, // raw uniforms, renormalized to sum exactly 1 per node
};

/// Stochastic Kronecker graph on 2^k nodes: every off-diagonal pair sampled
/// with the k-fold product probability of the 2x2 initiator. Exact per-entry
/// sampling (no ball-dropping approximation); deterministic per seed.
Graph gen_kronecker(const std::array<double, 4>& initiator, std::uint32_t k,
                    std::uint64_t seed);

/// Analytic expected edge count (off-diagonal sum of product probabilities).
double expected_kronecker_edges(const std::array<double, 4>& initiator, std::uint32_t k);

/// Directed preferential attachment: the first m+1 nodes form a complete
/// directed seed clique, then each new node sends m edges to earlier nodes
/// chosen without replacement proportionally to in-degree + 1.
Graph gen_power_law(std::uint32_t n, std::uint32_t m, std::uint64_t seed);

struct InstanceGenResult {
    CltInstance instance;
    /// Nodes without in-edges cannot carry uniform-normalized weights that
    /// sum to one; they are left weightless and listed here.
    std::vector<NodeId> isolated_targets;
};

InstanceGenResult make_instance(const Graph& graph, std::uint32_t cascade_count,
                                std::int32_t q, WeightScheme scheme, std::uint64_t seed);

/// Seed-set sampler: seed count uniform in [ceil(0.1 N), floor(0.5 N)], seed
/// nodes a uniform subset, cascade assignment uniform per seed.
CascadeLabels sample_initial(std::uint32_t node_count, std::uint32_t cascade_count, Rng& rng);
CascadeLabels sample_initial_with_count(std::uint32_t node_count, std::uint32_t cascade_count,
                                        std::uint32_t seed_count, Rng& rng);

/// K independent samples; each trajectory produced by the exact simulator.
Dataset generate_dataset(const CltInstance& instance, std::uint32_t sample_count,
                         std::uint64_t seed);

/// Substream tags for the master-seed splits (documented so runs are
/// reproducible across the CLI and the library).
namespace seed_tags {
constexpr std::uint64_t kGraph = 1;
constexpr std::uint64_t kThresholds = 2;
constexpr std::uint64_t kWeights = 3;
constexpr std::uint64_t kDataset = 4;
constexpr std::uint64_t kSelection = 5;
constexpr std::uint64_t kBaseline = 6;
} // namespace seed_tags

} // namespace clt
