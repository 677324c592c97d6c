#include "clt/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "clt/diffusion.hpp"

namespace clt {

Graph gen_kronecker(const std::array<double, 4>& initiator, std::uint32_t k,
                    std::uint64_t seed) {
    for (double p : initiator)
        if (!(p >= 0.0 && p <= 1.0))
            fail(ErrorCode::InvalidInput, "initiator probabilities must be in [0, 1]");
    if (k < 1 || k > 12) fail(ErrorCode::InvalidInput, "kronecker power must be in [1, 12]");
    const std::uint32_t n = 1u << k;
    Rng rng(Rng::derive(seed, seed_tags::kGraph));
    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double p = 1.0;
            for (std::uint32_t b = 0; b < k; ++b)
                p *= initiator[((i >> b) & 1u) * 2 + ((j >> b) & 1u)];
            if (rng.bernoulli(p)) edges.push_back({i, j});
        }
    }
    return Graph(n, std::move(edges));
}

double expected_kronecker_edges(const std::array<double, 4>& initiator, std::uint32_t k) {
    double total = initiator[0] + initiator[1] + initiator[2] + initiator[3];
    double diag = initiator[0] + initiator[3];
    return std::pow(total, k) - std::pow(diag, k);
}

Graph gen_power_law(std::uint32_t n, std::uint32_t m, std::uint64_t seed) {
    if (m < 1 || n <= m) fail(ErrorCode::InvalidInput, "need n > m >= 1");
    Rng rng(Rng::derive(seed, seed_tags::kGraph));
    std::vector<Edge> edges;
    std::vector<std::uint64_t> indeg(n, 0);
    const std::uint32_t m0 = m + 1;
    for (std::uint32_t i = 0; i < m0; ++i)
        for (std::uint32_t j = 0; j < m0; ++j)
            if (i != j) {
                edges.push_back({i, j});
                ++indeg[j];
            }
    std::vector<std::uint32_t> targets;
    for (std::uint32_t v = m0; v < n; ++v) {
        targets.clear();
        // Weighted draws without replacement, weights frozen at node entry.
        std::vector<std::uint64_t> weight(v);
        std::uint64_t total = 0;
        for (std::uint32_t u = 0; u < v; ++u) {
            weight[u] = indeg[u] + 1;
            total += weight[u];
        }
        for (std::uint32_t draw = 0; draw < m; ++draw) {
            std::uint64_t r = rng.next_below(total);
            std::uint64_t acc = 0;
            std::uint32_t pick = 0;
            for (std::uint32_t u = 0; u < v; ++u) {
                acc += weight[u];
                if (r < acc) {
                    pick = u;
                    break;
                }
            }
            targets.push_back(pick);
            total -= weight[pick];
            weight[pick] = 0;
        }
        for (std::uint32_t t : targets) {
            edges.push_back({v, t});
            ++indeg[t];
        }
    }
    return Graph(n, std::move(edges));
}

InstanceGenResult make_instance(const Graph& graph, std::uint32_t cascade_count,
                                std::int32_t q, WeightScheme scheme, std::uint64_t seed) {
    if (cascade_count < 1) fail(ErrorCode::InvalidInput, "need at least one cascade");
    if (q < 1) fail(ErrorCode::InvalidInput, "precision must be at least 1");
    const std::int64_t one = pow10_i64(q);

    InstanceGenResult result{CltInstance(graph, cascade_count, q), {}};
    CltInstance& instance = result.instance;

    Rng theta_rng(Rng::derive(seed, seed_tags::kThresholds));
    for (NodeId v = 0; v < graph.node_count(); ++v)
        for (CascadeId s = 1; s <= cascade_count; ++s)
            instance.set_threshold_units(v, s, theta_rng.next_int(1, one));

    Rng weight_rng(Rng::derive(seed, seed_tags::kWeights));
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        const std::uint32_t d = graph.in_degree(v);
        if (d == 0) {
            if (scheme == WeightScheme::UniformNormalized)
                result.isolated_targets.push_back(v);
            continue;
        }
        if (scheme == WeightScheme::WeightedCascade) {
            for (CascadeId s = 1; s <= cascade_count; ++s) {
                // 1/(d + s/7) = 7/(7d + s), rounded toward zero to q digits.
                std::int64_t units = 7 * one / (7 * static_cast<std::int64_t>(d) + s);
                for (EdgeId e : graph.in_edges(v)) instance.set_weight_units(e, s, units);
            }
        } else {
            for (CascadeId s = 1; s <= cascade_count; ++s) {
                std::vector<double> raw(d);
                double total = 0.0;
                for (std::uint32_t i = 0; i < d; ++i) {
                    raw[i] = weight_rng.next_unit();
                    total += raw[i];
                }
                if (total == 0.0) total = 1.0;
                // Largest-remainder apportionment to land on sum == 1 exactly.
                std::vector<std::int64_t> base(d);
                std::vector<double> remainder(d);
                std::int64_t assigned = 0;
                for (std::uint32_t i = 0; i < d; ++i) {
                    double share = raw[i] / total * static_cast<double>(one);
                    base[i] = static_cast<std::int64_t>(std::floor(share));
                    remainder[i] = share - std::floor(share);
                    assigned += base[i];
                }
                std::vector<std::uint32_t> order(d);
                for (std::uint32_t i = 0; i < d; ++i) order[i] = i;
                std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
                    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
                    return a < b;
                });
                std::int64_t deficit = one - assigned;
                for (std::uint32_t idx = 0; deficit > 0; idx = (idx + 1) % d) {
                    ++base[order[idx]];
                    --deficit;
                }
                for (std::uint32_t idx = d; deficit < 0; idx = (idx == 1 ? d : idx - 1)) {
                    std::uint32_t i = order[idx - 1]; // smallest remainders first
                    if (base[i] > 0) {
                        --base[i];
                        ++deficit;
                    }
                }
                std::uint32_t i = 0;
                for (EdgeId e : graph.in_edges(v)) instance.set_weight_units(e, s, base[i++]);
            }
        }
    }
    return result;
}

CascadeLabels sample_initial(std::uint32_t node_count, std::uint32_t cascade_count, Rng& rng) {
    std::int64_t lo = (node_count + 9) / 10; // ceil(0.1 N)
    std::int64_t hi = node_count / 2;        // floor(0.5 N)
    if (lo < 1) lo = 1;
    if (hi < lo) hi = lo;
    std::uint32_t count = static_cast<std::uint32_t>(rng.next_int(lo, hi));
    return sample_initial_with_count(node_count, cascade_count, count, rng);
}

CascadeLabels sample_initial_with_count(std::uint32_t node_count, std::uint32_t cascade_count,
                                        std::uint32_t seed_count, Rng& rng) {
    if (seed_count > node_count)
        fail(ErrorCode::InvalidInput, "seed count exceeds node count");
    CascadeLabels labels(node_count, 0);
    for (std::uint32_t v : rng.sample_without_replacement(node_count, seed_count))
        labels[v] = static_cast<CascadeId>(rng.next_int(1, cascade_count));
    return labels;
}

Dataset generate_dataset(const CltInstance& instance, std::uint32_t sample_count,
                         std::uint64_t seed) {
    Dataset dataset;
    dataset.node_count = instance.node_count();
    dataset.cascade_count = instance.cascade_count();
    dataset.precision = instance.precision();
    dataset.samples.reserve(sample_count);
    std::uint64_t base = Rng::derive(seed, seed_tags::kDataset);
    for (std::uint32_t k = 0; k < sample_count; ++k) {
        Rng rng(Rng::derive(base, k));
        CascadeLabels initial =
            sample_initial(instance.node_count(), instance.cascade_count(), rng);
        dataset.samples.push_back(run(instance, initial));
    }
    return dataset;
}

} // namespace clt
