#include "clt/netsim.hpp"

#include <algorithm>
#include <limits>

namespace clt {

namespace {

constexpr std::int64_t kValueHeadroom = std::numeric_limits<std::int64_t>::max() / 8;

std::uint32_t next_pow2(std::uint32_t s) {
    std::uint32_t p = 1;
    while (p < s) p <<= 1;
    return p;
}

std::uint32_t log2_u32(std::uint32_t p) {
    std::uint32_t z = 0;
    while ((1u << z) < p) ++z;
    return z;
}

struct LayerBuilder {
    LayerSpec layer;

    LayerBuilder(LayerRole role, std::uint32_t width_in) {
        layer.role = role;
        layer.width_in = width_in;
        layer.offsets.push_back(0);
    }

    void unit(std::initializer_list<WeightEntry> entries, Activation act) {
        for (const WeightEntry& e : entries) layer.entries.push_back(e);
        layer.offsets.push_back(static_cast<std::uint32_t>(layer.entries.size()));
        layer.activations.push_back(act);
    }

    LayerSpec finish() {
        layer.width_out = static_cast<std::uint32_t>(layer.activations.size());
        return std::move(layer);
    }
};

std::int64_t apply_activation(const Activation& act, std::int64_t x) {
    switch (act.kind) {
        case ActivationKind::ThresholdKeep: return x >= act.param ? x : 0;
        case ActivationKind::IdentityAppend: return x > 0 ? x + act.param : 0;
        case ActivationKind::Relu: return x > 0 ? x : 0;
        case ActivationKind::Linear: return x;
        case ActivationKind::Modulo: return x % act.param;
        case ActivationKind::StepAtLeast: return x >= act.param ? 1 : 0;
    }
    return 0;
}

void eval_layer(const LayerSpec& layer, const std::vector<std::int64_t>& in,
                std::vector<std::int64_t>& out) {
    out.assign(layer.width_out, 0);
    for (std::uint32_t u = 0; u < layer.width_out; ++u) {
        std::int64_t acc = 0;
        for (std::uint32_t k = layer.offsets[u]; k < layer.offsets[u + 1]; ++k)
            acc += layer.entries[k].coef * in[layer.entries[k].in];
        out[u] = apply_activation(layer.activations[u], acc);
    }
}

} // namespace

LayeredNet compile(const CltInstance& instance, const CompileOptions& options) {
    const std::uint32_t n = instance.node_count();
    const std::uint32_t s = instance.cascade_count();
    const std::uint32_t sp = next_pow2(s);
    const std::int32_t q = instance.precision();
    const std::int64_t one = instance.unit_one();

    LayeredNet net;
    net.node_count = n;
    net.cascades = s;
    net.cascades_padded = sp;
    net.z = log2_u32(sp);
    net.q = q;

    int d = 1;
    while (pow10_i64(d) <= static_cast<std::int64_t>(sp)) ++d;
    net.digit_budget = d;

    // Largest possible phase-1 output: self-link 2 plus a fully saturated
    // in-weight column (sum <= 1 after validation).
    std::int64_t max_colsum = 0;
    for (CascadeId cs = 1; cs <= s; ++cs)
        for (NodeId v = 0; v < n; ++v)
            max_colsum = std::max(max_colsum, instance.in_weight_sum_units(v, cs));
    const std::int64_t max_sum = 2 * one + max_colsum;

    net.fast_path = (s == 2) && !options.force_general_path;

    if (net.fast_path) {
        const std::int64_t big = max_sum; // dominates any rival summation
        net.max_abs_value = (big + 1) * max_sum;
        if (net.max_abs_value > kValueHeadroom)
            fail(ErrorCode::PrecisionOverflow, "fast-path values exceed integer width");
    } else {
        std::int64_t scaled = max_sum * pow10_i64(d);
        net.max_abs_value = scaled + sp;
        if (net.max_abs_value > kValueHeadroom)
            fail(ErrorCode::PrecisionOverflow,
                 "encoded values exceed integer width; reduce q or cascade count");
    }

    auto in_idx = [sp](NodeId v, std::uint32_t slot) { return v * sp + slot; };

    // Phase 1: per (node, cascade), sum of s-active in-neighbor weights plus
    // a self-link of weight 2 so an active node strictly dominates any rival
    // sum (rivals are capped at 1 by normalization).
    {
        LayerBuilder b(LayerRole::Phase1, n * sp);
        b.layer.weights_are_model_params = true;
        for (NodeId v = 0; v < n; ++v) {
            for (std::uint32_t slot = 0; slot < sp; ++slot) {
                CascadeId cs = slot + 1;
                if (cs > s) { // dummy cascade: no inputs, threshold 1
                    b.unit({}, {ActivationKind::ThresholdKeep, one});
                    continue;
                }
                std::vector<WeightEntry> entries;
                for (EdgeId e : instance.graph().in_edges(v))
                    entries.push_back({in_idx(instance.graph().edge(e).src, slot),
                                       instance.weight_units(e, cs)});
                entries.push_back({in_idx(v, slot), 2 * one});
                for (const WeightEntry& we : entries) b.layer.entries.push_back(we);
                b.layer.offsets.push_back(static_cast<std::uint32_t>(b.layer.entries.size()));
                b.layer.activations.push_back(
                    {ActivationKind::ThresholdKeep, instance.threshold_units(v, cs)});
            }
        }
        net.layers.push_back(b.finish());
    }

    if (net.fast_path) {
        // Perceptron resolution for two cascades: cascade 1 wins ties, so its
        // unit tests a1 >= max(a2, 1) via a lopsided difference; cascade 2
        // needs a strictly larger sum.
        const std::int64_t big = max_sum;
        LayerBuilder b(LayerRole::FastResolve, n * 2);
        for (NodeId v = 0; v < n; ++v) {
            b.unit({{in_idx(v, 0), big + 1}, {in_idx(v, 1), -big}},
                   {ActivationKind::StepAtLeast, 1});
            b.unit({{in_idx(v, 1), 1}, {in_idx(v, 0), -1}}, {ActivationKind::StepAtLeast, 1});
        }
        net.layers.push_back(b.finish());
        return net;
    }

    const std::int64_t shift = pow10_i64(d);

    // Identity encode: scale sums by 10^D and stamp the reversed cascade code
    // (S+1-s) into the low digits of nonzero units, so the running maximum
    // carries its cascade and equal sums resolve to the smaller index.
    {
        LayerBuilder b(LayerRole::Encode, n * sp);
        for (NodeId v = 0; v < n; ++v)
            for (std::uint32_t slot = 0; slot < sp; ++slot)
                b.unit({{in_idx(v, slot), shift}},
                       {ActivationKind::IdentityAppend,
                        static_cast<std::int64_t>(sp - slot)});
        net.layers.push_back(b.finish());
    }

    // Z rounds of pairwise max: relu(a-b) then (+b) keeps max(a, b) exactly.
    std::uint32_t m = sp;
    while (m > 1) {
        const std::uint32_t half = m / 2;
        {
            LayerBuilder b(LayerRole::CompareDiff, n * m);
            for (NodeId v = 0; v < n; ++v) {
                for (std::uint32_t r = 0; r < half; ++r) {
                    std::uint32_t a = v * m + 2 * r, c = v * m + 2 * r + 1;
                    b.unit({{a, 1}, {c, -1}}, {ActivationKind::Relu, 0});
                    b.unit({{c, 1}}, {ActivationKind::Linear, 0});
                }
            }
            net.layers.push_back(b.finish());
        }
        {
            LayerBuilder b(LayerRole::CompareMerge, n * m);
            for (NodeId v = 0; v < n; ++v)
                for (std::uint32_t r = 0; r < half; ++r)
                    b.unit({{v * m + 2 * r, 1}, {v * m + 2 * r + 1, 1}},
                           {ActivationKind::Linear, 0});
            net.layers.push_back(b.finish());
        }
        m = half;
    }

    // Recover the winner's code from the low digits (0 for inactive nodes,
    // which never received a code).
    {
        LayerBuilder b(LayerRole::Recover, n);
        for (NodeId v = 0; v < n; ++v)
            b.unit({{v, 1}}, {ActivationKind::Modulo, shift});
        net.layers.push_back(b.finish());
    }

    // Thermometer: unit (v, r) = 1 iff code_v >= r.
    {
        LayerBuilder b(LayerRole::Thermometer, n);
        for (NodeId v = 0; v < n; ++v)
            for (std::uint32_t r = 1; r <= sp; ++r)
                b.unit({{v, 1}}, {ActivationKind::StepAtLeast, r});
        net.layers.push_back(b.finish());
    }

    // One-hot by adjacent differencing, mapped back from code r to cascade
    // s = S+1-r; dummy slots are dropped here.
    {
        LayerBuilder b(LayerRole::OneHot, n * sp);
        for (NodeId v = 0; v < n; ++v) {
            for (CascadeId cs = 1; cs <= s; ++cs) {
                std::uint32_t r = sp + 1 - cs;
                std::uint32_t base = v * sp;
                if (r + 1 <= sp)
                    b.unit({{base + r - 1, 1}, {base + r, -1}}, {ActivationKind::StepAtLeast, 1});
                else
                    b.unit({{base + r - 1, 1}}, {ActivationKind::StepAtLeast, 1});
            }
        }
        net.layers.push_back(b.finish());
    }

    return net;
}

namespace {

std::vector<std::int64_t> padded_input(const LayeredNet& net,
                                       const std::vector<std::uint8_t>& bits) {
    if (bits.size() != static_cast<std::size_t>(net.node_count) * net.cascades)
        fail(ErrorCode::WidthMismatch, "status vector has wrong width");
    std::vector<std::int64_t> h(static_cast<std::size_t>(net.node_count) * net.cascades_padded,
                                0);
    for (NodeId v = 0; v < net.node_count; ++v) {
        int set = 0;
        for (CascadeId cs = 1; cs <= net.cascades; ++cs) {
            std::uint8_t bit = bits[static_cast<std::size_t>(v) * net.cascades + cs - 1];
            if (bit) ++set;
            h[static_cast<std::size_t>(v) * net.cascades_padded + cs - 1] = bit;
        }
        if (set > 1)
            fail(ErrorCode::InvariantViolation, "input has a node active in two cascades");
    }
    return h;
}

std::vector<std::uint8_t> to_bits(const LayeredNet& net, const std::vector<std::int64_t>& h) {
    std::vector<std::uint8_t> bits(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) bits[i] = h[i] != 0;
    return bits;
}

} // namespace

std::vector<std::uint8_t> forward_step(const LayeredNet& net,
                                       const std::vector<std::uint8_t>& status_bits) {
    std::vector<std::int64_t> cur = padded_input(net, status_bits);
    std::vector<std::int64_t> next;
    for (const LayerSpec& layer : net.layers) {
        eval_layer(layer, cur, next);
        cur.swap(next);
    }
    return to_bits(net, cur);
}

CascadeLabels forward_step_labels(const LayeredNet& net, const CascadeLabels& prev) {
    std::vector<std::uint8_t> bits = labels_to_bits(prev, net.cascades);
    return labels_from_bits(forward_step(net, bits), net.node_count, net.cascades);
}

std::vector<std::vector<std::int64_t>> forward_step_instrumented(
    const LayeredNet& net, const std::vector<std::uint8_t>& status_bits) {
    std::vector<std::vector<std::int64_t>> trace;
    trace.push_back(padded_input(net, status_bits));
    for (const LayerSpec& layer : net.layers) {
        std::vector<std::int64_t> next;
        eval_layer(layer, trace.back(), next);
        trace.push_back(std::move(next));
    }
    return trace;
}

NetTrajectory unroll_trajectory(const LayeredNet& net, const CascadeLabels& initial) {
    NetTrajectory traj;
    traj.logical_steps = net.node_count;
    const CascadeLabels* prev = &initial;
    for (std::uint32_t t = 1; t <= traj.logical_steps; ++t) {
        CascadeLabels next = forward_step_labels(net, *prev);
        bool fixed = next == *prev;
        traj.statuses.push_back(std::move(next));
        prev = &traj.statuses.back();
        if (fixed) break;
    }
    return traj;
}

CascadeLabels unroll_forward(const LayeredNet& net, const CascadeLabels& initial) {
    if (net.node_count == 0) return initial;
    return unroll_trajectory(net, initial).final_status();
}

NetAudit audit(const LayeredNet& net) {
    NetAudit a;
    a.layer_count = static_cast<std::uint32_t>(net.layers.size());
    a.max_abs_value = net.max_abs_value;
    for (const LayerSpec& layer : net.layers) {
        a.widths.push_back(layer.width_out);
        a.computation_units += layer.width_out;
        a.total_entries += layer.entries.size();
        // Phase-1 entries are exactly the S*(M+N) model slots (edge weights
        // plus self-links per real cascade); dummy slots contribute none.
        if (layer.role == LayerRole::Phase1) a.adjustable_weights += layer.entries.size();
        for (const Activation& act : layer.activations) {
            std::int64_t pieces = 1;
            switch (act.kind) {
                case ActivationKind::Linear: pieces = 1; break;
                case ActivationKind::Relu:
                case ActivationKind::ThresholdKeep:
                case ActivationKind::IdentityAppend:
                case ActivationKind::StepAtLeast: pieces = 2; break;
                case ActivationKind::Modulo:
                    pieces = net.max_abs_value / act.param + 1;
                    a.modulo_pieces = std::max(a.modulo_pieces, pieces);
                    break;
            }
            a.max_activation_pieces = std::max(a.max_activation_pieces, pieces);
        }
    }
    return a;
}

} // namespace clt
