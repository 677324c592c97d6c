#pragma once

#include <cstdint>
#include <vector>

#include "clt/instance.hpp"
#include "clt/status.hpp"

namespace clt {

/// Piecewise-linear unit activations. All evaluation is exact scaled-integer
/// arithmetic; `param` is interpreted per kind (threshold in units, appended
/// identity code, modulus, step offset).
enum class ActivationKind : std::uint8_t {
    ThresholdKeep, // x if x >= param else 0
    IdentityAppend, // x + param if x > 0 else 0
    Relu,          // max(x, 0)
    Linear,        // x
    Modulo,        // x mod param (x >= 0)
    StepAtLeast,   // 1 if x >= param else 0
};

enum class LayerRole : std::uint8_t {
    Phase1,
    Encode,
    CompareDiff,
    CompareMerge,
    Recover,
    Thermometer,
    OneHot,
    FastResolve,
};

struct Activation {
    ActivationKind kind;
    std::int64_t param = 0;
};

struct WeightEntry {
    std::uint32_t in = 0;
    std::int64_t coef = 0; // integer coefficient in the layer's unit scale
};

/// One transformation H^{l+1} = sigma(W * H^l), stored sparsely per output
/// unit (CSR offsets into `entries`).
struct LayerSpec {
    LayerRole role;
    std::uint32_t width_in = 0;
    std::uint32_t width_out = 0;
    std::vector<std::uint32_t> offsets; // size width_out + 1
    std::vector<WeightEntry> entries;
    std::vector<Activation> activations; // size width_out
    bool weights_are_model_params = false; // phase-1 entries carry 10^-q scale
};

/// Compiled one-step simulator. The general path has depth 2Z+5
/// (phase 1, identity encode, Z pairwise-comparison rounds of two layers,
/// modulo recovery, thermometer, one-hot). For two cascades the
/// coding-recovery machinery is unnecessary and a two-layer fast path is
/// emitted instead: the phase-1 layer followed by one perceptron layer.
struct LayeredNet {
    std::uint32_t node_count = 0;
    std::uint32_t cascades = 0;        // real cascade count
    std::uint32_t cascades_padded = 0; // next power of two
    std::uint32_t z = 0;               // log2(cascades_padded)
    std::int32_t q = 0;
    std::int32_t digit_budget = 0; // identity-code digits D
    bool fast_path = false;
    std::int64_t max_abs_value = 0; // conservative bound on any unit value
    std::vector<LayerSpec> layers;

    std::uint32_t input_width() const { return node_count * cascades; }
    std::uint32_t output_width() const { return node_count * cascades; }
};

struct CompileOptions {
    /// Emit the general coding-recovery construction even for two cascades.
    bool force_general_path = false;
};

struct NetAudit {
    std::uint32_t layer_count = 0;
    std::uint64_t adjustable_weights = 0; // S * (M + N)
    std::uint64_t computation_units = 0;
    std::uint64_t total_entries = 0;
    std::int64_t max_activation_pieces = 0;
    std::int64_t modulo_pieces = 0; // 0 when no modulo layer exists
    std::int64_t max_abs_value = 0;
    std::vector<std::uint32_t> widths;
};

LayeredNet compile(const CltInstance& instance, const CompileOptions& options = {});

/// One-step forward pass on a dense bit vector of width N*S (at most one bit
/// per node group). Returns the phase-2 status bits after one step.
std::vector<std::uint8_t> forward_step(const LayeredNet& net,
                                       const std::vector<std::uint8_t>& status_bits);

/// Same pass, from/to per-node cascade labels.
CascadeLabels forward_step_labels(const LayeredNet& net, const CascadeLabels& prev);

/// All intermediate vectors H^1..H^last (post-activation), for inspection of
/// the encode/compare invariants and divergence diagnostics.
std::vector<std::vector<std::int64_t>> forward_step_instrumented(
    const LayeredNet& net, const std::vector<std::uint8_t>& status_bits);

struct NetTrajectory {
    std::vector<CascadeLabels> statuses; // distinct prefix, first repeat kept
    std::uint32_t logical_steps = 0;

    const CascadeLabels& at(std::uint32_t t) const { // t in [1, logical_steps]
        if (t == 0 || t > logical_steps)
            fail(ErrorCode::IndexOutOfRange, "step index out of range");
        std::uint32_t i = t > statuses.size() ? static_cast<std::uint32_t>(statuses.size()) : t;
        return statuses[i - 1];
    }
    const CascadeLabels& final_status() const { return at(logical_steps); }
};

/// Repeats the one-step simulation node_count times (early fixed-point stop;
/// logically the trajectory has node_count steps).
NetTrajectory unroll_trajectory(const LayeredNet& net, const CascadeLabels& initial);

/// Final status after node_count unrolled steps; equals influence_function
/// of the compiled instance.
CascadeLabels unroll_forward(const LayeredNet& net, const CascadeLabels& initial);

NetAudit audit(const LayeredNet& net);

} // namespace clt
