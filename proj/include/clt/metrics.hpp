#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clt/rng.hpp"
#include "clt/status.hpp"

namespace clt {

/// Exact nonnegative rational, normalized.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<=(const Rational& o) const;
};

Rational rational_add(const Rational& a, const Rational& b);

/// Zero-one loss with the printed 1/(2NS) normalization: half the fraction of
/// disagreeing (node, cascade) cells. Range [0, 1/2], exact.
Rational zero_one_loss(const CascadeLabels& truth, const CascadeLabels& pred,
                       std::uint32_t cascade_count);

struct ConfusionCounts {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0; // binary over cells
    std::vector<std::uint64_t> class_tp, class_fp, class_fn; // per label 0..S
    std::uint64_t label_matches = 0;
    std::uint64_t nodes = 0;

    void add(const CascadeLabels& truth, const CascadeLabels& pred,
             std::uint32_t cascade_count);
};

/// Cell-level (micro, positive = active bit) and node-label (multiclass)
/// aggregations. The paper never pins its aggregation; the random-baseline
/// row matches the node-label macro statistics, so reports carry both.
struct ClassificationMetrics {
    double micro_precision = 0, micro_recall = 0, micro_f1 = 0, micro_accuracy = 0;
    double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
    double label_accuracy = 0;
};

ClassificationMetrics metrics_from_counts(const ConfusionCounts& counts);
ClassificationMetrics classification_metrics(const CascadeLabels& truth,
                                             const CascadeLabels& pred,
                                             std::uint32_t cascade_count);

/// Fraction of agreeing phase-2 cells at each logical step t = 1..cap.
std::vector<double> step_matching(const StatusTensor& truth, const StatusTensor& predicted,
                                  std::uint32_t cascade_count, std::uint32_t cap);

/// Each node independently inactive or assigned one uniform cascade.
CascadeLabels random_baseline(std::uint32_t node_count, std::uint32_t cascade_count, Rng& rng);

/// Two-pass mean / sample standard deviation (0 for fewer than two values).
struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t runs = 0;
};
Aggregate aggregate(const std::vector<double>& values);

} // namespace clt
