#include "clt/metrics.hpp"

#include <cmath>
#include <numeric>

namespace clt {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) fail(ErrorCode::InvalidInput, "zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

bool Rational::operator<=(const Rational& o) const {
    return static_cast<__int128>(num) * o.den <= static_cast<__int128>(o.num) * den;
}

Rational rational_add(const Rational& a, const Rational& b) {
    std::int64_t g = std::gcd(a.den, b.den);
    std::int64_t den = a.den / g * b.den;
    std::int64_t num = a.num * (b.den / g) + b.num * (a.den / g);
    return Rational(num, den);
}

namespace {

std::uint64_t mismatched_cells(const CascadeLabels& truth, const CascadeLabels& pred) {
    if (truth.size() != pred.size())
        fail(ErrorCode::ShapeMismatch, "status shapes differ");
    std::uint64_t cells = 0;
    for (NodeId v = 0; v < truth.size(); ++v) {
        if (truth[v] == pred[v]) continue;
        cells += (truth[v] != 0 && pred[v] != 0) ? 2 : 1;
    }
    return cells;
}

} // namespace

Rational zero_one_loss(const CascadeLabels& truth, const CascadeLabels& pred,
                       std::uint32_t cascade_count) {
    if (truth.size() != pred.size())
        fail(ErrorCode::ShapeMismatch, "status shapes differ");
    std::int64_t den = 2 * static_cast<std::int64_t>(truth.size()) * cascade_count;
    if (den == 0) return Rational(0, 1);
    return Rational(static_cast<std::int64_t>(mismatched_cells(truth, pred)), den);
}

void ConfusionCounts::add(const CascadeLabels& truth, const CascadeLabels& pred,
                          std::uint32_t cascade_count) {
    if (truth.size() != pred.size())
        fail(ErrorCode::ShapeMismatch, "status shapes differ");
    if (class_tp.size() < cascade_count + 1) {
        class_tp.resize(cascade_count + 1, 0);
        class_fp.resize(cascade_count + 1, 0);
        class_fn.resize(cascade_count + 1, 0);
    }
    for (NodeId v = 0; v < truth.size(); ++v) {
        CascadeId t = truth[v], p = pred[v];
        ++nodes;
        if (t == p) {
            ++label_matches;
            ++class_tp[t];
            if (t != 0) {
                ++tp;
                tn += cascade_count - 1;
            } else {
                tn += cascade_count;
            }
        } else {
            ++class_fn[t];
            ++class_fp[p];
            if (t != 0 && p != 0) {
                ++fn;
                ++fp;
                tn += cascade_count - 2;
            } else if (t != 0) {
                ++fn;
                tn += cascade_count - 1;
            } else {
                ++fp;
                tn += cascade_count - 1;
            }
        }
    }
}

namespace {

double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

} // namespace

ClassificationMetrics metrics_from_counts(const ConfusionCounts& c) {
    ClassificationMetrics m;
    m.micro_precision = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
    m.micro_recall = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
    m.micro_f1 = c.tp == 0 ? 0.0
                           : safe_div(2.0 * m.micro_precision * m.micro_recall,
                                      m.micro_precision + m.micro_recall);
    m.micro_accuracy = safe_div(static_cast<double>(c.tp + c.tn),
                                static_cast<double>(c.tp + c.tn + c.fp + c.fn));
    m.label_accuracy =
        safe_div(static_cast<double>(c.label_matches), static_cast<double>(c.nodes));

    // Macro statistics over the labels present in truth or prediction
    // (including the inactive label), each class weighted equally.
    double psum = 0, rsum = 0, fsum = 0;
    std::uint32_t present = 0;
    for (std::size_t cls = 0; cls < c.class_tp.size(); ++cls) {
        std::uint64_t tp = c.class_tp[cls], fp = c.class_fp[cls], fn = c.class_fn[cls];
        if (tp + fp + fn == 0) continue;
        ++present;
        double p = safe_div(static_cast<double>(tp), static_cast<double>(tp + fp));
        double r = safe_div(static_cast<double>(tp), static_cast<double>(tp + fn));
        psum += p;
        rsum += r;
        fsum += tp == 0 ? 0.0 : safe_div(2 * p * r, p + r);
    }
    if (present > 0) {
        m.macro_precision = psum / present;
        m.macro_recall = rsum / present;
        m.macro_f1 = fsum / present;
    }
    return m;
}

ClassificationMetrics classification_metrics(const CascadeLabels& truth,
                                             const CascadeLabels& pred,
                                             std::uint32_t cascade_count) {
    ConfusionCounts counts;
    counts.add(truth, pred, cascade_count);
    return metrics_from_counts(counts);
}

std::vector<double> step_matching(const StatusTensor& truth, const StatusTensor& predicted,
                                  std::uint32_t cascade_count, std::uint32_t cap) {
    if (truth.initial.size() != predicted.initial.size())
        fail(ErrorCode::ShapeMismatch, "trajectory shapes differ");
    std::uint32_t steps = std::min(cap, std::max(truth.logical_steps, predicted.logical_steps));
    std::vector<double> rates;
    const double total_cells =
        static_cast<double>(truth.initial.size()) * cascade_count;
    for (std::uint32_t t = 1; t <= steps; ++t) {
        std::uint32_t tt = std::min(t, truth.logical_steps);
        std::uint32_t tp = std::min(t, predicted.logical_steps);
        std::uint64_t mismatch = mismatched_cells(truth.phase2_at(tt), predicted.phase2_at(tp));
        rates.push_back(total_cells == 0.0
                            ? 1.0
                            : 1.0 - static_cast<double>(mismatch) / total_cells);
    }
    return rates;
}

CascadeLabels random_baseline(std::uint32_t node_count, std::uint32_t cascade_count, Rng& rng) {
    CascadeLabels labels(node_count, 0);
    for (NodeId v = 0; v < node_count; ++v)
        labels[v] = static_cast<CascadeId>(rng.next_int(0, cascade_count));
    return labels;
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    a.runs = values.size();
    if (values.empty()) return a;
    double sum = 0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() >= 2) {
        double ss = 0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return a;
}

} // namespace clt
