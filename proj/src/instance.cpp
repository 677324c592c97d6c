#include "clt/instance.hpp"

namespace clt {

CltInstance::CltInstance(Graph graph, std::uint32_t cascade_count, std::int32_t q)
    : graph_(std::move(graph)), s_(cascade_count), q_(q), unit_one_(pow10_i64(q)) {
    if (s_ < 1 || s_ > kMaxCascades)
        fail(ErrorCode::InvalidInput,
             "cascade count must be in [1, " + std::to_string(kMaxCascades) + "]");
    weights_.assign(s_, std::vector<std::int64_t>(graph_.edge_count(), 0));
    thetas_.assign(s_, std::vector<std::int64_t>(graph_.node_count(), unit_one_));
}

void CltInstance::set_weight_units(EdgeId e, CascadeId s, std::int64_t units) {
    if (s < 1 || s > s_ || e >= graph_.edge_count())
        fail(ErrorCode::IndexOutOfRange, "weight index out of range");
    if (units < 0)
        fail(ErrorCode::Negative, "weights must be nonnegative");
    weights_[s - 1][e] = units;
}

void CltInstance::set_threshold_units(NodeId v, CascadeId s, std::int64_t units) {
    if (s < 1 || s > s_ || v >= graph_.node_count())
        fail(ErrorCode::IndexOutOfRange, "threshold index out of range");
    if (units < 0)
        fail(ErrorCode::Negative, "thresholds must be nonnegative");
    thetas_[s - 1][v] = units;
}

std::int64_t CltInstance::in_weight_sum_units(NodeId v, CascadeId s) const {
    std::int64_t sum = 0;
    for (EdgeId e : graph_.in_edges(v)) sum += weights_[s - 1][e];
    return sum;
}

bool CltInstance::operator==(const CltInstance& o) const {
    return s_ == o.s_ && q_ == o.q_ && graph_ == o.graph_ && weights_ == o.weights_ &&
           thetas_ == o.thetas_;
}

ValidationReport validate_instance(const CltInstance& instance) {
    ValidationReport report;
    const std::int64_t one = instance.unit_one();
    const Graph& g = instance.graph();
    for (CascadeId s = 1; s <= instance.cascade_count(); ++s) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            std::int64_t sum = instance.in_weight_sum_units(v, s);
            if (sum > one) {
                report.issues.push_back(
                    {ValidationIssue::Kind::Normalization, v, s,
                     "in-weight sum " + ScaledValue{sum, instance.precision()}.to_string() +
                         " exceeds 1"});
            }
            std::int64_t th = instance.threshold_units(v, s);
            if (th < 1 || th > one) {
                report.issues.push_back(
                    {ValidationIssue::Kind::ThresholdRange, v, s,
                     "threshold " + ScaledValue{th, instance.precision()}.to_string() +
                         " outside [10^-q, 1]"});
            }
        }
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            std::int64_t w = instance.weight_units(e, s);
            if (w < 0 || w > one) {
                report.issues.push_back(
                    {ValidationIssue::Kind::WeightRange, g.edge(e).dst, s,
                     "weight " + ScaledValue{w, instance.precision()}.to_string() +
                         " outside [0, 1]"});
            }
        }
    }
    return report;
}

} // namespace clt
