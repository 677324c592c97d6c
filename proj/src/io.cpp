#include "clt/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace clt {

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> bits_from_labels(
    const CascadeLabels& labels) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (NodeId v = 0; v < labels.size(); ++v)
        if (labels[v] != 0) out.push_back({v + 1, labels[v]});
    return out;
}

CascadeLabels labels_from_pairs(const Json& pairs, std::uint32_t node_count,
                                std::uint32_t cascade_count) {
    CascadeLabels labels(node_count, 0);
    for (const Json& p : pairs) {
        std::uint32_t node = p.at(0).get<std::uint32_t>();
        std::uint32_t cascade = p.at(1).get<std::uint32_t>();
        if (node < 1 || node > node_count || cascade < 1 || cascade > cascade_count)
            fail(ErrorCode::InvalidInput, "status entry out of range");
        if (labels[node - 1] != 0)
            fail(ErrorCode::InconsistentSample, "node listed in two cascades");
        labels[node - 1] = cascade;
    }
    return labels;
}

const char* role_name(LayerRole role) {
    switch (role) {
        case LayerRole::Phase1: return "phase1";
        case LayerRole::Encode: return "encode";
        case LayerRole::CompareDiff: return "compare_diff";
        case LayerRole::CompareMerge: return "compare_merge";
        case LayerRole::Recover: return "recover";
        case LayerRole::Thermometer: return "thermometer";
        case LayerRole::OneHot: return "one_hot";
        case LayerRole::FastResolve: return "fast_resolve";
    }
    return "?";
}

LayerRole role_from_name(const std::string& name) {
    if (name == "phase1") return LayerRole::Phase1;
    if (name == "encode") return LayerRole::Encode;
    if (name == "compare_diff") return LayerRole::CompareDiff;
    if (name == "compare_merge") return LayerRole::CompareMerge;
    if (name == "recover") return LayerRole::Recover;
    if (name == "thermometer") return LayerRole::Thermometer;
    if (name == "one_hot") return LayerRole::OneHot;
    if (name == "fast_resolve") return LayerRole::FastResolve;
    fail(ErrorCode::InvalidInput, "unknown layer role '" + name + "'");
}

const char* activation_name(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::ThresholdKeep: return "threshold_keep";
        case ActivationKind::IdentityAppend: return "identity_append";
        case ActivationKind::Relu: return "relu";
        case ActivationKind::Linear: return "linear";
        case ActivationKind::Modulo: return "modulo";
        case ActivationKind::StepAtLeast: return "step_at_least";
    }
    return "?";
}

ActivationKind activation_from_name(const std::string& name) {
    if (name == "threshold_keep") return ActivationKind::ThresholdKeep;
    if (name == "identity_append") return ActivationKind::IdentityAppend;
    if (name == "relu") return ActivationKind::Relu;
    if (name == "linear") return ActivationKind::Linear;
    if (name == "modulo") return ActivationKind::Modulo;
    if (name == "step_at_least") return ActivationKind::StepAtLeast;
    fail(ErrorCode::InvalidInput, "unknown activation '" + name + "'");
}

} // namespace

Json graph_to_json(const Graph& graph) {
    Json edges = Json::array();
    for (const Edge& e : graph.edges()) edges.push_back({e.src + 1, e.dst + 1});
    return Json{{"n", graph.node_count()}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
    std::uint32_t n = j.at("n").get<std::uint32_t>();
    std::vector<Edge> edges;
    for (const Json& e : j.at("edges")) {
        std::uint32_t src = e.at(0).get<std::uint32_t>();
        std::uint32_t dst = e.at(1).get<std::uint32_t>();
        if (src < 1 || dst < 1 || src > n || dst > n)
            fail(ErrorCode::InvalidInput, "edge endpoint out of range in graph file");
        edges.push_back({src - 1, dst - 1});
    }
    return Graph(n, std::move(edges));
}

Json instance_to_json(const CltInstance& instance) {
    Json weights = Json::array();
    const Graph& g = instance.graph();
    for (CascadeId s = 1; s <= instance.cascade_count(); ++s)
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            weights.push_back(Json::array({g.edge(e).src + 1, g.edge(e).dst + 1, s,
                                           instance.weight(e, s).to_string()}));
    Json thresholds = Json::array();
    for (CascadeId s = 1; s <= instance.cascade_count(); ++s)
        for (NodeId v = 0; v < instance.node_count(); ++v)
            thresholds.push_back(Json::array({v + 1, s, instance.threshold(v, s).to_string()}));
    return Json{{"q", instance.precision()},
                {"s", instance.cascade_count()},
                {"graph", graph_to_json(instance.graph())},
                {"weights", weights},
                {"thresholds", thresholds}};
}

CltInstance instance_from_json(const Json& j) {
    std::int32_t q = j.at("q").get<std::int32_t>();
    std::uint32_t s = j.at("s").get<std::uint32_t>();
    Graph graph = graph_from_json(j.at("graph"));

    // Edge ids by (src, dst) for weight lookup.
    std::vector<std::vector<std::pair<NodeId, EdgeId>>> by_dst(graph.node_count());
    for (EdgeId e = 0; e < graph.edge_count(); ++e)
        by_dst[graph.edge(e).dst].push_back({graph.edge(e).src, e});

    CltInstance instance(std::move(graph), s, q);
    for (const Json& w : j.at("weights")) {
        NodeId src = w.at(0).get<std::uint32_t>() - 1;
        NodeId dst = w.at(1).get<std::uint32_t>() - 1;
        CascadeId cascade = w.at(2).get<std::uint32_t>();
        ScaledValue value = scaled_param_from_decimal_string(w.at(3).get<std::string>(), q);
        bool found = false;
        for (auto [cand_src, e] : by_dst.at(dst)) {
            if (cand_src == src) {
                instance.set_weight_units(e, cascade, value.units);
                found = true;
                break;
            }
        }
        if (!found)
            fail(ErrorCode::InvalidInput, "weight references a non-existent edge");
    }
    for (const Json& t : j.at("thresholds")) {
        NodeId node = t.at(0).get<std::uint32_t>() - 1;
        CascadeId cascade = t.at(1).get<std::uint32_t>();
        ScaledValue value = scaled_param_from_decimal_string(t.at(2).get<std::string>(), q);
        instance.set_threshold_units(node, cascade, value.units);
    }
    return instance;
}

Json sample_to_json(const Sample& sample, std::uint32_t cascade_count) {
    (void)cascade_count;
    Json steps = Json::array();
    for (const StepOutcome& step : sample.steps) {
        Json p1 = Json::array();
        for (NodeId v = 0; v < step.phase1.size(); ++v)
            for (CascadeId s = 1; s <= 64; ++s) {
                if (step.phase1[v] >> (s - 1) == 0) break;
                if (step.phase1[v] & (1ULL << (s - 1))) p1.push_back({v + 1, s});
            }
        Json p2 = Json::array();
        for (auto [node, cascade] : bits_from_labels(step.phase2))
            p2.push_back({node, cascade});
        steps.push_back(Json{{"p1", p1}, {"p2", p2}});
    }
    Json i0 = Json::array();
    for (auto [node, cascade] : bits_from_labels(sample.initial)) i0.push_back({node, cascade});
    return Json{{"i0", i0}, {"steps", steps}};
}

Sample sample_from_json(const Json& j, std::uint32_t node_count, std::uint32_t cascade_count) {
    Sample sample;
    sample.initial = labels_from_pairs(j.at("i0"), node_count, cascade_count);
    for (const Json& sj : j.at("steps")) {
        StepOutcome step;
        step.phase1.assign(node_count, 0);
        for (const Json& p : sj.at("p1")) {
            std::uint32_t node = p.at(0).get<std::uint32_t>();
            std::uint32_t cascade = p.at(1).get<std::uint32_t>();
            if (node < 1 || node > node_count || cascade < 1 || cascade > cascade_count)
                fail(ErrorCode::InvalidInput, "phase-1 entry out of range");
            step.phase1[node - 1] |= 1ULL << (cascade - 1);
        }
        step.phase2 = labels_from_pairs(sj.at("p2"), node_count, cascade_count);
        sample.steps.push_back(std::move(step));
    }
    sample.logical_steps = node_count;
    check_sample_consistency(sample, node_count, cascade_count);
    return sample;
}

void save_dataset(std::ostream& out, const Dataset& dataset) {
    Json meta{{"meta",
               {{"n", dataset.node_count},
                {"s", dataset.cascade_count},
                {"q", dataset.precision}}}};
    out << meta.dump() << "\n";
    for (const Sample& sample : dataset.samples)
        out << sample_to_json(sample, dataset.cascade_count).dump() << "\n";
}

Dataset load_dataset(std::istream& in) {
    Dataset dataset;
    std::string line;
    bool have_meta = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j = Json::parse(line);
        if (j.contains("meta")) {
            const Json& m = j.at("meta");
            dataset.node_count = m.at("n").get<std::uint32_t>();
            dataset.cascade_count = m.at("s").get<std::uint32_t>();
            dataset.precision = m.at("q").get<std::int32_t>();
            have_meta = true;
            continue;
        }
        if (!have_meta)
            fail(ErrorCode::InvalidInput,
                 "dataset file lacks a leading meta line with n/s/q");
        dataset.samples.push_back(
            sample_from_json(j, dataset.node_count, dataset.cascade_count));
    }
    return dataset;
}

Json net_to_json(const LayeredNet& net) {
    Json layers = Json::array();
    const std::int32_t q = net.q;
    for (const LayerSpec& layer : net.layers) {
        Json units = Json::array();
        for (std::uint32_t u = 0; u < layer.width_out; ++u) {
            Json entries = Json::array();
            for (std::uint32_t k = layer.offsets[u]; k < layer.offsets[u + 1]; ++k) {
                const WeightEntry& e = layer.entries[k];
                if (layer.weights_are_model_params)
                    entries.push_back(Json::array({e.in, ScaledValue{e.coef, q}.to_string()}));
                else
                    entries.push_back(Json::array({e.in, e.coef}));
            }
            const Activation& act = layer.activations[u];
            Json actj{{"kind", activation_name(act.kind)}};
            if (layer.weights_are_model_params && act.kind == ActivationKind::ThresholdKeep)
                actj["param"] = ScaledValue{act.param, q}.to_string();
            else
                actj["param"] = act.param;
            units.push_back(Json{{"activation", actj}, {"in", entries}});
        }
        layers.push_back(Json{{"role", role_name(layer.role)},
                              {"width_in", layer.width_in},
                              {"width_out", layer.width_out},
                              {"model_params", layer.weights_are_model_params},
                              {"units", units}});
    }
    return Json{{"n", net.node_count}, {"s", net.cascades},
                {"s_padded", net.cascades_padded}, {"z", net.z},
                {"q", net.q},           {"d", net.digit_budget},
                {"fast_path", net.fast_path}, {"max_abs_value", net.max_abs_value},
                {"layers", layers}};
}

LayeredNet net_from_json(const Json& j) {
    LayeredNet net;
    net.node_count = j.at("n").get<std::uint32_t>();
    net.cascades = j.at("s").get<std::uint32_t>();
    net.cascades_padded = j.at("s_padded").get<std::uint32_t>();
    net.z = j.at("z").get<std::uint32_t>();
    net.q = j.at("q").get<std::int32_t>();
    net.digit_budget = j.at("d").get<std::int32_t>();
    net.fast_path = j.at("fast_path").get<bool>();
    net.max_abs_value = j.at("max_abs_value").get<std::int64_t>();
    for (const Json& lj : j.at("layers")) {
        LayerSpec layer;
        layer.role = role_from_name(lj.at("role").get<std::string>());
        layer.width_in = lj.at("width_in").get<std::uint32_t>();
        layer.width_out = lj.at("width_out").get<std::uint32_t>();
        layer.weights_are_model_params = lj.at("model_params").get<bool>();
        layer.offsets.push_back(0);
        for (const Json& uj : lj.at("units")) {
            for (const Json& ej : uj.at("in")) {
                std::uint32_t in = ej.at(0).get<std::uint32_t>();
                std::int64_t coef;
                if (ej.at(1).is_string())
                    coef = scaled_from_decimal_string(ej.at(1).get<std::string>(), net.q).units;
                else
                    coef = ej.at(1).get<std::int64_t>();
                layer.entries.push_back({in, coef});
            }
            layer.offsets.push_back(static_cast<std::uint32_t>(layer.entries.size()));
            const Json& actj = uj.at("activation");
            Activation act;
            act.kind = activation_from_name(actj.at("kind").get<std::string>());
            if (actj.at("param").is_string())
                act.param =
                    scaled_from_decimal_string(actj.at("param").get<std::string>(), net.q).units;
            else
                act.param = actj.at("param").get<std::int64_t>();
            layer.activations.push_back(act);
        }
        if (layer.activations.size() != layer.width_out)
            fail(ErrorCode::InvalidInput, "net dump layer width mismatch");
        net.layers.push_back(std::move(layer));
    }
    return net;
}

EdgeListReport import_edge_list(std::istream& in, std::uint32_t node_count_override) {
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::string line;
    std::int64_t min_id = std::numeric_limits<std::int64_t>::max();
    std::int64_t max_id = 0;
    while (std::getline(in, line)) {
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ls(line);
        std::int64_t a, b;
        if (!(ls >> a >> b)) continue; // blank or comment line
        raw.push_back({a, b});
        min_id = std::min({min_id, a, b});
        max_id = std::max({max_id, a, b});
    }
    EdgeListReport report;
    if (raw.empty()) {
        report.graph = Graph(node_count_override, {});
        return report;
    }
    if (min_id < 0) fail(ErrorCode::InvalidInput, "negative node id in edge list");
    report.detected_zero_based = (min_id == 0);
    std::int64_t offset = report.detected_zero_based ? 0 : 1;
    std::uint32_t n = static_cast<std::uint32_t>(max_id - offset + 1);
    if (node_count_override > 0) n = std::max(n, node_count_override);

    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen;
    for (auto [a, b] : raw) {
        std::uint32_t src = static_cast<std::uint32_t>(a - offset);
        std::uint32_t dst = static_cast<std::uint32_t>(b - offset);
        if (src == dst) {
            ++report.dropped_self_loops;
            continue;
        }
        std::uint64_t key = (static_cast<std::uint64_t>(src) << 32) | dst;
        if (!seen.insert(key).second) {
            ++report.dropped_duplicates;
            continue;
        }
        edges.push_back({src, dst});
    }
    report.graph = Graph(n, std::move(edges));
    return report;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    Json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << text;
}

std::string load_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace clt
