#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "clt/instance.hpp"
#include "clt/netsim.hpp"
#include "clt/status.hpp"

namespace clt {

using Json = nlohmann::json;

// Graph file: {"n": N, "edges": [[src,dst], ...]}, 1-based node ids.
Json graph_to_json(const Graph& graph);
Graph graph_from_json(const Json& j);

// Instance file: {"q":..,"s":..,"graph":...,"weights":[[src,dst,cascade,"0.ddd"],...],
//                 "thresholds":[[node,cascade,"0.ddd"],...]}; numerics are decimal
// strings so values survive round-trips exactly.
Json instance_to_json(const CltInstance& instance);
CltInstance instance_from_json(const Json& j);

// Dataset: JSON lines; a leading {"meta":{"n":..,"s":..,"q":..}} line, then one
// sample per line, set bits only, 1-based ids:
// {"i0":[[node,cascade],...],"steps":[{"p1":[[node,cascade],...],"p2":[...]},...]}
Json sample_to_json(const Sample& sample, std::uint32_t cascade_count);
Sample sample_from_json(const Json& j, std::uint32_t node_count, std::uint32_t cascade_count);
void save_dataset(std::ostream& out, const Dataset& dataset);
Dataset load_dataset(std::istream& in);

// Layered-net dump for inspection; parseable back for fault-injection tests.
Json net_to_json(const LayeredNet& net);
LayeredNet net_from_json(const Json& j);

// Whitespace/comma separated "src dst" lines; 0- or 1-based autodetected by
// the minimum index. Self-loops and duplicates are dropped (counted in the
// returned report). Isolated trailing nodes survive via node_count_override.
struct EdgeListReport {
    Graph graph;
    std::uint32_t dropped_self_loops = 0;
    std::uint32_t dropped_duplicates = 0;
    bool detected_zero_based = false;
};
EdgeListReport import_edge_list(std::istream& in, std::uint32_t node_count_override = 0);

// File helpers.
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);
void save_text_file(const std::string& path, const std::string& text);
std::string load_text_file(const std::string& path);

} // namespace clt
