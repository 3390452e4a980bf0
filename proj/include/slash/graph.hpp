#pragma once

#include <cstdint>
#include <istream>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "slash/common.hpp"

namespace slash {

struct Edge {
    int src = 0;
    int dst = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Node/edge structure being serialized. Edge order is preserved exactly as
/// loaded; it is meaningful until aggregation regroups it.
struct Graph {
    int num_nodes = 0;
    std::vector<Edge> edges;
    bool directed = false;
    bool allow_self_loops = false;
};

inline void validate_graph(const Graph& g) {
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        if (ed.src < 0 || ed.src >= g.num_nodes || ed.dst < 0 || ed.dst >= g.num_nodes) {
            throw BoundsError("edge " + std::to_string(e) + " references node-id out of range [0, " +
                              std::to_string(g.num_nodes) + ")");
        }
        if (ed.src == ed.dst && !g.allow_self_loops) {
            throw ParseError("edge " + std::to_string(e) + " is a self-loop and allow_self_loops is false");
        }
    }
}

inline Graph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("graph JSON must be an object");
    Graph g;
    try {
        g.num_nodes = j.at("num_nodes").get<int>();
        g.directed = j.value("directed", false);
        g.allow_self_loops = j.value("allow_self_loops", false);
        for (const auto& pair : j.at("edges")) {
            if (!pair.is_array() || pair.size() != 2) throw ParseError("each edge must be a [u, v] pair");
            g.edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph JSON schema violation: ") + e.what());
    }
    if (g.num_nodes < 0) throw ParseError("num_nodes must be non-negative");
    validate_graph(g);
    return g;
}

/// Load a graph from a JSON byte stream, keeping edges in file order.
inline Graph load_graph(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed graph JSON: ") + e.what());
    }
    return graph_from_json(j);
}

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : g.edges) edges.push_back({e.src, e.dst});
    return {{"num_nodes", g.num_nodes},
            {"edges", std::move(edges)},
            {"directed", g.directed},
            {"allow_self_loops", g.allow_self_loops}};
}

/// Stable regrouping: all edges sharing a source become one contiguous block,
/// blocks ordered by first occurrence of the source, original order kept
/// within each block.
inline Graph aggregate_edges(const Graph& g) {
    std::unordered_map<int, std::size_t> bucket_of;
    std::vector<std::vector<Edge>> buckets;
    for (const Edge& e : g.edges) {
        auto it = bucket_of.find(e.src);
        if (it == bucket_of.end()) {
            bucket_of.emplace(e.src, buckets.size());
            buckets.push_back({e});
        } else {
            buckets[it->second].push_back(e);
        }
    }
    Graph out = g;
    out.edges.clear();
    out.edges.reserve(g.edges.size());
    for (const auto& b : buckets) out.edges.insert(out.edges.end(), b.begin(), b.end());
    return out;
}

/// True when every source's edges already form one contiguous run.
inline bool source_grouped(const Graph& g) {
    std::unordered_map<int, int> last_seen;
    int prev = -1;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        int s = g.edges[e].src;
        auto it = last_seen.find(s);
        if (it != last_seen.end() && prev != s) return false;
        last_seen[s] = static_cast<int>(e);
        prev = s;
    }
    return true;
}

} // namespace slash
