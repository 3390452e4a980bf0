#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slash/graph.hpp"

namespace slash {

enum class TokenClass { OPEN, NODE, COMMA, CLOSE };

inline const char* token_class_name(TokenClass c) {
    switch (c) {
        case TokenClass::OPEN: return "OPEN";
        case TokenClass::NODE: return "NODE";
        case TokenClass::COMMA: return "COMMA";
        case TokenClass::CLOSE: return "CLOSE";
    }
    return "?";
}

inline TokenClass token_class_from_name(const std::string& s) {
    if (s == "OPEN") return TokenClass::OPEN;
    if (s == "NODE") return TokenClass::NODE;
    if (s == "COMMA") return TokenClass::COMMA;
    if (s == "CLOSE") return TokenClass::CLOSE;
    throw ParseError("unknown token class: " + s);
}

struct Token {
    std::string text;
    TokenClass cls = TokenClass::OPEN;
    int edge_index = -1;  // index into the serialized edge order
    int source_node = -1; // first node of the owning tuple
};

/// Token stream plus per-token provenance. Five tokens per edge:
/// OPEN NODE COMMA NODE CLOSE, every one tagged with its edge and source.
struct TokenizedSerialization {
    std::vector<Token> tokens;
    bool aggregated = false;
    Graph graph; // the serialized graph, kept for node-space decoding

    std::size_t size() const { return tokens.size(); }
};

/// Emit "(u,v)" tuples as tokens. Each whole node id is a single token so the
/// ground-truth adjacency is exact and model-independent.
inline TokenizedSerialization serialize(const Graph& g) {
    TokenizedSerialization out;
    out.graph = g;
    out.aggregated = source_grouped(g);
    out.tokens.reserve(g.edges.size() * 5);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        const int idx = static_cast<int>(e);
        out.tokens.push_back({"(", TokenClass::OPEN, idx, ed.src});
        out.tokens.push_back({std::to_string(ed.src), TokenClass::NODE, idx, ed.src});
        out.tokens.push_back({",", TokenClass::COMMA, idx, ed.src});
        out.tokens.push_back({std::to_string(ed.dst), TokenClass::NODE, idx, ed.src});
        out.tokens.push_back({")", TokenClass::CLOSE, idx, ed.src});
    }
    return out;
}

/// Concatenated text form, e.g. "(0,1)(0,3)(2,3)".
inline std::string serialization_text(const TokenizedSerialization& s) {
    std::string out;
    for (const Token& t : s.tokens) out += t.text;
    return out;
}

inline nlohmann::json serialization_to_json(const TokenizedSerialization& s) {
    nlohmann::json toks = nlohmann::json::array();
    for (const Token& t : s.tokens) {
        toks.push_back({{"text", t.text},
                        {"class", token_class_name(t.cls)},
                        {"edge_index", t.edge_index},
                        {"source_node", t.source_node}});
    }
    return {{"aggregated", s.aggregated}, {"graph", graph_to_json(s.graph)}, {"tokens", std::move(toks)}};
}

inline TokenizedSerialization serialization_from_json(const nlohmann::json& j) {
    TokenizedSerialization s;
    try {
        s.aggregated = j.at("aggregated").get<bool>();
        s.graph = graph_from_json(j.at("graph"));
        for (const auto& t : j.at("tokens")) {
            s.tokens.push_back({t.at("text").get<std::string>(),
                                token_class_from_name(t.at("class").get<std::string>()),
                                t.at("edge_index").get<int>(),
                                t.at("source_node").get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("tokens JSON schema violation: ") + e.what());
    }
    return s;
}

} // namespace slash
