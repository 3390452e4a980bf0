#pragma once

#include <set>
#include <utility>

#include "slash/binarize.hpp"
#include "slash/headscan.hpp"
#include "slash/serialize.hpp"

namespace slash {

struct ProbeResult {
    double f1 = 0.0;
    int edges_recovered = 0;
    int edges_total = 0;
};

inline constexpr double kProbeBlockVote = 0.8; // fraction of an edge block that must survive top-k

/// Average the selected heads, binarize, and vote each serialized edge's
/// 5x5 token block back into node space; F1 against the true adjacency.
inline ProbeResult downstream_probe(const AttentionTensor& t, const TokenizedSerialization& ser,
                                    const SelectionResult& sel) {
    if (sel.selected_heads.empty()) throw DegenerateError("downstream probe needs at least one selected head");
    const TokenAdjacency adj = build_token_adjacency(ser);
    const int span_start = tensor_span_start(t, adj);
    Matrix avg = Matrix::Zero(t.n, t.n);
    for (auto [l, h] : sel.selected_heads) avg += t.map(l, h);
    avg /= static_cast<double>(sel.selected_heads.size());
    const BinaryMask b = topk_binarize(avg, adj, span_start);

    std::set<std::pair<int, int>> truth;
    for (const Edge& e : ser.graph.edges) truth.insert(std::minmax(e.src, e.dst));
    std::set<std::pair<int, int>> predicted;
    const int num_edges = static_cast<int>(ser.graph.edges.size());
    for (int e = 0; e < num_edges; ++e) {
        const int base = 5 * e;
        int ones = 0;
        for (int i = base; i < base + 5; ++i) {
            for (int j = base; j <= i; ++j) ones += b(i, j) ? 1 : 0;
        }
        if (ones >= static_cast<int>(kProbeBlockVote * 15.0)) {
            const Edge& ed = ser.graph.edges[static_cast<std::size_t>(e)];
            predicted.insert(std::minmax(ed.src, ed.dst));
        }
    }
    ProbeResult r;
    r.edges_total = static_cast<int>(truth.size());
    int tp = 0;
    for (const auto& p : predicted) tp += truth.count(p) ? 1 : 0;
    r.edges_recovered = tp;
    if (!predicted.empty() && !truth.empty()) {
        const double precision = static_cast<double>(tp) / static_cast<double>(predicted.size());
        const double recall = static_cast<double>(tp) / static_cast<double>(truth.size());
        if (precision + recall > 0.0) r.f1 = 2.0 * precision * recall / (precision + recall);
    }
    return r;
}

} // namespace slash
