#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "slash/serialize.hpp"

namespace slash {

using PositionList = std::vector<std::pair<int, int>>;

/// Binary causal matrix over token positions: mask[i][j] = 1 iff j <= i and
/// tokens i, j belong to edge descriptions sharing a source node. Scoring
/// regions partition the lower triangle with column 0 excluded:
/// omega_in is the mask support at j >= 1 (diagonal included), omega_out is
/// every other lower-triangular position with j >= 1.
struct TokenAdjacency {
    int n = 0;
    BinaryMask mask;
    PositionList omega_in;
    PositionList omega_out;
};

inline TokenAdjacency build_token_adjacency(const TokenizedSerialization& s) {
    if (s.tokens.empty()) throw DegenerateError("cannot build adjacency over an empty serialization");
    const int n = static_cast<int>(s.tokens.size());
    TokenAdjacency adj;
    adj.n = n;
    adj.mask = BinaryMask::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int si = s.tokens[static_cast<std::size_t>(i)].source_node;
        if (si < 0) continue;
        for (int j = 0; j <= i; ++j) {
            const int sj = s.tokens[static_cast<std::size_t>(j)].source_node;
            if (sj == si) adj.mask(i, j) = 1;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 1; j <= i; ++j) {
            if (adj.mask(i, j)) {
                adj.omega_in.emplace_back(i, j);
            } else {
                adj.omega_out.emplace_back(i, j);
            }
        }
    }
    return adj;
}

inline std::size_t mask_popcount(const BinaryMask& m) {
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) k += m(i, j) ? 1u : 0u;
    return k;
}

inline nlohmann::json adjacency_regions_to_json(const TokenAdjacency& adj) {
    auto pack = [](const PositionList& v) {
        nlohmann::json a = nlohmann::json::array();
        for (auto [i, j] : v) a.push_back({i, j});
        return a;
    };
    return {{"n", adj.n}, {"omega_in", pack(adj.omega_in)}, {"omega_out", pack(adj.omega_out)}};
}

} // namespace slash
