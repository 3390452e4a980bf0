#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "slash/binarize.hpp"
#include "slash/entropy.hpp"
#include "slash/otsu.hpp"

namespace slash {

struct HeadScore {
    std::uint32_t layer = 0;
    std::uint32_t head = 0;
    double entropy = 0.0;
    double concentration = 0.0;
    double e_in = 1.0;
    double e_out = 0.0;
    bool selected = false;
};

struct SelectionResult {
    std::vector<HeadScore> scores;
    double entropy_threshold = 0.0;
    double concentration_threshold = 0.0;
    std::set<std::pair<std::uint32_t, std::uint32_t>> selected_heads;
    std::set<std::uint32_t> selected_layers;
};

struct SelectionConfig {
    // Any base gives the same selected set; entropies and the fitted
    // threshold rescale together.
    double entropy_log_base = std::numbers::e;
};

inline int tensor_span_start(const AttentionTensor& t, const TokenAdjacency& adj) {
    const std::uint32_t start = t.meta.span_start;
    std::uint32_t end = t.meta.span_end;
    if (start == 0 && end == 0) end = t.n; // no explicit span: the whole sequence
    if (end - start != static_cast<std::uint32_t>(adj.n) || end > t.n) {
        throw DimensionError("tensor span does not match the adjacency size");
    }
    return static_cast<int>(start);
}

/// Two-stage screening: entropy isolates active heads, then concentration of
/// the smoothed top-k mask isolates the structurally aligned ones. Both
/// thresholds are fitted automatically; the second stage sees only heads that
/// passed the first.
inline SelectionResult select_heads(const AttentionTensor& t, const TokenAdjacency& adj,
                                    const SelectionConfig& cfg = {}) {
    const int span_start = tensor_span_start(t, adj);
    const double log_scale = std::log(cfg.entropy_log_base);
    SelectionResult res;
    std::vector<double> entropies;
    entropies.reserve(static_cast<std::size_t>(t.layers) * t.heads);
    for (std::uint32_t l = 0; l < t.layers; ++l) {
        for (std::uint32_t h = 0; h < t.heads; ++h) {
            HeadScore sc;
            sc.layer = l;
            sc.head = h;
            sc.entropy = matrix_entropy(t.map(l, h)) / log_scale;
            entropies.push_back(sc.entropy);
            res.scores.push_back(sc);
        }
    }
    try {
        res.entropy_threshold = otsu_threshold(entropies);
    } catch (const DegenerateError&) {
        throw DegenerateError("no separable head population: entropy scores are indistinguishable");
    }

    std::vector<double> concentrations;
    for (HeadScore& sc : res.scores) {
        if (sc.entropy < res.entropy_threshold) continue; // stays at c = 0, e_in = 1
        const BinaryMask b = topk_binarize(t.map(sc.layer, sc.head), adj, span_start);
        const ConcentrationScore c = concentration_score(morph_close(b), adj);
        sc.concentration = c.c;
        sc.e_in = c.e_in;
        sc.e_out = c.e_out;
        concentrations.push_back(c.c);
    }
    try {
        res.concentration_threshold = otsu_threshold(concentrations);
    } catch (const DegenerateError&) {
        throw DegenerateError("no separable head population: concentration scores are indistinguishable");
    }

    for (HeadScore& sc : res.scores) {
        sc.selected =
            sc.entropy >= res.entropy_threshold && sc.concentration >= res.concentration_threshold;
        if (sc.selected) {
            res.selected_heads.insert({sc.layer, sc.head});
            res.selected_layers.insert(sc.layer);
        }
    }
    return res;
}

inline nlohmann::json selection_to_json(const SelectionResult& res) {
    nlohmann::json heads = nlohmann::json::array();
    for (const HeadScore& sc : res.scores) {
        heads.push_back({{"layer", sc.layer},
                         {"head", sc.head},
                         {"entropy", sc.entropy},
                         {"concentration", sc.concentration},
                         {"selected", sc.selected}});
    }
    nlohmann::json layers = nlohmann::json::array();
    for (std::uint32_t l : res.selected_layers) layers.push_back(l);
    return {{"T_S", res.entropy_threshold},
            {"T_C", res.concentration_threshold},
            {"heads", std::move(heads)},
            {"selected_layers", std::move(layers)}};
}

inline SelectionResult selection_from_json(const nlohmann::json& j) {
    SelectionResult res;
    try {
        res.entropy_threshold = j.at("T_S").get<double>();
        res.concentration_threshold = j.at("T_C").get<double>();
        for (const auto& h : j.at("heads")) {
            HeadScore sc;
            sc.layer = h.at("layer").get<std::uint32_t>();
            sc.head = h.at("head").get<std::uint32_t>();
            sc.entropy = h.at("entropy").get<double>();
            sc.concentration = h.at("concentration").get<double>();
            sc.selected = h.at("selected").get<bool>();
            if (sc.selected) {
                res.selected_heads.insert({sc.layer, sc.head});
                res.selected_layers.insert(sc.layer);
            }
            res.scores.push_back(sc);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("selection JSON schema violation: ") + e.what());
    }
    return res;
}

} // namespace slash
