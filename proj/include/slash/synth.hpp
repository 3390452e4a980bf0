#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "slash/adjacency.hpp"
#include "slash/attention.hpp"
#include "slash/graph.hpp"
#include "slash/serialize.hpp"

namespace slash {

using HeadSet = std::set<std::pair<std::uint32_t, std::uint32_t>>;

/// Seeded synthetic tensor: planted heads carry sink mass lambda_sink and put
/// the rest of their budget on the ground-truth support; every other head is
/// one of three distractor archetypes with no relation to the graph.
struct GeneratorSpec {
    std::uint32_t layers = 4;
    std::uint32_t heads = 32;
    Graph graph;
    HeadSet planted;
    double lambda_sink = 0.6;
    double alignment = 0.85;
    double noise_fraction = 0.1;
    double temperature = 1.0;
    std::uint64_t seed = 0;
};

inline HeadSet planted_truth(const GeneratorSpec& spec) { return spec.planted; }

namespace detail {

// Sink enforcement: the non-sink weights are fixed, and the sink's
// unnormalized weight is bisected until the softmax row hits the target.
inline double bisect_sink_weight(double target, double non_sink_total) {
    if (target <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi / (hi + non_sink_total) < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double achieved = mid / (mid + non_sink_total);
        if (std::abs(achieved - target) < 1e-14) return mid;
        (achieved < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline void normalize_row(Matrix& a, int i, const std::vector<double>& w) {
    double sum = 0.0;
    for (int j = 0; j <= i; ++j) sum += w[static_cast<std::size_t>(j)];
    for (int j = 0; j <= i; ++j) a(i, j) = w[static_cast<std::size_t>(j)] / sum;
}

inline Matrix planted_head(std::mt19937_64& rng, const TokenAdjacency& adj, const GeneratorSpec& spec) {
    const int n = adj.n;
    Matrix a = Matrix::Zero(n, n);
    a(0, 0) = 1.0;
    std::normal_distribution<double> logit(0.0, 1.0);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    const double on_support_share = spec.alignment * (1.0 - spec.noise_fraction);
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i) {
        double lam = spec.lambda_sink;
        if (lam > 0.0) lam = std::clamp(lam + jitter(rng), 0.0, 0.995);
        double support_total = 0.0, off_total = 0.0;
        for (int j = 1; j <= i; ++j) {
            const double e = std::exp(logit(rng) / spec.temperature);
            w[static_cast<std::size_t>(j)] = e;
            (adj.mask(i, j) ? support_total : off_total) += e;
        }
        // Offset the support logits so the support/off split is exact; rows
        // with a single class keep all non-sink mass there.
        if (support_total > 0.0 && off_total > 0.0) {
            if (on_support_share >= 1.0) {
                for (int j = 1; j <= i; ++j) {
                    if (!adj.mask(i, j)) w[static_cast<std::size_t>(j)] = 0.0;
                }
            } else {
                const double boost =
                    on_support_share / (1.0 - on_support_share) * off_total / support_total;
                for (int j = 1; j <= i; ++j) {
                    if (adj.mask(i, j)) w[static_cast<std::size_t>(j)] *= boost;
                }
            }
        }
        double denom = 0.0;
        for (int j = 1; j <= i; ++j) denom += w[static_cast<std::size_t>(j)];
        w[0] = bisect_sink_weight(lam, denom);
        normalize_row(a, i, w);
    }
    return a;
}

inline Matrix sink_head(std::mt19937_64& rng, int n, double temperature) {
    Matrix a = Matrix::Zero(n, n);
    a(0, 0) = 1.0;
    std::normal_distribution<double> logit(0.0, 1.0);
    std::uniform_real_distribution<double> lam_draw(0.92, 0.99);
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i) {
        double total = 0.0;
        for (int j = 1; j <= i; ++j) {
            const double e = std::exp(logit(rng) / temperature);
            w[static_cast<std::size_t>(j)] = e;
            total += e;
        }
        w[0] = bisect_sink_weight(lam_draw(rng), total);
        normalize_row(a, i, w);
    }
    return a;
}

// Distractors carry realistic sink mass too; what separates them from
// planted heads is where the non-sink remainder lands.
inline Matrix window_head(std::mt19937_64& rng, int n, double temperature) {
    Matrix a = Matrix::Zero(n, n);
    a(0, 0) = 1.0;
    std::normal_distribution<double> logit(0.0, 1.0);
    std::uniform_real_distribution<double> lam_draw(0.45, 0.75);
    const int window = 2 + static_cast<int>(rng() % 2); // 2 or 3 trailing positions
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i) {
        const int w_lo = std::max(1, i - window + 1);
        double in_total = 0.0, bg_total = 0.0;
        for (int j = 1; j <= i; ++j) {
            const double e = std::exp(logit(rng) / temperature);
            w[static_cast<std::size_t>(j)] = e;
            (j >= w_lo ? in_total : bg_total) += e;
        }
        // 75% of the non-sink mass on the trailing window, diffuse rest.
        if (bg_total > 0.0) {
            const double boost = 0.75 / 0.25 * bg_total / in_total;
            for (int j = w_lo; j <= i; ++j) w[static_cast<std::size_t>(j)] *= boost;
        }
        double total = 0.0;
        for (int j = 1; j <= i; ++j) total += w[static_cast<std::size_t>(j)];
        w[0] = bisect_sink_weight(lam_draw(rng), total);
        normalize_row(a, i, w);
    }
    return a;
}

inline Matrix diffuse_head(std::mt19937_64& rng, int n, double temperature) {
    Matrix a = Matrix::Zero(n, n);
    a(0, 0) = 1.0;
    std::normal_distribution<double> logit(0.0, 1.0);
    std::uniform_real_distribution<double> lam_draw(0.45, 0.75);
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i) {
        double total = 0.0;
        for (int j = 1; j <= i; ++j) {
            const double e = std::exp(logit(rng) / temperature);
            w[static_cast<std::size_t>(j)] = e;
            total += e;
        }
        w[0] = bisect_sink_weight(lam_draw(rng), total);
        normalize_row(a, i, w);
    }
    return a;
}

} // namespace detail

inline void validate_generator_spec(const GeneratorSpec& spec) {
    if (spec.layers == 0 || spec.heads == 0) throw BoundsError("generator needs at least one head");
    if (spec.graph.edges.empty()) throw BoundsError("generator needs a non-empty graph");
    if (spec.lambda_sink < 0.0 || spec.lambda_sink >= 1.0) throw BoundsError("lambda_sink must lie in [0, 1)");
    if (spec.alignment < 0.0 || spec.alignment > 1.0) throw BoundsError("alignment must lie in [0, 1]");
    if (spec.noise_fraction < 0.0 || spec.noise_fraction > 1.0) {
        throw BoundsError("noise_fraction must lie in [0, 1]");
    }
    if (spec.temperature <= 0.0) throw BoundsError("temperature must be positive");
    for (auto [l, h] : spec.planted) {
        if (l >= spec.layers || h >= spec.heads) {
            throw BoundsError("planted head (" + std::to_string(l) + ", " + std::to_string(h) +
                              ") out of bounds");
        }
    }
}

inline AttentionTensor generate(const GeneratorSpec& spec) {
    validate_generator_spec(spec);
    const TokenizedSerialization ser = serialize(aggregate_edges(spec.graph));
    const TokenAdjacency adj = build_token_adjacency(ser);
    AttentionTensor t;
    t.layers = spec.layers;
    t.heads = spec.heads;
    t.n = static_cast<std::uint32_t>(adj.n);
    t.meta.span_start = 0;
    t.meta.span_end = t.n;
    t.meta.label = "synth";
    t.maps.resize(static_cast<std::size_t>(spec.layers) * spec.heads);
    for (std::uint32_t l = 0; l < spec.layers; ++l) {
        for (std::uint32_t h = 0; h < spec.heads; ++h) {
            auto rng = seeded_rng(spec.seed, l, h);
            if (spec.planted.count({l, h})) {
                t.map(l, h) = detail::planted_head(rng, adj, spec);
                continue;
            }
            const double archetype = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            if (archetype < 0.55) {
                t.map(l, h) = detail::sink_head(rng, adj.n, spec.temperature);
            } else if (archetype < 0.80) {
                t.map(l, h) = detail::window_head(rng, adj.n, spec.temperature);
            } else {
                t.map(l, h) = detail::diffuse_head(rng, adj.n, spec.temperature);
            }
        }
    }
    return t;
}

inline nlohmann::json generator_spec_to_json(const GeneratorSpec& spec) {
    nlohmann::json planted = nlohmann::json::array();
    for (auto [l, h] : spec.planted) planted.push_back({l, h});
    return {{"layers", spec.layers},       {"heads", spec.heads},
            {"graph", graph_to_json(spec.graph)}, {"planted", std::move(planted)},
            {"lambda_sink", spec.lambda_sink},    {"alignment", spec.alignment},
            {"noise_fraction", spec.noise_fraction}, {"temperature", spec.temperature},
            {"seed", spec.seed}};
}

inline GeneratorSpec generator_spec_from_json(const nlohmann::json& j) {
    GeneratorSpec spec;
    try {
        spec.layers = j.at("layers").get<std::uint32_t>();
        spec.heads = j.at("heads").get<std::uint32_t>();
        spec.graph = graph_from_json(j.at("graph"));
        for (const auto& p : j.at("planted")) {
            spec.planted.insert({p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()});
        }
        spec.lambda_sink = j.at("lambda_sink").get<double>();
        spec.alignment = j.at("alignment").get<double>();
        spec.noise_fraction = j.at("noise_fraction").get<double>();
        spec.temperature = j.at("temperature").get<double>();
        spec.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("generator spec JSON schema violation: ") + e.what());
    }
    validate_generator_spec(spec);
    return spec;
}

/// Default calibration graph: six sources with two edges each. The two-edge
/// groups put the second edge of every group deep enough that sink
/// displacement visibly starves its token block in the top-k mask.
inline Graph default_generator_graph() {
    Graph g;
    g.num_nodes = 9;
    g.edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {2, 5},
               {3, 5}, {3, 6}, {4, 7}, {4, 8}, {5, 7}, {5, 8}};
    return g;
}

inline GeneratorSpec default_generator_spec(std::uint64_t seed = 0) {
    GeneratorSpec spec;
    spec.graph = default_generator_graph();
    spec.planted = {{1, 3}, {2, 11}, {2, 21}};
    spec.temperature = 8.0; // mild within-class jitter keeps block mass even
    spec.seed = seed;
    return spec;
}

} // namespace slash
