#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "slash/adjacency.hpp"
#include "slash/graph.hpp"
#include "slash/sharpen.hpp"

namespace slash {

enum class LaplacianVariant { UNNORMALIZED };

/// Unnormalized graph Laplacian L = D - A. Symmetric, zero row sums,
/// non-positive off-diagonal entries.
struct Laplacian {
    Matrix matrix;
    LaplacianVariant variant = LaplacianVariant::UNNORMALIZED;
};

inline Laplacian laplacian(const Graph& g) {
    if (g.directed) throw ParseError("laplacian requires an undirected graph");
    Laplacian lap;
    lap.matrix = Matrix::Zero(g.num_nodes, g.num_nodes);
    // Duplicate edges collapse to simple adjacency; self-loops are rejected.
    for (const Edge& e : g.edges) {
        if (e.src == e.dst) throw ParseError("laplacian requires a simple graph (self-loop found)");
        lap.matrix(e.src, e.dst) = -1.0;
        lap.matrix(e.dst, e.src) = -1.0;
    }
    for (int i = 0; i < g.num_nodes; ++i) {
        double deg = 0.0;
        for (int j = 0; j < g.num_nodes; ++j) deg -= lap.matrix(i, j);
        lap.matrix(i, i) = deg;
    }
    return lap;
}

/// tr(H^T L H): total squared variation of node rows across graph edges.
inline double dirichlet_energy(const Matrix& h, const Laplacian& lap) {
    if (h.rows() != lap.matrix.rows()) throw DimensionError("node count mismatch with Laplacian");
    return (h.transpose() * lap.matrix * h).trace();
}

/// Convex combination of a shared sink value row and per-node topological
/// rows, with a uniform sink weight.
struct NodeRepresentation {
    Matrix h;
    Matrix h_topo;
    Vector v0;
    double lambda = 0.0;
};

inline NodeRepresentation mix_with_sink(const Matrix& h_topo, const Vector& v0, double lambda) {
    if (lambda < 0.0 || lambda >= 1.0) throw BoundsError("lambda must lie in [0, 1)");
    if (v0.size() != h_topo.cols()) throw DimensionError("sink vector length must match representation dim");
    NodeRepresentation rep;
    rep.h_topo = h_topo;
    rep.v0 = v0;
    rep.lambda = lambda;
    rep.h = lambda * Vector::Ones(h_topo.rows()) * v0.transpose() + (1.0 - lambda) * h_topo;
    return rep;
}

struct ContractionCheck {
    double lhs = 0.0;   // ||h_k - h_l||
    double rhs = 0.0;   // (1 - lambda) * ||h_topo_k - h_topo_l||
    double ratio = 1.0; // lhs / rhs, 1 when both vanish
};

inline ContractionCheck verify_contraction(const NodeRepresentation& rep, int k, int l) {
    if (k == l) throw BoundsError("contraction check needs two distinct nodes");
    ContractionCheck c;
    c.lhs = (rep.h.row(k) - rep.h.row(l)).norm();
    c.rhs = (1.0 - rep.lambda) * (rep.h_topo.row(k) - rep.h_topo.row(l)).norm();
    c.ratio = c.rhs == 0.0 ? (c.lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                           : c.lhs / c.rhs;
    return c;
}

struct ExpansionCheck {
    double observed_ratio = 1.0;
    double predicted_rho = 1.0;
};

/// Rebuild the representation with sink weight gamma*lambda and compare the
/// pairwise-distance ratio against the amplification ratio.
inline ExpansionCheck verify_expansion(const NodeRepresentation& rep, double gamma, int k, int l) {
    if (gamma < 0.0 || gamma > 1.0) throw BoundsError("gamma must lie in [0, 1]");
    const double base = (rep.h.row(k) - rep.h.row(l)).norm();
    if (base == 0.0) throw DegenerateError("zero base distance: expansion ratio undefined");
    NodeRepresentation sharpened = mix_with_sink(rep.h_topo, rep.v0, gamma * rep.lambda);
    ExpansionCheck c;
    c.observed_ratio = (sharpened.h.row(k) - sharpened.h.row(l)).norm() / base;
    c.predicted_rho = amplification_ratio(rep.lambda, gamma);
    return c;
}

struct EnergyDecayCheck {
    double e_mixed = 0.0;
    double e_topo = 0.0;
    std::optional<double> factor; // (1 - lambda)^2 when e_topo > 0, else undefined
};

inline EnergyDecayCheck verify_energy_decay(const NodeRepresentation& rep, const Laplacian& lap) {
    EnergyDecayCheck c;
    c.e_mixed = dirichlet_energy(rep.h, lap);
    c.e_topo = dirichlet_energy(rep.h_topo, lap);
    if (c.e_topo > 0.0) c.factor = c.e_mixed / c.e_topo;
    return c;
}

struct SpectralAmplificationCheck {
    double e_sharpened = 0.0;
    double predicted = 0.0; // rho(lambda, gamma)^2 * E(h)
};

inline SpectralAmplificationCheck verify_spectral_amplification(const NodeRepresentation& rep,
                                                                const Laplacian& lap, double gamma) {
    NodeRepresentation sharpened = mix_with_sink(rep.h_topo, rep.v0, gamma * rep.lambda);
    SpectralAmplificationCheck c;
    c.e_sharpened = dirichlet_energy(sharpened.h, lap);
    const double rho = amplification_ratio(rep.lambda, gamma);
    c.predicted = rho * rho * dirichlet_energy(rep.h, lap);
    return c;
}

struct GatStep {
    Matrix h_full;       // exact attention-weighted value sum
    Matrix h_simplified; // sink term plus structural aggregation only
    double residual_norm = 0.0;
};

/// Read one attention application as a causal GAT step and measure how much
/// of the update the sink + structure terms fail to explain.
inline GatStep implicit_gat_step(const Matrix& map, const TokenAdjacency& adj, const Matrix& values,
                                 int span_start = 0) {
    const int n = static_cast<int>(map.rows());
    if (map.rows() != map.cols()) throw DimensionError("attention map must be square");
    if (values.rows() != n) throw DimensionError("value-row count must match the map");
    if (span_start < 0 || span_start + adj.n > n) {
        throw DimensionError("adjacency span does not fit inside the attention map");
    }
    GatStep s;
    s.h_full = map * values;
    s.h_simplified = Matrix::Zero(n, values.cols());
    for (int i = 0; i < n; ++i) {
        s.h_simplified.row(i) = map(i, 0) * values.row(0);
        const int li = i - span_start;
        if (li < 1 || li >= adj.n) continue;
        for (int lj = 1; lj < li; ++lj) {
            if (adj.mask(li, lj)) {
                const int gj = span_start + lj;
                s.h_simplified.row(i) += map(i, gj) * values.row(gj);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        const double denom = s.h_full.row(i).norm();
        if (denom == 0.0) continue;
        const double rel = (s.h_full.row(i) - s.h_simplified.row(i)).norm() / denom;
        if (rel > s.residual_norm) s.residual_norm = rel;
    }
    return s;
}

/// Token index of the first NODE token of each source block: the
/// representative used when node rows are pulled out of token-level data.
inline std::vector<std::pair<int, int>> source_representatives(const TokenizedSerialization& s) {
    std::vector<std::pair<int, int>> reps; // (source node, token index)
    std::vector<bool> seen(static_cast<std::size_t>(s.graph.num_nodes), false);
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        if (t.cls != TokenClass::NODE || t.source_node < 0) continue;
        if (t.text != std::to_string(t.source_node)) continue; // only the source mention
        if (!seen[static_cast<std::size_t>(t.source_node)]) {
            seen[static_cast<std::size_t>(t.source_node)] = true;
            reps.emplace_back(t.source_node, static_cast<int>(i));
        }
    }
    return reps;
}

} // namespace slash
