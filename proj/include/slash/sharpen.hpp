#pragma once

#include <cstdint>
#include <set>
#include <utility>

#include "slash/attention.hpp"

namespace slash {

enum class Granularity { HEAD, LAYER };

enum class DegeneratePolicy { SKIP_ROW };

struct SharpenConfig {
    double gamma = 1.0;
    Granularity granularity = Granularity::LAYER;
    std::set<std::pair<std::uint32_t, std::uint32_t>> head_targets; // used at HEAD granularity
    std::set<std::uint32_t> layer_targets;                          // used at LAYER granularity
    DegeneratePolicy degenerate_policy = DegeneratePolicy::SKIP_ROW;
};

struct SharpenStats {
    std::size_t rows_sharpened = 0;
    std::size_t rows_skipped = 0; // row 0 plus rows whose sink already holds all mass
};

inline constexpr double kDegenerateSinkEps = 1e-12;

/// Scale the sink entry by gamma and redistribute the recovered mass
/// proportionally over the non-sink entries. Row 0 and rows whose sink
/// carries all mass are returned unchanged and counted.
inline Matrix sharpen_map(const Matrix& a, double gamma, SharpenStats* stats = nullptr) {
    if (gamma < 0.0 || gamma > 1.0) throw BoundsError("gamma must lie in [0, 1]");
    Matrix out = a;
    SharpenStats local;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double sink = a(i, 0);
        if (i == 0 || sink >= 1.0 - kDegenerateSinkEps) {
            ++local.rows_skipped;
            continue;
        }
        const double scale = 1.0 + (1.0 - gamma) * sink / (1.0 - sink);
        out(i, 0) = gamma * sink;
        for (Eigen::Index j = 1; j <= i; ++j) out(i, j) = a(i, j) * scale;
        ++local.rows_sharpened;
    }
    if (stats) {
        stats->rows_sharpened += local.rows_sharpened;
        stats->rows_skipped += local.rows_skipped;
    }
    return out;
}

inline bool is_target(const SharpenConfig& cfg, std::uint32_t l, std::uint32_t h) {
    if (cfg.granularity == Granularity::LAYER) return cfg.layer_targets.count(l) != 0;
    return cfg.head_targets.count({l, h}) != 0;
}

/// Apply sharpen_map to every targeted head; untouched heads stay bit-identical.
inline AttentionTensor sharpen_tensor(const AttentionTensor& t, const SharpenConfig& cfg,
                                      SharpenStats* stats = nullptr) {
    if (cfg.granularity == Granularity::LAYER) {
        if (cfg.layer_targets.empty()) throw BoundsError("no layers targeted");
        for (std::uint32_t l : cfg.layer_targets) {
            if (l >= t.layers) throw BoundsError("layer target " + std::to_string(l) + " out of bounds");
        }
    } else {
        if (cfg.head_targets.empty()) throw BoundsError("no heads targeted");
        for (auto [l, h] : cfg.head_targets) {
            if (l >= t.layers || h >= t.heads) {
                throw BoundsError("head target (" + std::to_string(l) + ", " + std::to_string(h) +
                                  ") out of bounds");
            }
        }
    }
    AttentionTensor out = t;
    for (std::uint32_t l = 0; l < t.layers; ++l) {
        for (std::uint32_t h = 0; h < t.heads; ++h) {
            if (is_target(cfg, l, h)) out.map(l, h) = sharpen_map(t.map(l, h), cfg.gamma, stats);
        }
    }
    return out;
}

/// Pairwise-distance scaling induced by sharpening: (1 - gamma*lambda) / (1 - lambda).
inline double amplification_ratio(double lambda, double gamma) {
    if (lambda < 0.0 || lambda >= 1.0) throw BoundsError("lambda must lie in [0, 1)");
    if (gamma < 0.0 || gamma > 1.0) throw BoundsError("gamma must lie in [0, 1]");
    return (1.0 - gamma * lambda) / (1.0 - lambda);
}

} // namespace slash
