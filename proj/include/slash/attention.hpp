#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slash/common.hpp"

namespace slash {

struct TensorMeta {
    std::uint32_t span_start = 0; // [span_start, span_end): edge-description token window
    std::uint32_t span_end = 0;
    std::string label;
};

/// Per-(layer, head) row-stochastic lower-triangular attention maps.
struct AttentionTensor {
    std::uint32_t layers = 0;
    std::uint32_t heads = 0;
    std::uint32_t n = 0;
    std::vector<Matrix> maps; // layer-major, head within layer
    TensorMeta meta;

    Matrix& map(std::uint32_t l, std::uint32_t h) { return maps[static_cast<std::size_t>(l) * heads + h]; }
    const Matrix& map(std::uint32_t l, std::uint32_t h) const {
        return maps[static_cast<std::size_t>(l) * heads + h];
    }
};

enum class Violation { NOT_CAUSAL, ROW_SUM, ENTRY_RANGE, BAD_SHAPE };

inline const char* violation_name(Violation v) {
    switch (v) {
        case Violation::NOT_CAUSAL: return "not_causal";
        case Violation::ROW_SUM: return "row_sum";
        case Violation::ENTRY_RANGE: return "entry_range";
        case Violation::BAD_SHAPE: return "bad_shape";
    }
    return "?";
}

struct ValidationIssue {
    Violation kind = Violation::ROW_SUM;
    std::uint32_t layer = 0;
    std::uint32_t head = 0;
    int row = -1;
    double detail = 0.0;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool clean() const { return issues.empty(); }
};

inline constexpr double kRowSumTolerance = 1e-9;

/// Check every invariant and report each violation with coordinates.
inline ValidationReport validate_tensor(const AttentionTensor& t) {
    ValidationReport rep;
    const auto n = static_cast<Eigen::Index>(t.n);
    for (std::uint32_t l = 0; l < t.layers; ++l) {
        for (std::uint32_t h = 0; h < t.heads; ++h) {
            const Matrix& a = t.map(l, h);
            if (a.rows() != n || a.cols() != n) {
                rep.issues.push_back({Violation::BAD_SHAPE, l, h, -1, static_cast<double>(a.rows())});
                continue;
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                double sum = 0.0;
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double v = a(i, j);
                    if (j > i && v != 0.0) {
                        rep.issues.push_back({Violation::NOT_CAUSAL, l, h, static_cast<int>(i), v});
                    }
                    if (v < 0.0 || v > 1.0) {
                        rep.issues.push_back({Violation::ENTRY_RANGE, l, h, static_cast<int>(i), v});
                    }
                    if (j <= i) sum += v;
                }
                if (std::abs(sum - 1.0) > kRowSumTolerance) {
                    rep.issues.push_back({Violation::ROW_SUM, l, h, static_cast<int>(i), sum});
                }
            }
        }
    }
    return rep;
}

} // namespace slash
