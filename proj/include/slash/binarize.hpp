#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "slash/adjacency.hpp"
#include "slash/attention.hpp"

namespace slash {

/// Keep the k largest lower-triangular entries of the span window, where k is
/// the support size of the ground-truth adjacency. Ties at the cut value go to
/// the earlier row-major position.
inline BinaryMask topk_binarize(const Matrix& map, const TokenAdjacency& adj, int span_start = 0) {
    const int n_map = static_cast<int>(map.rows());
    if (map.rows() != map.cols()) throw DimensionError("attention map must be square");
    if (span_start < 0 || span_start + adj.n > n_map) {
        throw DimensionError("adjacency span does not fit inside the attention map");
    }
    const std::size_t k = mask_popcount(adj.mask);
    if (k < 1) throw DegenerateError("ground-truth adjacency has no support");
    std::vector<std::tuple<double, int, int>> cells;
    cells.reserve(static_cast<std::size_t>(adj.n) * (adj.n + 1) / 2);
    for (int i = 0; i < adj.n; ++i) {
        for (int j = 0; j <= i; ++j) {
            cells.emplace_back(map(span_start + i, span_start + j), i, j);
        }
    }
    if (k > cells.size()) throw BoundsError("k exceeds the available lower-triangular positions");
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });
    BinaryMask b = BinaryMask::Zero(adj.n, adj.n);
    for (std::size_t c = 0; c < k; ++c) b(std::get<1>(cells[c]), std::get<2>(cells[c])) = 1;
    return b;
}

namespace detail {

inline BinaryMask dilate3x3(const BinaryMask& b) {
    const int rows = static_cast<int>(b.rows());
    const int cols = static_cast<int>(b.cols());
    BinaryMask out = BinaryMask::Zero(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            std::uint8_t v = 0;
            for (int di = -1; di <= 1 && !v; ++di) {
                for (int dj = -1; dj <= 1 && !v; ++dj) {
                    const int ii = i + di, jj = j + dj;
                    if (ii >= 0 && ii < rows && jj >= 0 && jj < cols) v = b(ii, jj);
                }
            }
            out(i, j) = v;
        }
    }
    return out;
}

inline BinaryMask erode3x3(const BinaryMask& b) {
    const int rows = static_cast<int>(b.rows());
    const int cols = static_cast<int>(b.cols());
    BinaryMask out = BinaryMask::Zero(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            std::uint8_t v = 1;
            // Out-of-bounds neighbors do not count against the requirement,
            // so border structure survives erosion.
            for (int di = -1; di <= 1 && v; ++di) {
                for (int dj = -1; dj <= 1 && v; ++dj) {
                    const int ii = i + di, jj = j + dj;
                    if (ii >= 0 && ii < rows && jj >= 0 && jj < cols && !b(ii, jj)) v = 0;
                }
            }
            out(i, j) = v;
        }
    }
    return out;
}

} // namespace detail

/// Morphological closing with a 3x3 square structuring element: one binary
/// dilation followed by one binary erosion. Connects fragmented regions.
inline BinaryMask morph_close(const BinaryMask& b) {
    return detail::erode3x3(detail::dilate3x3(b));
}

struct ConcentrationScore {
    double c = 0.0;
    double e_in = 0.0;  // mean miss rate over omega_in
    double e_out = 0.0; // mean leakage over omega_out
};

/// c = (1 - e_in) * (1 - e_out); maximal exactly when the smoothed mask fills
/// omega_in and avoids omega_out.
inline ConcentrationScore concentration_score(const BinaryMask& b_smoothed, const TokenAdjacency& adj) {
    if (adj.omega_in.empty() || adj.omega_out.empty()) {
        throw DegenerateError("concentration needs non-empty in and out regions");
    }
    if (b_smoothed.rows() != adj.n || b_smoothed.cols() != adj.n) {
        throw DimensionError("mask shape must match the adjacency");
    }
    ConcentrationScore s;
    for (auto [i, j] : adj.omega_in) s.e_in += b_smoothed(i, j) ? 0.0 : 1.0;
    for (auto [i, j] : adj.omega_out) s.e_out += b_smoothed(i, j) ? 1.0 : 0.0;
    s.e_in /= static_cast<double>(adj.omega_in.size());
    s.e_out /= static_cast<double>(adj.omega_out.size());
    s.c = (1.0 - s.e_in) * (1.0 - s.e_out);
    return s;
}

} // namespace slash
