#pragma once

#include <vector>

#include "slash/adjacency.hpp"
#include "slash/attention.hpp"

namespace slash {

struct BudgetRow {
    int row = 0; // global token row
    double sink_fraction = 0.0;
    double structural_fraction = 0.0;
    double noise_fraction = 0.0;
};

/// Split of each row's attention mass into sink (column 0), structural
/// aggregation over preceding same-source neighbors, and the residual.
/// The diagonal term belongs to the residual: the structural index set is
/// strictly below the diagonal.
struct BudgetBreakdown {
    double sink_fraction = 0.0;
    double structural_fraction = 0.0;
    double noise_fraction = 0.0;
    std::vector<BudgetRow> per_row;
};

/// span_start maps adjacency-local positions onto tensor columns; the sink is
/// always the global column 0.
inline BudgetBreakdown budget(const Matrix& map, const TokenAdjacency& adj, int span_start = 0) {
    const int n_map = static_cast<int>(map.rows());
    if (map.rows() != map.cols()) throw DimensionError("attention map must be square");
    if (span_start < 0 || span_start + adj.n > n_map) {
        throw DimensionError("adjacency span does not fit inside the attention map");
    }
    BudgetBreakdown out;
    for (int li = 0; li < adj.n; ++li) {
        const int gi = span_start + li;
        if (gi == 0) continue; // the sink row has no non-sink mass to split
        BudgetRow r;
        r.row = gi;
        r.sink_fraction = map(gi, 0);
        for (int lj = 1; lj < li; ++lj) {
            if (adj.mask(li, lj)) r.structural_fraction += map(gi, span_start + lj);
        }
        for (int gj = 1; gj <= gi; ++gj) {
            const int lj = gj - span_start;
            const bool structural = lj >= 1 && lj < li && adj.mask(li, lj);
            if (!structural) r.noise_fraction += map(gi, gj);
        }
        out.per_row.push_back(r);
    }
    if (out.per_row.empty()) throw DegenerateError("no scorable rows inside the span");
    for (const BudgetRow& r : out.per_row) {
        out.sink_fraction += r.sink_fraction;
        out.structural_fraction += r.structural_fraction;
        out.noise_fraction += r.noise_fraction;
    }
    const double m = static_cast<double>(out.per_row.size());
    out.sink_fraction /= m;
    out.structural_fraction /= m;
    out.noise_fraction /= m;
    return out;
}

} // namespace slash
