#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "slash/common.hpp"

namespace slash {

inline constexpr int kOtsuBins = 256;

/// Otsu's threshold over 256 equal-width bins spanning the observed range.
/// Returns the bin edge maximizing between-class variance; on ties the lowest
/// qualifying edge wins. Needs at least two distinct values.
inline double otsu_threshold(const std::vector<double>& values) {
    if (values.size() < 2) throw DegenerateError("otsu needs at least two values");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) throw DegenerateError("otsu needs at least two distinct values");
    const double width = (hi - lo) / kOtsuBins;

    std::array<double, kOtsuBins> count{};
    for (double v : values) {
        int bin = static_cast<int>((v - lo) / (hi - lo) * kOtsuBins);
        bin = std::clamp(bin, 0, kOtsuBins - 1);
        count[static_cast<std::size_t>(bin)] += 1.0;
    }

    double total = static_cast<double>(values.size());
    double total_mean = 0.0;
    for (int b = 0; b < kOtsuBins; ++b) total_mean += count[static_cast<std::size_t>(b)] * b;
    total_mean /= total;

    double best_var = -1.0;
    int best_cut = 0; // classes are bins [0, cut] vs (cut, 255]
    double w0 = 0.0, sum0 = 0.0;
    for (int cut = 0; cut < kOtsuBins - 1; ++cut) {
        w0 += count[static_cast<std::size_t>(cut)];
        sum0 += count[static_cast<std::size_t>(cut)] * cut;
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (total_mean * total - sum0) / w1;
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_cut = cut;
        }
    }
    return lo + width * (best_cut + 1);
}

} // namespace slash
