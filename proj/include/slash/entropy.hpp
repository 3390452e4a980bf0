#pragma once

#include <cmath>

#include <Eigen/SVD>

#include "slash/common.hpp"

namespace slash {

/// Shannon entropy (nats) of the normalized squared singular values of the
/// raw causal map. Ranges over [0, ln n]; high values mark complex patterns.
inline double matrix_entropy(const Matrix& map) {
    const double fro2 = map.squaredNorm();
    if (fro2 == 0.0) throw DegenerateError("matrix entropy undefined for the all-zero matrix");
    Eigen::BDCSVD<Matrix> svd(map);
    double h = 0.0;
    for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
        const double s = svd.singularValues()(j);
        const double p = s * s / fro2;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

} // namespace slash
