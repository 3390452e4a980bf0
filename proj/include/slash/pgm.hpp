#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "slash/common.hpp"

namespace slash {

/// P5 binary PGM, 8-bit, max-normalized per image.
inline void write_pgm(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    const double peak = m.size() > 0 ? m.maxCoeff() : 0.0;
    out << "P5\n" << m.cols() << " " << m.rows() << "\n255\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = peak > 0.0 ? m(i, j) / peak : 0.0;
            const int g = std::clamp(static_cast<int>(v * 255.0 + 0.5), 0, 255);
            out.put(static_cast<char>(g));
        }
    }
    if (!out) throw Error("PGM write failed: " + path.string());
}

inline void write_pgm(const std::filesystem::path& path, const BinaryMask& m) {
    const Matrix as_double = m.cast<double>();
    write_pgm(path, as_double);
}

/// Three-level overlay: mid gray where only one mask fires, white where both.
inline Matrix overlay(const BinaryMask& a, const BinaryMask& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("overlay shape mismatch");
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out(i, j) = a(i, j) && b(i, j) ? 1.0 : (a(i, j) || b(i, j) ? 0.5 : 0.0);
        }
    }
    return out;
}

} // namespace slash
