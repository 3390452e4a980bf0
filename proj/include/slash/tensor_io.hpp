#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "slash/attention.hpp"

namespace slash {

// SLSH container: magic "SLSH", version u32 = 1, then L, H, n, span_start,
// span_end as u32, then L*H*n*n float64 payload. All little-endian, row-major,
// head-major within layer. Upper-triangular entries are stored as 0.0.

static_assert(std::endian::native == std::endian::little, "SLSH I/O assumes a little-endian host");

inline constexpr std::uint32_t kTensorFormatVersion = 1;

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw ParseError("truncated tensor header");
    return v;
}

} // namespace detail

inline void write_tensor(std::ostream& out, const AttentionTensor& t) {
    out.write("SLSH", 4);
    detail::put_u32(out, kTensorFormatVersion);
    detail::put_u32(out, t.layers);
    detail::put_u32(out, t.heads);
    detail::put_u32(out, t.n);
    detail::put_u32(out, t.meta.span_start);
    detail::put_u32(out, t.meta.span_end);
    std::vector<double> row(t.n);
    for (const Matrix& m : t.maps) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size() * sizeof(double)));
        }
    }
    if (!out) throw Error("tensor write failed");
}

inline void write_tensor_file(const std::filesystem::path& path, const AttentionTensor& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    write_tensor(out, t);
}

inline AttentionTensor read_tensor(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SLSH", 4) != 0) throw ParseError("bad magic: not an SLSH tensor");
    const std::uint32_t version = detail::get_u32(in);
    if (version != kTensorFormatVersion) {
        throw ParseError("unsupported tensor format version " + std::to_string(version));
    }
    AttentionTensor t;
    t.layers = detail::get_u32(in);
    t.heads = detail::get_u32(in);
    t.n = detail::get_u32(in);
    t.meta.span_start = detail::get_u32(in);
    t.meta.span_end = detail::get_u32(in);
    const std::size_t count = static_cast<std::size_t>(t.layers) * t.heads;
    t.maps.resize(count);
    std::vector<double> row(t.n);
    for (std::size_t m = 0; m < count; ++m) {
        Matrix& a = t.maps[m];
        a.resize(t.n, t.n);
        for (std::uint32_t i = 0; i < t.n; ++i) {
            in.read(reinterpret_cast<char*>(row.data()),
                    static_cast<std::streamsize>(row.size() * sizeof(double)));
            if (!in) throw ParseError("truncated tensor payload");
            for (std::uint32_t j = 0; j < t.n; ++j) a(i, j) = row[j];
        }
    }
    return t;
}

inline AttentionTensor read_tensor_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path.string());
    return read_tensor(in);
}

/// One CSV file per (layer, head): n rows by n columns.
inline void export_tensor_csv(const std::filesystem::path& dir, const AttentionTensor& t) {
    std::filesystem::create_directories(dir);
    for (std::uint32_t l = 0; l < t.layers; ++l) {
        for (std::uint32_t h = 0; h < t.heads; ++h) {
            std::ofstream out(dir / ("l" + std::to_string(l) + "h" + std::to_string(h) + ".csv"));
            if (!out) throw Error("cannot write CSV under " + dir.string());
            out.precision(17);
            const Matrix& a = t.map(l, h);
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                for (Eigen::Index j = 0; j < a.cols(); ++j) {
                    if (j) out << ',';
                    out << a(i, j);
                }
                out << '\n';
            }
        }
    }
}

} // namespace slash
