#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace slash {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Square 0/1 mask stored densely; morphology and binarization work on these.
using BinaryMask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or out-of-contract input data (bad JSON, bad header, bad ids).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Shape disagreement between two operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Index or parameter outside its documented range.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// Input that carries no usable signal (all-equal scores, all-zero matrix).
class DegenerateError : public Error {
public:
    using Error::Error;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream seeded from a root seed plus mix-in indices, so per-head draws are
/// independent of enumeration order.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = splitmix64(seed ^ splitmix64(a ^ splitmix64(b + 0x5851f42d4c957f2dULL)));
    return std::mt19937_64(s);
}

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace slash
