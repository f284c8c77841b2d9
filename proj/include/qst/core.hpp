#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qst {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using BigInt = boost::multiprecision::cpp_int;

using VertexId = int;
using EdgeId = int;

// Row-major nonnegative integer matrix.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> data;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0) {}

    int& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    int operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    bool operator==(const IntMatrix&) const = default;
    auto operator<=>(const IntMatrix& o) const {
        if (auto c = rows <=> o.rows; c != 0) return c;
        if (auto c = cols <=> o.cols; c != 0) return c;
        return data <=> o.data;
    }
};

// Invalid input or violated precondition.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured enumeration or size limit was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.3.0";

} // namespace qst
