#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace noisycheb {

/// Minimal dense row-major matrix for the small-N oracle paths. The fast
/// pipeline never allocates one of these.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {
        if (r < 0 || c < 0) throw std::invalid_argument("Matrix: negative dimension");
    }

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

}  // namespace noisycheb
