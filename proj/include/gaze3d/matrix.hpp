#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gaze3d {

// Dense row-major matrix of doubles. Feature matrices are (n_samples x n_features).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * cols, cols};
    }
    std::span<double> row(std::size_t i) {
        return {data.data() + i * cols, cols};
    }

    void push_row(std::span<const double> r) {
        data.insert(data.end(), r.begin(), r.end());
        ++rows;
    }
};

}  // namespace gaze3d
