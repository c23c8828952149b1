#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "tfad/rng.hpp"

namespace tfad {

// Dense row-major matrix of 64-bit floats. All model math runs through this.
// Zero-width matrices are legal (they show up when a factor mask empties the
// scorer input); matmul treats the empty inner dimension as a zero product.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows * cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> vals);
    static Matrix identity(std::size_t n);
    static Matrix row_vector(const std::vector<double>& v);
    static Matrix column_vector(const std::vector<double>& v);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }

    std::vector<double> row_as_vector(std::size_t i) const;
};

// Standard product; throws std::invalid_argument naming both shapes on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

// a + b / a - b, shape-checked.
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);

void scale_inplace(Matrix& a, double s);
void add_inplace(Matrix& a, const Matrix& b);

bool all_finite(const Matrix& a);

// Glorot-uniform init: entries in [-s, s] with s = sqrt(6 / (rows + cols)),
// drawn row-major so the result is a pure function of the rng state.
// Zero dimensions are rejected.
Matrix init_glorot(std::size_t rows, std::size_t cols, Rng& rng);

// Debug-build helper: asserts every entry is finite.
void debug_check_finite(const Matrix& a, const char* what);

}  // namespace tfad
