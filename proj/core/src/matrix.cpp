#include "tfad/matrix.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tfad {

namespace {

std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

}  // namespace

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> vals) {
    Matrix m;
    m.rows = vals.size();
    m.cols = vals.size() ? vals.begin()->size() : 0;
    m.data.reserve(m.rows * m.cols);
    for (const auto& r : vals) {
        if (r.size() != m.cols)
            throw std::invalid_argument("Matrix::from_rows: ragged initializer");
        m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::row_vector(const std::vector<double>& v) {
    Matrix m(1, v.size());
    m.data = v;
    return m;
}

Matrix Matrix::column_vector(const std::vector<double>& v) {
    Matrix m(v.size(), 1);
    m.data = v;
    return m;
}

std::vector<double> Matrix::row_as_vector(std::size_t i) const {
    return std::vector<double>(row(i), row(i) + cols);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw std::invalid_argument("matmul: inner dimensions disagree, " + shape_str(a) +
                                    " vs " + shape_str(b));
    Matrix c(a.rows, b.cols, 0.0);
    // i-k-j order keeps the inner loop sequential over both b and c.
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row(k);
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    debug_check_finite(c, "matmul result");
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("add: shape mismatch, " + shape_str(a) + " vs " +
                                    shape_str(b));
    Matrix c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
    return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("sub: shape mismatch, " + shape_str(a) + " vs " +
                                    shape_str(b));
    Matrix c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] -= b.data[i];
    return c;
}

void scale_inplace(Matrix& a, double s) {
    for (double& x : a.data) x *= s;
}

void add_inplace(Matrix& a, const Matrix& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("add_inplace: shape mismatch, " + shape_str(a) + " vs " +
                                    shape_str(b));
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

bool all_finite(const Matrix& a) {
    for (double x : a.data)
        if (!std::isfinite(x)) return false;
    return true;
}

Matrix init_glorot(std::size_t rows, std::size_t cols, Rng& rng) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("init_glorot: zero dimension (" + std::to_string(rows) +
                                    "x" + std::to_string(cols) + ")");
    const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (double& x : m.data) x = rng.uniform(-s, s);
    return m;
}

void debug_check_finite(const Matrix& a, const char* what) {
#ifndef NDEBUG
    assert(all_finite(a) && what);
#else
    (void)a;
    (void)what;
#endif
}

}  // namespace tfad
