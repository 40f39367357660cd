// SPDX-License-Identifier: MIT
#pragma once

#include "lext/error.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lext {

/// Dense matrix of doubles with row-major entries.
///
/// Zero rows or columns are permitted: an n x 0 factor matrix is how a
/// rank-0 CP model (the zero tensor) is represented.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_) {
            throw ShapeError("matrix data length " + std::to_string(entries_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
        }
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static DenseMatrix ones(std::size_t rows, std::size_t cols) {
        DenseMatrix m(rows, cols);
        for (auto& x : m.entries_) x = 1.0;
        return m;
    }

    /// Column vector from plain data.
    static DenseMatrix column(std::vector<double> v) {
        const std::size_t n = v.size();
        return DenseMatrix(n, 1, std::move(v));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return entries_.size(); }

    double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

    double at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) {
            throw IndexError("matrix index (" + std::to_string(r + 1) + "," +
                             std::to_string(c + 1) + ") out of range for " +
                             std::to_string(rows_) + "x" + std::to_string(cols_));
        }
        return entries_[r * cols_ + c];
    }

    std::span<const double> data() const { return entries_; }
    std::span<double> data() { return entries_; }

    /// Extracts column c as a plain vector.
    std::vector<double> column_vector(std::size_t c) const {
        if (c >= cols_) {
            throw IndexError("column " + std::to_string(c + 1) + " out of range");
        }
        std::vector<double> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }

    bool operator==(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
    }
    bool operator!=(const DenseMatrix& other) const { return !(*this == other); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matrix product mismatch: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

inline DenseMatrix operator*(double s, const DenseMatrix& m) {
    DenseMatrix out = m;
    for (auto& x : out.data()) x *= s;
    return out;
}

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("matrix sum dimension mismatch");
    }
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("matrix difference dimension mismatch");
    }
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

inline DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(c, r) = m(r, c);
        }
    }
    return out;
}

inline double frobenius_norm(const DenseMatrix& m) {
    double acc = 0.0;
    for (double x : m.data()) acc += x * x;
    return std::sqrt(acc);
}

inline double max_abs(const DenseMatrix& m) {
    double acc = 0.0;
    for (double x : m.data()) acc = std::max(acc, std::fabs(x));
    return acc;
}

/// Scale-free difference metric used throughout the checks:
/// ||a - b||_F / max(||a||_F, 1e-30).
inline double relative_error(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("relative_error: dimension mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        diff += d * d;
    }
    return std::sqrt(diff) / std::max(frobenius_norm(a), 1e-30);
}

inline double relative_error(double a, double b) {
    return std::fabs(a - b) / std::max(std::fabs(a), 1e-30);
}

}  // namespace lext
