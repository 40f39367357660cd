// SPDX-License-Identifier: MIT
#pragma once

#include "lext/error.hpp"
#include "lext/shape.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lext {

/// Dense order-N array of doubles stored in lexicographic order: the last
/// index varies fastest in flat storage, matching the suggested
/// vectorization, so vec() is a plain reinterpretation of the data.
class DenseTensor {
public:
    explicit DenseTensor(Shape shape)
        : shape_(std::move(shape)), data_(shape_.numel(), 0.0) {}

    DenseTensor(Shape shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != shape_.numel()) {
            throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                             " does not match shape " + to_string(shape_) + " (" +
                             std::to_string(shape_.numel()) + " elements)");
        }
    }

    const Shape& shape() const { return shape_; }
    std::size_t order() const { return shape_.order(); }
    std::size_t numel() const { return shape_.numel(); }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    double at(const MultiIndex& m) const { return data_[linear_index(shape_, m)]; }
    double& at(const MultiIndex& m) { return data_[linear_index(shape_, m)]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }
    std::vector<double> take_data() && { return std::move(data_); }

    bool operator==(const DenseTensor& other) const {
        return shape_ == other.shape_ && data_ == other.data_;
    }
    bool operator!=(const DenseTensor& other) const { return !(*this == other); }

private:
    Shape shape_;
    std::vector<double> data_;
};

inline DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) {
        throw ShapeError("tensor sum shape mismatch: " + to_string(a.shape()) + " vs " +
                         to_string(b.shape()));
    }
    DenseTensor out = a;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] += b[i];
    return out;
}

inline DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) {
        throw ShapeError("tensor difference shape mismatch: " + to_string(a.shape()) +
                         " vs " + to_string(b.shape()));
    }
    DenseTensor out = a;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] -= b[i];
    return out;
}

inline DenseTensor operator*(double s, const DenseTensor& t) {
    DenseTensor out = t;
    for (auto& x : out.data()) x *= s;
    return out;
}

inline double frobenius_norm(const DenseTensor& t) {
    double acc = 0.0;
    for (double x : t.data()) acc += x * x;
    return std::sqrt(acc);
}

inline double relative_error(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) {
        throw ShapeError("relative_error: shape mismatch " + to_string(a.shape()) + " vs " +
                         to_string(b.shape()));
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        const double d = a[i] - b[i];
        diff += d * d;
    }
    return std::sqrt(diff) / std::max(frobenius_norm(a), 1e-30);
}

}  // namespace lext
