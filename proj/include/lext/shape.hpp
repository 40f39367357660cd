// SPDX-License-Identifier: MIT
#pragma once

#include "lext/error.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace lext {

/// Multi-index (i_1, ..., i_N), 0-based internally, one entry per mode.
/// User-facing text (CLI, error messages) converts to and from 1-based.
using MultiIndex = std::vector<std::size_t>;

/// Dimensions (n_1, ..., n_N) of an order-N array.
///
/// Invariants enforced at construction: order >= 1, every dimension >= 1,
/// and the element count prod_i n_i fits the platform's index range.
class Shape {
public:
    explicit Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) {
            throw ArgumentError("shape must have order >= 1");
        }
        numel_ = 1;
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            if (dims_[k] == 0) {
                throw ShapeError("shape dimension " + std::to_string(k + 1) +
                                 " must be >= 1");
            }
            const std::size_t cap =
                static_cast<std::size_t>(std::numeric_limits<std::ptrdiff_t>::max());
            if (numel_ > cap / dims_[k]) {
                throw CapacityError("shape element count overflows the index range");
            }
            numel_ *= dims_[k];
        }
    }

    Shape(std::initializer_list<std::size_t> dims)
        : Shape(std::vector<std::size_t>(dims)) {}

    std::size_t order() const { return dims_.size(); }
    std::size_t dim(std::size_t k) const { return dims_[k]; }
    std::span<const std::size_t> dims() const { return dims_; }
    std::size_t numel() const { return numel_; }

    bool operator==(const Shape& other) const { return dims_ == other.dims_; }
    bool operator!=(const Shape& other) const { return !(*this == other); }

private:
    std::vector<std::size_t> dims_;
    std::size_t numel_ = 0;
};

/// "2x3x4" rendering for messages and reports.
inline std::string to_string(const Shape& s) {
    std::string out;
    for (std::size_t k = 0; k < s.order(); ++k) {
        if (k > 0) out += 'x';
        out += std::to_string(s.dim(k));
    }
    return out;
}

/// Strides of the lexicographic layout: stride_k = prod_{l > k} n_l, so the
/// last index varies fastest in flat storage.
inline std::vector<std::size_t> strides(const Shape& s) {
    std::vector<std::size_t> st(s.order());
    std::size_t acc = 1;
    for (std::size_t k = s.order(); k-- > 0;) {
        st[k] = acc;
        acc *= s.dim(k);
    }
    return st;
}

/// Flat offset of a multi-index under the lexicographic layout:
/// offset = sum_k i_k * prod_{l > k} n_l.  Bijective onto [0, numel).
inline std::size_t linear_index(const Shape& s, const MultiIndex& m) {
    if (m.size() != s.order()) {
        throw IndexError("multi-index has " + std::to_string(m.size()) +
                         " components, tensor order is " + std::to_string(s.order()));
    }
    std::size_t offset = 0;
    for (std::size_t k = 0; k < s.order(); ++k) {
        if (m[k] >= s.dim(k)) {
            throw IndexError("index " + std::to_string(m[k] + 1) + " out of range for mode " +
                             std::to_string(k + 1) + " (dimension " +
                             std::to_string(s.dim(k)) + ")");
        }
        offset = offset * s.dim(k) + m[k];
    }
    return offset;
}

/// Inverse of linear_index.
inline MultiIndex multi_index(const Shape& s, std::size_t offset) {
    if (offset >= s.numel()) {
        throw IndexError("flat offset " + std::to_string(offset) +
                         " out of range for shape " + to_string(s));
    }
    MultiIndex m(s.order());
    for (std::size_t k = s.order(); k-- > 0;) {
        m[k] = offset % s.dim(k);
        offset /= s.dim(k);
    }
    return m;
}

/// Advances a multi-index one step in lexicographic order (last mode
/// fastest). Returns false after the last index wraps back to all zeros.
inline bool next_multi_index(const Shape& s, MultiIndex& m) {
    for (std::size_t k = s.order(); k-- > 0;) {
        if (++m[k] < s.dim(k)) return true;
        m[k] = 0;
    }
    return false;
}

}  // namespace lext
