// SPDX-License-Identifier: MIT
#pragma once

// Tensor file carriers.
//
// Text: a JSON object {"shape": [n_1, ...], "data": [...]} with the data in
// lexicographic order. Numbers are written in shortest round-trip form.
//
// Binary: magic "LEXT", version byte 0x01, unsigned 32-bit little-endian
// order N, N little-endian u32 dims, then prod(n_i) IEEE-754 doubles,
// little-endian, in lexicographic order. Byte order is fixed regardless of
// host so files diff and hash identically across platforms.

#include "lext/error.hpp"
#include "lext/matrix.hpp"
#include "lext/shape.hpp"
#include "lext/tensor.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lext {

/// Shortest decimal string that round-trips back to exactly x.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string to_json_text(const DenseTensor& t) {
    nlohmann::json j;
    j["shape"] = std::vector<std::size_t>(t.shape().dims().begin(), t.shape().dims().end());
    j["data"] = std::vector<double>(t.data().begin(), t.data().end());
    return j.dump();
}

inline DenseTensor from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid tensor file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("shape") || !j.contains("data")) {
        throw ParseError("tensor file must be an object with \"shape\" and \"data\" fields");
    }
    std::vector<std::size_t> dims;
    try {
        for (const auto& d : j.at("shape")) {
            const auto v = d.get<std::int64_t>();
            if (v < 1) throw ParseError("field \"shape\": dimensions must be positive");
            dims.push_back(static_cast<std::size_t>(v));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("field \"shape\": ") + e.what());
    }
    std::vector<double> data;
    try {
        data = j.at("data").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("field \"data\": ") + e.what());
    }
    Shape shape{std::move(dims)};
    if (data.size() != shape.numel()) {
        throw ParseError("field \"data\": length " + std::to_string(data.size()) +
                         " does not match shape " + to_string(shape) + " (" +
                         std::to_string(shape.numel()) + " elements)");
    }
    return DenseTensor(std::move(shape), std::move(data));
}

namespace detail {

inline void put_u32_le(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
    os.write(b, 4);
}

inline void put_f64_le(std::ostream& os, double x) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
    os.write(b, 8);
}

inline std::uint32_t get_u32_le(std::istream& is, std::size_t at, const char* what) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) {
        throw ParseError(std::string("unexpected end of file reading ") + what +
                         " at byte " + std::to_string(at));
    }
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline double get_f64_le(std::istream& is, std::size_t at, const char* what) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) {
        throw ParseError(std::string("unexpected end of file reading ") + what +
                         " at byte " + std::to_string(at));
    }
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return std::bit_cast<double>(bits);
}

}  // namespace detail

inline constexpr char kBinaryMagic[4] = {'L', 'E', 'X', 'T'};
inline constexpr unsigned char kBinaryVersion = 0x01;

/// Writes one binary record.
inline void write_tensor_binary(std::ostream& os, const DenseTensor& t) {
    os.write(kBinaryMagic, 4);
    os.put(static_cast<char>(kBinaryVersion));
    detail::put_u32_le(os, static_cast<std::uint32_t>(t.order()));
    for (std::size_t k = 0; k < t.order(); ++k) {
        detail::put_u32_le(os, static_cast<std::uint32_t>(t.shape().dim(k)));
    }
    for (double x : t.data()) detail::put_f64_le(os, x);
}

/// Reads one binary record, leaving the stream positioned after it.
inline DenseTensor read_tensor_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4)) {
        throw ParseError("unexpected end of file reading magic at byte 0");
    }
    if (std::memcmp(magic, kBinaryMagic, 4) != 0) {
        throw ParseError("bad magic at byte 0: expected \"LEXT\"");
    }
    const int version = is.get();
    if (version == std::char_traits<char>::eof()) {
        throw ParseError("unexpected end of file reading version at byte 4");
    }
    if (version != kBinaryVersion) {
        throw ParseError("unsupported version " + std::to_string(version) + " at byte 4");
    }
    const std::uint32_t order = detail::get_u32_le(is, 5, "order");
    if (order < 1) {
        throw ParseError("order must be >= 1 (field at byte 5)");
    }
    std::vector<std::size_t> dims(order);
    for (std::uint32_t k = 0; k < order; ++k) {
        const std::uint32_t d = detail::get_u32_le(is, 9 + 4 * k, "dimension");
        if (d < 1) {
            throw ParseError("dimension " + std::to_string(k + 1) + " must be >= 1 (field at byte " +
                             std::to_string(9 + 4 * k) + ")");
        }
        dims[k] = d;
    }
    Shape shape{std::move(dims)};
    const std::size_t header = 9 + 4 * static_cast<std::size_t>(order);
    std::vector<double> data(shape.numel());
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = detail::get_f64_le(is, header + 8 * i, "data");
    }
    return DenseTensor(std::move(shape), std::move(data));
}

/// Reads a tensor file, sniffing the format from the first bytes.
inline DenseTensor read_tensor_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw ParseError("cannot open '" + path + "'");
    }
    char head[4] = {0, 0, 0, 0};
    is.read(head, 4);
    const bool binary = is.gcount() == 4 && std::memcmp(head, kBinaryMagic, 4) == 0;
    is.clear();
    is.seekg(0);
    if (binary) {
        DenseTensor t = read_tensor_binary(is);
        is.peek();
        if (!is.eof()) {
            throw ParseError("trailing data after the tensor record in '" + path + "'");
        }
        return t;
    }
    std::ostringstream text;
    text << is.rdbuf();
    try {
        return from_json_text(text.str());
    } catch (const ParseError& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

inline void write_tensor_file(const std::string& path, const DenseTensor& t, bool binary) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw ParseError("cannot open '" + path + "' for writing");
    }
    if (binary) {
        write_tensor_binary(os, t);
    } else {
        os << to_json_text(t) << '\n';
    }
    if (!os) {
        throw ParseError("error writing '" + path + "'");
    }
}

/// Space-separated row text, one line per matrix row.
inline std::string format_matrix_rows(const DenseMatrix& m) {
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ' ';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

/// Space-separated values of a column vector on one line.
inline std::string format_vector_line(const DenseMatrix& v) {
    std::string out;
    for (std::size_t r = 0; r < v.rows(); ++r) {
        if (r > 0) out += ' ';
        out += format_double(v(r, 0));
    }
    out += '\n';
    return out;
}

}  // namespace lext
