// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "lext/io.hpp"
#include "lext/random.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace lext;

namespace {

DenseTensor random_tensor(std::mt19937_64& eng, const Shape& s) {
    DenseTensor t(s);
    for (auto& x : t.data()) x = uniform_pm1(eng);
    return t;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("shortest round-trip double formatting") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5) == "-2.5");
    std::mt19937_64 eng(1);
    for (int i = 0; i < 200; ++i) {
        const double x = uniform_pm1(eng) * std::pow(10.0, uniform_pm1(eng) * 20.0);
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("json text round trip preserves values exactly") {
    std::mt19937_64 eng(2);
    const DenseTensor t = random_tensor(eng, Shape{3, 2, 4});
    const DenseTensor back = from_json_text(to_json_text(t));
    CHECK(back == t);
}

TEST_CASE("json parsing reports field problems") {
    CHECK_THROWS_AS(from_json_text("not json"), ParseError);
    CHECK_THROWS_AS(from_json_text("[1,2]"), ParseError);
    CHECK_THROWS_AS(from_json_text(R"({"shape": [2,2]})"), ParseError);
    CHECK_THROWS_AS(from_json_text(R"({"shape": [2,2], "data": [1,2,3]})"), ParseError);
    CHECK_THROWS_AS(from_json_text(R"({"shape": [2,0], "data": []})"), ParseError);
    CHECK_THROWS_AS(from_json_text(R"({"shape": [2], "data": ["x","y"]})"), ParseError);
    CHECK_THROWS_WITH(from_json_text(R"({"shape": [2,2], "data": [1,2,3]})"),
                      Catch::Matchers::ContainsSubstring("data"));
}

TEST_CASE("binary format is fixed little-endian with the documented header") {
    const DenseTensor t(Shape{2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
    std::ostringstream os(std::ios::binary);
    write_tensor_binary(os, t);
    const std::string bytes = os.str();
    REQUIRE(bytes.size() == 4 + 1 + 4 + 3 * 4 + 8 * 8);
    CHECK(bytes.substr(0, 4) == "LEXT");
    CHECK(static_cast<unsigned char>(bytes[4]) == 0x01);
    // order = 3, little endian
    CHECK(static_cast<unsigned char>(bytes[5]) == 3);
    CHECK(static_cast<unsigned char>(bytes[6]) == 0);
    // dims 2,2,2
    CHECK(static_cast<unsigned char>(bytes[9]) == 2);
    CHECK(static_cast<unsigned char>(bytes[13]) == 2);
    CHECK(static_cast<unsigned char>(bytes[17]) == 2);
    // first double is 1.0 = 0x3FF0000000000000, little endian
    CHECK(static_cast<unsigned char>(bytes[21]) == 0x00);
    CHECK(static_cast<unsigned char>(bytes[27]) == 0xF0);
    CHECK(static_cast<unsigned char>(bytes[28]) == 0x3F);

    std::istringstream is(bytes, std::ios::binary);
    CHECK(read_tensor_binary(is) == t);
}

TEST_CASE("binary round trip is bitwise for random data") {
    std::mt19937_64 eng(3);
    const DenseTensor t = random_tensor(eng, Shape{4, 5});
    std::ostringstream os(std::ios::binary);
    write_tensor_binary(os, t);
    std::istringstream is(os.str(), std::ios::binary);
    CHECK(read_tensor_binary(is) == t);
}

TEST_CASE("binary parser locates malformed input") {
    SECTION("bad magic") {
        std::istringstream is("NOPE", std::ios::binary);
        CHECK_THROWS_WITH(read_tensor_binary(is),
                          Catch::Matchers::ContainsSubstring("byte 0"));
    }
    SECTION("truncated data") {
        const DenseTensor t(Shape{2, 2}, {1, 2, 3, 4});
        std::ostringstream os(std::ios::binary);
        write_tensor_binary(os, t);
        std::string bytes = os.str();
        bytes.resize(bytes.size() - 5);
        std::istringstream is(bytes, std::ios::binary);
        CHECK_THROWS_AS(read_tensor_binary(is), ParseError);
    }
    SECTION("unsupported version") {
        std::string bytes = "LEXT";
        bytes.push_back(0x02);
        std::istringstream is(bytes, std::ios::binary);
        CHECK_THROWS_WITH(read_tensor_binary(is),
                          Catch::Matchers::ContainsSubstring("version"));
    }
    SECTION("zero dimension") {
        std::ostringstream os(std::ios::binary);
        os.write("LEXT", 4);
        os.put(0x01);
        const unsigned char order[4] = {1, 0, 0, 0};
        const unsigned char dim[4] = {0, 0, 0, 0};
        os.write(reinterpret_cast<const char*>(order), 4);
        os.write(reinterpret_cast<const char*>(dim), 4);
        std::istringstream is(os.str(), std::ios::binary);
        CHECK_THROWS_AS(read_tensor_binary(is), ParseError);
    }
}

TEST_CASE("file level read and write sniff the format") {
    std::mt19937_64 eng(4);
    const DenseTensor t = random_tensor(eng, Shape{2, 3});

    const auto text_path = temp_file("lext_io_test.json");
    write_tensor_file(text_path.string(), t, false);
    CHECK(read_tensor_file(text_path.string()) == t);

    const auto bin_path = temp_file("lext_io_test.lext");
    write_tensor_file(bin_path.string(), t, true);
    CHECK(read_tensor_file(bin_path.string()) == t);

    CHECK_THROWS_AS(read_tensor_file("/nonexistent/path/tensor.json"), ParseError);

    std::filesystem::remove(text_path);
    std::filesystem::remove(bin_path);
}

TEST_CASE("trailing bytes after a single binary record are rejected") {
    const DenseTensor t(Shape{2}, {1, 2});
    const auto path = temp_file("lext_io_trailing.lext");
    {
        std::ofstream os(path, std::ios::binary);
        write_tensor_binary(os, t);
        write_tensor_binary(os, t);
    }
    CHECK_THROWS_WITH(read_tensor_file(path.string()),
                      Catch::Matchers::ContainsSubstring("trailing"));
    std::filesystem::remove(path);
}

TEST_CASE("matrix and vector text formatting") {
    const DenseMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(format_matrix_rows(m) == "1 2 3\n4 5 6\n");
    CHECK(format_vector_line(DenseMatrix::column({1.5, -2.0})) == "1.5 -2\n");
}
