// SPDX-License-Identifier: MIT
//
// End-to-end tests driving the installed CLI binary. The binary path is
// injected by the build as LEXT_CLI_PATH.

#include <catch2/catch_amalgamated.hpp>

#include "lext/io.hpp"
#include "lext/kron.hpp"
#include "lext/layout.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace lext;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd = std::string(LEXT_CLI_PATH) + " " + args +
                            (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "lext_cli_tests";
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

DenseTensor counting_2x2x2() {
    return DenseTensor(Shape{2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
}

}  // namespace

TEST_CASE("cli vec") {
    TempDir dir;
    const std::string input = dir.file("t.json");
    write_tensor_file(input, counting_2x2x2(), false);

    SECTION("default emits the lexicographic order") {
        const auto r = run_cli("vec " + input);
        CHECK(r.exit_code == 0);
        CHECK(r.output == "1 2 3 4 5 6 7 8\n");
    }
    SECTION("--classic emits the column-major order") {
        const auto r = run_cli("vec " + input + " --classic");
        CHECK(r.exit_code == 0);
        CHECK(r.output == "1 5 3 7 2 6 4 8\n");
    }
    SECTION("--classic undone by the inverse permutation gives the default") {
        const auto classic = run_cli("vec " + input + " --classic");
        std::istringstream is(classic.output);
        std::vector<double> w;
        double v;
        while (is >> v) w.push_back(v);
        const auto p = classic_vec_permutation(Shape{2, 2, 2});
        std::string rebuilt;
        for (std::size_t q = 0; q < w.size(); ++q) {
            if (q > 0) rebuilt += ' ';
            rebuilt += format_double(w[p[q]]);
        }
        rebuilt += '\n';
        CHECK(rebuilt == run_cli("vec " + input).output);
    }
    SECTION("order-1 tensors ignore the convention") {
        const std::string one = dir.file("v.json");
        write_tensor_file(one, DenseTensor(Shape{4}, {9, 8, 7, 6}), false);
        CHECK(run_cli("vec " + one).output == run_cli("vec " + one + " --classic").output);
    }
    SECTION("malformed files exit 2") {
        const std::string bad = dir.file("bad.json");
        std::ofstream(bad) << "{\"shape\": [2], \"data\": [1, 2, 3]}";
        const auto r = run_cli("vec " + bad, true);
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("error") != std::string::npos);
    }
}

TEST_CASE("cli unfold") {
    TempDir dir;
    const std::string input = dir.file("t.lext");
    write_tensor_file(input, counting_2x2x2(), true);

    SECTION("mode 1 rows") {
        const auto r = run_cli("unfold " + input + " --mode 1");
        CHECK(r.exit_code == 0);
        CHECK(r.output == "1 2 3 4\n5 6 7 8\n");
    }
    SECTION("--oracle agrees with the default for every mode") {
        for (int mode = 1; mode <= 3; ++mode) {
            const auto a = run_cli("unfold " + input + " --mode " + std::to_string(mode));
            const auto b =
                run_cli("unfold " + input + " --mode " + std::to_string(mode) + " --oracle");
            CHECK(a.output == b.output);
        }
    }
    SECTION("mode out of range exits 2 and names the valid range") {
        const auto r = run_cli("unfold " + input + " --mode 4", true);
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("1..3") != std::string::npos);
    }
}

TEST_CASE("cli verify") {
    SECTION("a single identity line is reproducible") {
        const auto a = run_cli("verify --id T1 --trials 5 --seed 7");
        const auto b = run_cli("verify --id T1 --trials 5 --seed 7");
        CHECK(a.exit_code == 0);
        CHECK(a.output == b.output);
        CHECK(a.output.rfind("T1 5 ", 0) == 0);
        CHECK(a.output.find(" true") != std::string::npos);
    }
    SECTION("zero tolerance fails") {
        const auto r = run_cli("verify --trials 2 --seed 1 --tol 0");
        CHECK(r.exit_code != 0);
    }
    SECTION("unknown identities exit 2") {
        const auto r = run_cli("verify --id T99", true);
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("T99") != std::string::npos);
    }
    SECTION("a short full run prints one line per identity") {
        const auto r = run_cli("verify --trials 3 --seed 11");
        CHECK(r.exit_code == 0);
        std::istringstream is(r.output);
        std::string line;
        int lines = 0;
        while (std::getline(is, line)) ++lines;
        CHECK(lines == 18);
    }
}

TEST_CASE("cli cp") {
    TempDir dir;
    const std::string a = dir.file("a.json"), b = dir.file("b.json"), c = dir.file("c.json");
    write_tensor_file(a, DenseTensor(Shape{2, 1}, {1, 2}), false);
    write_tensor_file(b, DenseTensor(Shape{2, 1}, {3, 4}), false);
    write_tensor_file(c, DenseTensor(Shape{2, 1}, {5, 6}), false);
    const std::string factors = a + " " + b + " " + c;

    SECTION("reconstruct") {
        const std::string out = dir.file("y.json");
        const auto r = run_cli("cp " + factors + " --reconstruct -o " + out);
        REQUIRE(r.exit_code == 0);
        const DenseTensor y = read_tensor_file(out);
        CHECK(y.shape() == Shape{2, 2, 2});
        CHECK(y.at({0, 0, 0}) == 15.0);
        CHECK(y.at({1, 1, 1}) == 48.0);
    }
    SECTION("--vec equals vec of --reconstruct") {
        const std::string out = dir.file("y2.lext");
        REQUIRE(run_cli("cp " + factors + " --reconstruct -o " + out).exit_code == 0);
        const auto direct = run_cli("cp " + factors + " --vec");
        const auto via_vec = run_cli("vec " + out);
        CHECK(direct.output == via_vec.output);
    }
    SECTION("unfold") {
        const auto r = run_cli("cp " + factors + " --unfold 1");
        CHECK(r.exit_code == 0);
        CHECK(r.output == "15 18 20 24\n30 36 40 48\n");
    }
    SECTION("inconsistent factor ranks exit 2") {
        const std::string wide = dir.file("wide.json");
        write_tensor_file(wide, DenseTensor(Shape{2, 2}, {1, 2, 3, 4}), false);
        const auto r = run_cli("cp " + a + " " + wide + " --reconstruct", true);
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("factor") != std::string::npos);
    }
}

TEST_CASE("cli tucker") {
    TempDir dir;
    const std::string core = dir.file("core.json");
    write_tensor_file(core, counting_2x2x2(), false);
    const std::string eye = dir.file("eye.json");
    write_tensor_file(eye, matrix_as_tensor(DenseMatrix::identity(2)), false);

    SECTION("identity factors reproduce the core") {
        const std::string out = dir.file("out.json");
        const auto r = run_cli("tucker " + core + " " + eye + " " + eye + " " + eye +
                               " --reconstruct -o " + out);
        REQUIRE(r.exit_code == 0);
        CHECK(read_tensor_file(out) == counting_2x2x2());
    }
    SECTION("unfold of the identity model matches the plain unfolding") {
        const auto a = run_cli("tucker " + core + " " + eye + " " + eye + " " + eye +
                               " --unfold 2");
        const auto b = run_cli("unfold " + core + " --mode 2");
        CHECK(a.output == b.output);
    }
    SECTION("--vec of the identity model matches the plain vectorization") {
        const auto a =
            run_cli("tucker " + core + " " + eye + " " + eye + " " + eye + " --vec");
        const auto b = run_cli("vec " + core);
        CHECK(a.output == b.output);
    }
}

TEST_CASE("cli an") {
    TempDir dir;
    const std::string mean = dir.file("mean.json");
    write_tensor_file(mean, DenseTensor(Shape{2, 2, 2}), false);
    const std::string eye = dir.file("eye.json");
    write_tensor_file(eye, matrix_as_tensor(DenseMatrix::identity(2)), false);
    const std::string covs = " --cov " + eye + " --cov " + eye + " --cov " + eye;

    SECTION("logpdf of white noise at the mean is the pure normalizer") {
        const std::string x = dir.file("x.json");
        write_tensor_file(x, DenseTensor(Shape{2, 2, 2}), false);
        const auto r = run_cli("an --mean " + mean + covs + " --logpdf " + x);
        REQUIRE(r.exit_code == 0);
        CHECK(r.output.rfind("-7.3515082656373", 0) == 0);
    }
    SECTION("sampling is deterministic per seed") {
        const std::string s1 = dir.file("s1.lext"), s2 = dir.file("s2.lext");
        REQUIRE(run_cli("an --mean " + mean + covs + " --sample 3 --seed 1 -o " + s1)
                    .exit_code == 0);
        REQUIRE(run_cli("an --mean " + mean + covs + " --sample 3 --seed 1 -o " + s2)
                    .exit_code == 0);
        const std::string b1 = read_file(s1), b2 = read_file(s2);
        CHECK(!b1.empty());
        CHECK(b1 == b2);
        // Three consecutive binary records.
        std::istringstream is(b1, std::ios::binary);
        for (int k = 0; k < 3; ++k) {
            CHECK(read_tensor_binary(is).shape() == Shape{2, 2, 2});
        }
    }
    SECTION("unfold-law prints the per-mode law") {
        DenseMatrix s1 = DenseMatrix::identity(2);
        s1(0, 0) = 2.0;
        DenseMatrix s3 = DenseMatrix::identity(2);
        s3(1, 1) = 5.0;
        const std::string f1 = dir.file("s1m.json"), f3 = dir.file("s3m.json");
        write_tensor_file(f1, matrix_as_tensor(s1), false);
        write_tensor_file(f3, matrix_as_tensor(s3), false);
        const auto r = run_cli("an --mean " + mean + " --cov " + f1 + " --cov " + eye +
                               " --cov " + f3 + " --unfold-law 2");
        REQUIRE(r.exit_code == 0);
        CHECK(r.output.find("row_covariance:\n1 0\n0 1\n") != std::string::npos);
        const std::string col_cov = format_matrix_rows(kron(s1, s3));
        CHECK(r.output.find("column_covariance:\n" + col_cov) != std::string::npos);
    }
    SECTION("non positive definite covariances exit 3") {
        const std::string bad = dir.file("bad.json");
        write_tensor_file(bad, matrix_as_tensor(DenseMatrix(2, 2, {1, 2, 2, 1})), false);
        const auto r = run_cli("an --mean " + mean + " --cov " + bad + " --cov " + eye +
                                   " --cov " + eye + " --logpdf " + mean,
                               true);
        CHECK(r.exit_code == 3);
        CHECK(r.output.find("positive definite") != std::string::npos);
    }
}

TEST_CASE("cli usage errors") {
    CHECK(run_cli("bogus-subcommand", true).exit_code == 2);
    CHECK(run_cli("vec /nonexistent/tensor.json", true).exit_code == 2);
    CHECK(run_cli("cp", true).exit_code == 2);
}
