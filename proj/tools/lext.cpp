// SPDX-License-Identifier: MIT
//
// Command-line front end: tensor vectorization and unfolding, convention
// conversion, CP/Tucker reconstruction, array-normal sampling and density,
// and the randomized identity suite.
//
// Modes and indices are 1-based on the command line, matching the math
// notation; the library itself is 0-based. Results go to stdout,
// diagnostics to stderr. Exit codes: 0 success, 1 failed checks,
// 2 usage/parse errors, 3 definiteness/numeric errors.

#include "lext/lext.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

bool wants_binary(const std::string& path, bool binary_flag) {
    return binary_flag || (path.size() > 5 && path.substr(path.size() - 5) == ".lext");
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw lext::ParseError("cannot open '" + out_path + "' for writing");
    os << text;
}

void emit_tensor(const lext::DenseTensor& t, const std::string& out_path, bool binary_flag) {
    if (out_path.empty()) {
        std::cout << lext::to_json_text(t) << '\n';
        return;
    }
    lext::write_tensor_file(out_path, t, wants_binary(out_path, binary_flag));
}

std::size_t to_mode_index(int mode_1_based, std::size_t order) {
    if (mode_1_based < 1 || static_cast<std::size_t>(mode_1_based) > order) {
        throw lext::ArgumentError("mode " + std::to_string(mode_1_based) +
                                  " out of range (valid modes: 1.." + std::to_string(order) +
                                  ")");
    }
    return static_cast<std::size_t>(mode_1_based - 1);
}

int run_vec(const std::string& input, bool classic, const std::string& out_path) {
    const lext::DenseTensor t = lext::read_tensor_file(input);
    const lext::DenseMatrix v = lext::vec(t);
    if (!classic) {
        emit_text(lext::format_vector_line(v), out_path);
        return 0;
    }
    const auto perm = lext::classic_vec_permutation(t.shape());
    std::vector<double> w(v.rows());
    for (std::size_t q = 0; q < w.size(); ++q) w[perm[q]] = v(q, 0);
    emit_text(lext::format_vector_line(lext::DenseMatrix::column(w)), out_path);
    return 0;
}

int run_unfold(const std::string& input, int mode, bool oracle, const std::string& out_path) {
    const lext::DenseTensor t = lext::read_tensor_file(input);
    const std::size_t k = to_mode_index(mode, t.order());
    const lext::DenseMatrix m = oracle ? lext::matricize_oracle(t, k) : lext::matricize(t, k);
    emit_text(lext::format_matrix_rows(m), out_path);
    return 0;
}

int run_verify(std::size_t trials, std::uint64_t seed, double tol,
               const std::vector<std::string>& ids) {
    lext::TrialConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.tolerance = tol;

    std::vector<lext::CheckReport> reports;
    if (ids.empty()) {
        reports = lext::run_all(cfg);
    } else {
        for (const auto& id : ids) {
            reports.push_back(lext::run_identity(id, cfg));
        }
    }
    bool all_pass = true;
    for (const auto& r : reports) {
        std::cout << lext::format_report_line(r) << '\n';
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

lext::CPModel load_cp(const std::vector<std::string>& factor_paths) {
    std::vector<lext::DenseMatrix> factors;
    factors.reserve(factor_paths.size());
    for (const auto& path : factor_paths) {
        const lext::DenseTensor t = lext::read_tensor_file(path);
        if (t.order() != 2) {
            throw lext::ParseError("factor file '" + path + "' must hold an order-2 tensor, got order " +
                                   std::to_string(t.order()));
        }
        factors.push_back(lext::tensor_as_matrix(t));
    }
    return lext::CPModel(std::move(factors));
}

int run_cp(const std::vector<std::string>& factor_paths, bool reconstruct, int unfold_mode,
           bool vec_out, const std::string& out_path, bool binary_flag) {
    const lext::CPModel model = load_cp(factor_paths);
    if (reconstruct) {
        emit_tensor(lext::cp_reconstruct(model), out_path, binary_flag);
    } else if (unfold_mode != 0) {
        const std::size_t k = to_mode_index(unfold_mode, model.order());
        emit_text(lext::format_matrix_rows(lext::cp_unfolding(model, k)), out_path);
    } else if (vec_out) {
        emit_text(lext::format_vector_line(lext::cp_vec(model)), out_path);
    }
    return 0;
}

int run_tucker(const std::string& core_path, const std::vector<std::string>& factor_paths,
               bool reconstruct, int unfold_mode, bool vec_out, const std::string& out_path,
               bool binary_flag) {
    const lext::DenseTensor core = lext::read_tensor_file(core_path);
    std::vector<lext::DenseMatrix> factors;
    factors.reserve(factor_paths.size());
    for (const auto& path : factor_paths) {
        const lext::DenseTensor t = lext::read_tensor_file(path);
        if (t.order() != 2) {
            throw lext::ParseError("factor file '" + path + "' must hold an order-2 tensor, got order " +
                                   std::to_string(t.order()));
        }
        factors.push_back(lext::tensor_as_matrix(t));
    }
    const lext::TuckerModel model(core, std::move(factors));
    if (reconstruct) {
        emit_tensor(lext::tucker_reconstruct(model), out_path, binary_flag);
    } else if (unfold_mode != 0) {
        const std::size_t k = to_mode_index(unfold_mode, model.order());
        emit_text(lext::format_matrix_rows(lext::tucker_unfolding(model, k)), out_path);
    } else if (vec_out) {
        emit_text(lext::format_vector_line(lext::vec(lext::tucker_reconstruct(model))),
                  out_path);
    }
    return 0;
}

int run_an(const std::string& mean_path, const std::vector<std::string>& cov_paths,
           std::optional<std::size_t> sample_count, std::uint64_t seed,
           const std::string& logpdf_path, int unfold_law_mode, const std::string& out_path,
           bool binary_flag) {
    const lext::DenseTensor mean = lext::read_tensor_file(mean_path);
    std::vector<lext::DenseMatrix> covariances;
    covariances.reserve(cov_paths.size());
    for (const auto& path : cov_paths) {
        const lext::DenseTensor t = lext::read_tensor_file(path);
        if (t.order() != 2) {
            throw lext::ParseError("covariance file '" + path +
                                   "' must hold an order-2 tensor, got order " +
                                   std::to_string(t.order()));
        }
        covariances.push_back(lext::tensor_as_matrix(t));
    }
    const lext::SeparableGaussian dist(mean, std::move(covariances));

    if (sample_count) {
        const auto samples = lext::sample(dist, seed, *sample_count);
        if (!out_path.empty() && wants_binary(out_path, binary_flag)) {
            std::ofstream os(out_path, std::ios::binary);
            if (!os) throw lext::ParseError("cannot open '" + out_path + "' for writing");
            for (const auto& s : samples) lext::write_tensor_binary(os, s);
        } else {
            std::string text;
            for (const auto& s : samples) text += lext::to_json_text(s) + '\n';
            emit_text(text, out_path);
        }
        return 0;
    }
    if (!logpdf_path.empty()) {
        const lext::DenseTensor x = lext::read_tensor_file(logpdf_path);
        emit_text(lext::format_double(lext::log_density(dist, x)) + "\n", out_path);
        return 0;
    }
    if (unfold_law_mode != 0) {
        const std::size_t k = to_mode_index(unfold_law_mode, dist.order());
        const lext::MatrixNormalParams params = lext::unfolding_law(dist, k);
        std::string text;
        text += "mean:\n" + lext::format_matrix_rows(params.mean);
        text += "row_covariance:\n" + lext::format_matrix_rows(params.row_covariance);
        text += "column_covariance:\n" + lext::format_matrix_rows(params.column_covariance);
        emit_text(text, out_path);
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dense multiway-array algebra with the lexicographic convention"};
    app.require_subcommand(1);

    // vec
    std::string vec_input, vec_out;
    bool vec_classic = false;
    auto* vec_cmd = app.add_subcommand("vec", "vectorize a tensor file");
    vec_cmd->add_option("input", vec_input, "tensor file (text or binary)")->required();
    vec_cmd->add_flag("--classic", vec_classic,
                      "emit the classic column-major order instead of lexicographic");
    vec_cmd->add_option("-o,--output", vec_out, "write to file instead of stdout");

    // unfold
    std::string unfold_input, unfold_out;
    int unfold_mode = 0;
    bool unfold_oracle = false;
    auto* unfold_cmd = app.add_subcommand("unfold", "matricize a tensor file along a mode");
    unfold_cmd->add_option("input", unfold_input, "tensor file")->required();
    unfold_cmd->add_option("--mode", unfold_mode, "mode to unfold (1-based)")->required();
    unfold_cmd->add_flag("--oracle", unfold_oracle,
                         "use the permute/column-major-reshape construction");
    unfold_cmd->add_option("-o,--output", unfold_out, "write to file instead of stdout");

    // verify
    std::size_t verify_trials = 100;
    std::uint64_t verify_seed = 0;
    double verify_tol = 1e-10;
    std::vector<std::string> verify_ids;
    auto* verify_cmd = app.add_subcommand("verify", "run the randomized identity suite");
    verify_cmd->add_option("--trials", verify_trials, "trials per identity (default 100)");
    verify_cmd->add_option("--seed", verify_seed, "base seed (default 0)");
    verify_cmd->add_option("--tol", verify_tol, "relative tolerance (default 1e-10)");
    verify_cmd->add_option("--id", verify_ids, "identity ids to run (default: all)");

    // cp
    std::vector<std::string> cp_factors;
    std::string cp_out;
    bool cp_reconstruct_flag = false, cp_vec_flag = false, cp_binary = false;
    int cp_unfold_mode = 0;
    auto* cp_cmd = app.add_subcommand("cp", "evaluate a CP model from factor files");
    cp_cmd->add_option("factors", cp_factors, "factor matrix files, one per mode")
        ->required()
        ->expected(-1);
    auto* cp_rec = cp_cmd->add_flag("--reconstruct", cp_reconstruct_flag,
                                    "emit the reconstructed tensor");
    auto* cp_unf = cp_cmd->add_option("--unfold", cp_unfold_mode,
                                      "emit the mode-k unfolding (1-based)");
    auto* cp_v = cp_cmd->add_flag("--vec", cp_vec_flag, "emit the vectorized tensor");
    cp_rec->excludes(cp_unf)->excludes(cp_v);
    cp_unf->excludes(cp_v);
    cp_cmd->add_option("-o,--output", cp_out, "write to file instead of stdout");
    cp_cmd->add_flag("--binary", cp_binary, "write tensors in the binary format");

    // tucker
    std::string tucker_core, tucker_out;
    std::vector<std::string> tucker_factors;
    bool tucker_reconstruct_flag = false, tucker_vec_flag = false, tucker_binary = false;
    int tucker_unfold_mode = 0;
    auto* tucker_cmd =
        app.add_subcommand("tucker", "evaluate a Tucker model from core and factor files");
    tucker_cmd->add_option("core", tucker_core, "core tensor file")->required();
    tucker_cmd->add_option("factors", tucker_factors, "factor matrix files, one per mode")
        ->required()
        ->expected(-1);
    auto* tk_rec = tucker_cmd->add_flag("--reconstruct", tucker_reconstruct_flag,
                                        "emit the reconstructed tensor");
    auto* tk_unf = tucker_cmd->add_option("--unfold", tucker_unfold_mode,
                                          "emit the mode-k unfolding (1-based)");
    auto* tk_v = tucker_cmd->add_flag("--vec", tucker_vec_flag, "emit the vectorized tensor");
    tk_rec->excludes(tk_unf)->excludes(tk_v);
    tk_unf->excludes(tk_v);
    tucker_cmd->add_option("-o,--output", tucker_out, "write to file instead of stdout");
    tucker_cmd->add_flag("--binary", tucker_binary, "write tensors in the binary format");

    // an
    std::string an_mean, an_logpdf, an_out;
    std::vector<std::string> an_covs;
    std::optional<std::size_t> an_samples;
    std::size_t an_sample_count = 0;
    std::uint64_t an_seed = 0;
    int an_unfold_law = 0;
    bool an_binary = false;
    auto* an_cmd = app.add_subcommand("an", "array normal law: sample, density, unfolding law");
    an_cmd->add_option("--mean", an_mean, "mean tensor file")->required();
    an_cmd->add_option("--cov", an_covs, "per-mode covariance files (one per mode)")
        ->required()
        ->expected(-1);
    auto* an_s = an_cmd->add_option("--sample", an_sample_count, "number of samples to draw");
    an_cmd->add_option("--seed", an_seed, "sampling seed (default 0)");
    auto* an_l =
        an_cmd->add_option("--logpdf", an_logpdf, "evaluate the log-density at this tensor");
    auto* an_u = an_cmd->add_option("--unfold-law", an_unfold_law,
                                    "print the matrix normal law of the mode-k unfolding");
    an_s->excludes(an_l)->excludes(an_u);
    an_l->excludes(an_u);
    an_cmd->add_option("-o,--output", an_out, "write to file instead of stdout");
    an_cmd->add_flag("--binary", an_binary, "write samples in the binary format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            return app.exit(e);
        }
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (vec_cmd->parsed()) {
            return run_vec(vec_input, vec_classic, vec_out);
        }
        if (unfold_cmd->parsed()) {
            return run_unfold(unfold_input, unfold_mode, unfold_oracle, unfold_out);
        }
        if (verify_cmd->parsed()) {
            return run_verify(verify_trials, verify_seed, verify_tol, verify_ids);
        }
        if (cp_cmd->parsed()) {
            if (!cp_reconstruct_flag && cp_unfold_mode == 0 && !cp_vec_flag) {
                std::cerr << "error: choose one of --reconstruct, --unfold, --vec\n";
                return 2;
            }
            return run_cp(cp_factors, cp_reconstruct_flag, cp_unfold_mode, cp_vec_flag, cp_out,
                          cp_binary);
        }
        if (tucker_cmd->parsed()) {
            if (!tucker_reconstruct_flag && tucker_unfold_mode == 0 && !tucker_vec_flag) {
                std::cerr << "error: choose one of --reconstruct, --unfold, --vec\n";
                return 2;
            }
            return run_tucker(tucker_core, tucker_factors, tucker_reconstruct_flag,
                              tucker_unfold_mode, tucker_vec_flag, tucker_out, tucker_binary);
        }
        if (an_cmd->parsed()) {
            if (an_s->count() > 0) an_samples = an_sample_count;
            if (!an_samples && an_logpdf.empty() && an_unfold_law == 0) {
                std::cerr << "error: choose one of --sample, --logpdf, --unfold-law\n";
                return 2;
            }
            return run_an(an_mean, an_covs, an_samples, an_seed, an_logpdf, an_unfold_law,
                          an_out, an_binary);
        }
    } catch (const lext::DefinitenessError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const lext::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
