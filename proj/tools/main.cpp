#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "solverkit/bicgstab.hpp"
#include "solverkit/csr.hpp"
#include "solverkit/csro_io.hpp"
#include "solverkit/error.hpp"
#include "solverkit/json_io.hpp"
#include "solverkit/kernels.hpp"
#include "solverkit/matrix_market.hpp"
#include "solverkit/perfmodel.hpp"
#include "solverkit/precond.hpp"
#include "solverkit/reorder.hpp"
#include "solverkit/sparstition.hpp"
#include "solverkit/threads.hpp"

namespace {

using namespace solverkit;

// 0 = success, 2 = unreadable or invalid input, 3 = solver failure
// (including running out of iterations), 4 = model or sweep failure.
constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kSolveError = 3;
constexpr int kModelError = 4;

CsrMatrix load_matrix(const std::string& path) {
    if (looks_like_csro_file(path)) return csro_to_csr(read_csro_file(path));
    return read_matrix_market_file(path);
}

// "-" or an empty path means stdout.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

void print_json(const std::string& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

std::string canonical_csr_dump(const CsrMatrix& a) {
    std::string out = "csr " + std::to_string(a.n_rows) + " " + std::to_string(a.n_cols) +
                      " " + std::to_string(a.nnz()) + "\n";
    char line[96];
    for (std::size_t i = 0; i < a.n_rows; ++i)
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v) {
            std::snprintf(line, sizeof line, "%zu %u %.17g\n", i, a.col_indices[v],
                          a.values[v]);
            out += line;
        }
    return out;
}

DenseVector read_vector_file(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    DenseVector v;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        std::istringstream ls(line);
        double x;
        while (ls >> x) v.push_back(x);
        if (!ls.eof())
            throw ParseError("'" + path + "' holds something besides numbers", lineno);
    }
    if (v.size() != expected)
        throw DimensionError("'" + path + "' holds " + std::to_string(v.size()) +
                             " values, matrix needs " + std::to_string(expected));
    return v;
}

const std::map<std::string, PrecondKind> kPrecondNames = {
    {"none", PrecondKind::none},
    {"jacobi", PrecondKind::jacobi},
    {"ilu0", PrecondKind::ilu0}};

const std::map<std::string, ReorderMethod> kReorderNames = {
    {"none", ReorderMethod::none},
    {"level", ReorderMethod::level_scheduling},
    {"color", ReorderMethod::graph_coloring}};

// Flags shared by every subcommand that prices the hardware datapath.
struct ModelFlags {
    PerfConfig cfg;

    // with_axes=false for commands whose sweep grid already owns the three
    // resource axes
    void attach(CLI::App* cmd, bool with_axes = true) {
        if (with_axes) {
            cmd->add_option("--mult", cfg.n_multipliers, "Pipeline multipliers")
                ->capture_default_str();
            cmd->add_option("--bandwidth-gbps", cfg.ext_bandwidth_gbps,
                            "External bandwidth, GB/s")
                ->capture_default_str();
            cmd->add_option("--ports", cfg.n_internal_ports, "On-chip vector ports")
                ->capture_default_str();
        }
        cmd->add_option("--clock-mhz", cfg.clock_mhz, "Clock, MHz")->capture_default_str();
        cmd->add_option("--value-bytes", cfg.value_bytes,
                        "Bytes per matrix value (8 double, 4 single)")
            ->capture_default_str();
    }
};

ReorderPlan plan_for(const CsrMatrix& a, ReorderMethod method, std::uint64_t seed,
                     std::size_t cap) {
    switch (method) {
    case ReorderMethod::level_scheduling: return level_schedule(a);
    case ReorderMethod::graph_coloring: return graph_color(a, seed, cap);
    case ReorderMethod::none: break;
    }
    return identity_plan(a.n_rows);
}

// Streaming footprints of the system and, when ILU0 is in play, its factors.
// Other preconditioners leave the sweep meta empty: the modeled datapath only
// has an ILU0 unit.
std::pair<MatrixMeta, IluMeta> metas_for(const CsrMatrix& a, const ReorderPlan& plan,
                                         PrecondKind precond) {
    const CsrMatrix permuted =
        plan.method == ReorderMethod::none ? a : apply_reorder(a, plan);
    std::pair<MatrixMeta, IluMeta> out;
    out.first = meta_for_matrix(permuted, plan);
    if (precond == PrecondKind::ilu0)
        out.second = meta_for_factors(split_lu(ilu0_decompose(permuted)), plan);
    return out;
}

int run_convert(const std::string& input, const std::string& output, std::string to) {
    if (to.empty()) {
        if (output.size() > 5 && output.substr(output.size() - 5) == ".csro") to = "csro";
        else if (output.size() > 4 && output.substr(output.size() - 4) == ".mtx") to = "mtx";
        else {
            std::cerr << "error: cannot infer target format from '" << output
                      << "', pass --to\n";
            return kInputError;
        }
    }
    const CsrMatrix a = load_matrix(input);
    if (to == "csro") {
        if (output == "-") {
            std::cerr << "error: refusing to write binary data to stdout\n";
            return kInputError;
        }
        write_csro_file(output, csr_to_csro(a));
    } else if (to == "mtx") {
        std::ostringstream text;
        write_matrix_market(text, a);
        write_text(output, text.str());
    } else { // csr-text
        write_text(output, canonical_csr_dump(a));
    }
    return kOk;
}

int run_inspect(const std::string& input, const std::string& output) {
    const bool binary = looks_like_csro_file(input);
    const CsrMatrix a = load_matrix(input);

    std::size_t empty_rows = 0, diagonal = 0;
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        if (a.row_pointers[i] == a.row_pointers[i + 1]) ++empty_rows;
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v)
            if (a.col_indices[v] == i) ++diagonal;
    }

    // pattern symmetry: the sorted entry list must equal its transpose's
    std::vector<std::pair<index_t, index_t>> fwd, rev;
    fwd.reserve(a.nnz());
    rev.reserve(a.nnz());
    for (std::size_t i = 0; i < a.n_rows; ++i)
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v) {
            fwd.emplace_back(static_cast<index_t>(i), a.col_indices[v]);
            rev.emplace_back(a.col_indices[v], static_cast<index_t>(i));
        }
    std::sort(rev.begin(), rev.end());
    const bool symmetric = a.n_rows == a.n_cols && fwd == rev;

    nlohmann::json j{
        {"path", input},
        {"format", binary ? "csro" : "matrix-market"},
        {"n_rows", a.n_rows},
        {"n_cols", a.n_cols},
        {"nnz", a.nnz()},
        {"density", a.n_rows && a.n_cols
                        ? static_cast<double>(a.nnz()) /
                              (static_cast<double>(a.n_rows) * static_cast<double>(a.n_cols))
                        : 0.0},
        {"empty_rows", empty_rows},
        {"has_full_diagonal", a.n_rows == a.n_cols && diagonal == a.n_rows},
        {"structurally_symmetric", symmetric}};
    print_json(output, j);
    return kOk;
}

int run_reorder(const std::string& input, const std::string& output, ReorderMethod method,
                std::uint64_t seed, std::size_t cap) {
    const CsrMatrix a = load_matrix(input);
    const ReorderPlan plan = plan_for(a, method, seed, cap);
    print_json(output, to_json(plan));
    return kOk;
}

int run_solve(const std::string& input, const std::string& output, const SolverConfig& cfg,
              const std::string& rhs, bool include_solution, bool with_model,
              const ModelFlags& model) {
    const CsrMatrix a = load_matrix(input);
    const DenseVector b =
        rhs == "ones" ? spmv(a, DenseVector(a.n_rows, 1.0)) : read_vector_file(rhs, a.n_rows);
    const DenseVector x0(a.n_rows, 0.0);

    const SolveResult res = bicgstab(a, b, x0, cfg);

    nlohmann::json j = to_json(res, include_solution);
    j["matrix"] = input;
    j["n_rows"] = a.n_rows;
    j["nnz"] = a.nnz();
    j["precond"] = to_string(cfg.precond);
    j["reorder"] = to_string(cfg.reorder);
    j["seed"] = cfg.seed;
    if (rhs == "ones") {
        // b = A*ones makes the exact solution known, so report how close we got
        double err = 0.0;
        for (double xi : res.x) err = std::max(err, std::abs(xi - 1.0));
        j["solution_error_inf"] = err;
    }
    if (with_model) {
        const ReorderPlan plan = plan_for(a, cfg.reorder, cfg.seed, cfg.max_rows_per_color);
        const auto [a_meta, f_meta] = metas_for(a, plan, cfg.precond);
        j["model"] = to_json(model_solver(a_meta, f_meta, res.iterations, model.cfg));
    }
    print_json(output, j);
    return res.converged ? kOk : kSolveError;
}

int run_bench(const std::string& list_path, const std::string& output,
              const std::string& format, ReorderMethod reorder, std::size_t max_iter) {
    std::ifstream list(list_path);
    if (!list) throw IoError("cannot open '" + list_path + "'");
    std::vector<std::string> paths;
    std::string line;
    while (std::getline(list, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        paths.push_back(line.substr(first, last - first + 1));
    }

    struct Cell {
        std::string matrix, precond, status;
        std::size_t n_rows = 0, nnz = 0;
        double reduction = 0.0, iterations = 0.0, solve_ms = 0.0, setup_ms = 0.0;
        bool failed = false;
    };
    std::vector<Cell> cells;
    const double reductions[] = {1e-2, 1e-6};
    const PrecondKind kinds[] = {PrecondKind::none, PrecondKind::jacobi, PrecondKind::ilu0};

    for (const auto& path : paths) {
        std::optional<CsrMatrix> a;
        std::string load_error;
        try {
            a = load_matrix(path);
        } catch (const Error& e) {
            load_error = e.what();
        }
        for (PrecondKind kind : kinds)
            for (double red : reductions) {
                Cell c;
                c.matrix = path;
                c.precond = to_string(kind);
                c.reduction = red;
                if (!a) {
                    c.status = load_error;
                    c.failed = true;
                    cells.push_back(c);
                    continue;
                }
                c.n_rows = a->n_rows;
                c.nnz = a->nnz();
                SolverConfig cfg;
                cfg.reduction = red;
                cfg.precond = kind;
                cfg.reorder = reorder;
                cfg.max_iterations = max_iter;
                try {
                    const DenseVector b = spmv(*a, DenseVector(a->n_rows, 1.0));
                    const SolveResult res = bicgstab(*a, b, DenseVector(a->n_rows, 0.0), cfg);
                    c.status = to_string(res.status);
                    c.iterations = res.iterations;
                    c.solve_ms = res.solve_ms;
                    c.setup_ms = res.setup_ms;
                    c.failed = !res.converged;
                } catch (const Error& e) {
                    c.status = e.what();
                    c.failed = true;
                }
                cells.push_back(c);
            }
    }

    std::ostringstream out;
    const auto sanitize = [](std::string s) {
        for (char& ch : s)
            if (ch == ',' || ch == '\n' || ch == '|') ch = ';';
        return s;
    };
    char buf[64];
    if (format == "markdown") {
        out << "| matrix | rows | nnz | precond | reduction | status | iterations | "
               "solve ms |\n";
        out << "|---|---|---|---|---|---|---|---|\n";
        for (const auto& c : cells) {
            std::snprintf(buf, sizeof buf, "%g", c.reduction);
            out << "| " << sanitize(c.matrix) << " | " << c.n_rows << " | " << c.nnz
                << " | " << c.precond << " | " << buf << " | " << sanitize(c.status)
                << " | ";
            if (c.failed && c.iterations == 0.0) out << "-";
            else out << c.iterations;
            out << " | ";
            std::snprintf(buf, sizeof buf, "%.3f", c.solve_ms);
            out << (c.failed && c.iterations == 0.0 ? "-" : buf) << " |\n";
        }
    } else {
        out << "matrix,n_rows,nnz,precond,reduction,status,iterations,solve_ms,setup_ms\n";
        for (const auto& c : cells) {
            out << sanitize(c.matrix) << "," << c.n_rows << "," << c.nnz << ","
                << c.precond << ",";
            std::snprintf(buf, sizeof buf, "%g", c.reduction);
            out << buf << "," << sanitize(c.status) << ",";
            out << c.iterations << ",";
            std::snprintf(buf, sizeof buf, "%.3f", c.solve_ms);
            out << buf << ",";
            std::snprintf(buf, sizeof buf, "%.3f", c.setup_ms);
            out << buf << "\n";
        }
    }
    write_text(output, out.str());
    return kOk;
}

int run_model(const std::string& input, const std::string& output, double iters,
              PrecondKind precond, ReorderMethod reorder, std::uint64_t seed,
              std::size_t cap, const ModelFlags& model) {
    const CsrMatrix a = load_matrix(input);
    const ReorderPlan plan = plan_for(a, reorder, seed, cap);
    const auto [a_meta, f_meta] = metas_for(a, plan, precond);
    const PerfEstimate est = model_solver(a_meta, f_meta, iters, model.cfg);

    nlohmann::json j = to_json(est);
    j["matrix"] = input;
    j["n_rows"] = a.n_rows;
    j["nnz"] = a.nnz();
    j["reorder"] = to_string(plan.method);
    j["n_colors"] = plan.n_colors();
    j["precond"] = to_string(precond);
    print_json(output, j);
    return kOk;
}

int run_dse(const std::string& input, const std::string& output, const std::string& format,
            double iters, const DseGrid& grid, PrecondKind precond, ReorderMethod reorder,
            std::uint64_t seed, std::size_t cap, const ModelFlags& model) {
    const CsrMatrix a = load_matrix(input);
    const ReorderPlan plan = plan_for(a, reorder, seed, cap);
    const auto [a_meta, f_meta] = metas_for(a, plan, precond);
    const auto points = dse_sweep(a_meta, f_meta, iters, model.cfg, grid);

    if (format == "json") {
        print_json(output, to_json(points));
    } else {
        std::ostringstream out;
        write_dse_csv(out, points);
        write_text(output, out.str());
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    configure_threads();

    CLI::App app{"Sparse linear solver kit: CSRO storage, reordering, ILU0-BiCGStab, "
                 "and a streaming-hardware cycle model"};
    app.require_subcommand(1);

    // convert
    auto* convert = app.add_subcommand("convert", "Convert between matrix formats");
    std::string cv_in, cv_out, cv_to;
    convert->add_option("input", cv_in, "Matrix file (.mtx or .csro)")->required();
    convert->add_option("output", cv_out, "Destination file, or - for stdout")->required();
    convert->add_option("--to", cv_to, "Target format; inferred from the extension if omitted")
        ->check(CLI::IsMember({"csro", "mtx", "csr-text"}));

    // inspect
    auto* inspect = app.add_subcommand("inspect", "Print structural facts about a matrix");
    std::string in_in, in_out;
    inspect->add_option("input", in_in, "Matrix file")->required();
    inspect->add_option("-o,--output", in_out, "Write JSON here instead of stdout");

    // reorder
    auto* reorder = app.add_subcommand("reorder", "Compute a reordering plan");
    std::string ro_in, ro_out, ro_method = "color";
    std::uint64_t ro_seed = 0;
    std::size_t ro_cap = 0;
    reorder->add_option("input", ro_in, "Matrix file")->required();
    reorder->add_option("--method", ro_method, "Reordering method")
        ->check(CLI::IsMember({"level", "color"}))
        ->capture_default_str();
    reorder->add_option("--seed", ro_seed, "Coloring weight seed")->capture_default_str();
    reorder->add_option("--max-rows-per-color", ro_cap, "0 = unlimited")
        ->capture_default_str();
    reorder->add_option("-o,--output", ro_out, "Write JSON here instead of stdout");

    // solve
    auto* solve = app.add_subcommand("solve", "Run the preconditioned solver");
    std::string so_in, so_out, so_precond = "none", so_reorder = "none", so_rhs = "ones";
    SolverConfig so_cfg;
    double so_absolute = 0.0;
    bool so_solution = false, so_model = false;
    ModelFlags so_model_flags;
    solve->add_option("input", so_in, "Matrix file")->required();
    solve->add_option("--precond", so_precond, "Preconditioner")
        ->check(CLI::IsMember({"none", "jacobi", "ilu0"}))
        ->capture_default_str();
    solve->add_option("--reorder", so_reorder, "Row reordering")
        ->check(CLI::IsMember({"none", "level", "color"}))
        ->capture_default_str();
    solve->add_option("--seed", so_cfg.seed, "Coloring weight seed")->capture_default_str();
    solve->add_option("--reduction", so_cfg.reduction, "Relative residual target")
        ->capture_default_str();
    auto* abs_opt =
        solve->add_option("--absolute", so_absolute, "Absolute residual target instead");
    solve->add_option("--max-iter", so_cfg.max_iterations, "Iteration cap")
        ->capture_default_str();
    solve->add_option("--max-rows-per-color", so_cfg.max_rows_per_color, "0 = unlimited")
        ->capture_default_str();
    solve->add_option("--rhs", so_rhs, "'ones' for b = A*1, or a file of values")
        ->capture_default_str();
    solve->add_flag("--solution", so_solution, "Attach the solution vector to the JSON");
    solve->add_flag("--model", so_model, "Attach a datapath cycle estimate");
    so_model_flags.attach(solve);
    solve->add_option("-o,--output", so_out, "Write JSON here instead of stdout");

    // bench
    auto* bench = app.add_subcommand(
        "bench", "Solve every matrix in a list across preconditioners and targets");
    std::string be_in, be_out, be_format = "csv", be_reorder = "none";
    std::size_t be_max_iter = 1000;
    bench->add_option("list", be_in, "Text file, one matrix path per line")->required();
    bench->add_option("--format", be_format, "Output format")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    bench->add_option("--reorder", be_reorder, "Row reordering")
        ->check(CLI::IsMember({"none", "level", "color"}))
        ->capture_default_str();
    bench->add_option("--max-iter", be_max_iter, "Iteration cap")->capture_default_str();
    bench->add_option("-o,--output", be_out, "Write the table here instead of stdout");

    // model
    auto* model = app.add_subcommand("model", "Price one solver run on the datapath");
    std::string mo_in, mo_out, mo_precond = "ilu0", mo_reorder = "color";
    double mo_iters = 4.5;
    std::uint64_t mo_seed = 0;
    std::size_t mo_cap = 0;
    ModelFlags mo_flags;
    model->add_option("input", mo_in, "Matrix file")->required();
    model->add_option("--iters", mo_iters, "Iterations to price (multiple of 0.5)")
        ->capture_default_str();
    model->add_option("--precond", mo_precond, "Preconditioner (sweeps modeled for ilu0)")
        ->check(CLI::IsMember({"none", "jacobi", "ilu0"}))
        ->capture_default_str();
    model->add_option("--reorder", mo_reorder, "Row reordering")
        ->check(CLI::IsMember({"none", "level", "color"}))
        ->capture_default_str();
    model->add_option("--seed", mo_seed, "Coloring weight seed")->capture_default_str();
    model->add_option("--max-rows-per-color", mo_cap, "0 = unlimited")->capture_default_str();
    mo_flags.attach(model);
    model->add_option("-o,--output", mo_out, "Write JSON here instead of stdout");

    // dse
    auto* dse = app.add_subcommand("dse", "Sweep datapath configurations");
    std::string ds_in, ds_out, ds_format = "csv", ds_precond = "ilu0", ds_reorder = "color";
    double ds_iters = 4.5;
    std::uint64_t ds_seed = 0;
    std::size_t ds_cap = 0;
    DseGrid ds_grid{{8}, {50.0}, {2}};
    ModelFlags ds_flags;
    dse->add_option("input", ds_in, "Matrix file")->required();
    dse->add_option("--mults", ds_grid.multipliers, "Multiplier counts to sweep")
        ->delimiter(',')
        ->capture_default_str();
    dse->add_option("--bandwidth", ds_grid.bandwidths_gbps, "Bandwidths to sweep, GB/s")
        ->delimiter(',')
        ->capture_default_str();
    dse->add_option("--ports", ds_grid.internal_ports, "Port counts to sweep")
        ->delimiter(',')
        ->capture_default_str();
    dse->add_option("--iters", ds_iters, "Iterations to price (multiple of 0.5)")
        ->capture_default_str();
    dse->add_option("--precond", ds_precond, "Preconditioner (sweeps modeled for ilu0)")
        ->check(CLI::IsMember({"none", "jacobi", "ilu0"}))
        ->capture_default_str();
    dse->add_option("--reorder", ds_reorder, "Row reordering")
        ->check(CLI::IsMember({"none", "level", "color"}))
        ->capture_default_str();
    dse->add_option("--seed", ds_seed, "Coloring weight seed")->capture_default_str();
    dse->add_option("--format", ds_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    dse->add_option("--max-rows-per-color", ds_cap, "0 = unlimited")->capture_default_str();
    ds_flags.attach(dse, false);
    dse->add_option("-o,--output", ds_out, "Write the sweep here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (convert->parsed()) return run_convert(cv_in, cv_out, cv_to);
        if (inspect->parsed()) return run_inspect(in_in, in_out);
        if (reorder->parsed())
            return run_reorder(ro_in, ro_out, kReorderNames.at(ro_method), ro_seed, ro_cap);
        if (solve->parsed()) {
            so_cfg.precond = kPrecondNames.at(so_precond);
            so_cfg.reorder = kReorderNames.at(so_reorder);
            if (abs_opt->count() > 0) so_cfg.absolute_threshold = so_absolute;
            return run_solve(so_in, so_out, so_cfg, so_rhs, so_solution, so_model,
                             so_model_flags);
        }
        if (bench->parsed())
            return run_bench(be_in, be_out, be_format, kReorderNames.at(be_reorder),
                             be_max_iter);
        if (model->parsed()) {
            try {
                return run_model(mo_in, mo_out, mo_iters, kPrecondNames.at(mo_precond),
                                 kReorderNames.at(mo_reorder), mo_seed, mo_cap, mo_flags);
            } catch (const ParseError&) {
                throw;
            } catch (const IoError&) {
                throw;
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kModelError;
            }
        }
        if (dse->parsed()) {
            try {
                return run_dse(ds_in, ds_out, ds_format, ds_iters, ds_grid,
                               kPrecondNames.at(ds_precond), kReorderNames.at(ds_reorder),
                               ds_seed, ds_cap, ds_flags);
            } catch (const ParseError&) {
                throw;
            } catch (const IoError&) {
                throw;
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kModelError;
            }
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const StructureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolveError;
    }
    return kOk;
}
