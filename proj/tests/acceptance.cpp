// Release checklist for the solver stack. Each numbered check prints one
// PASS/FAIL line; the exit code is the number of failures. Checks that
// depend on the named benchmark matrices run on whatever data/suitesparse
// provides (see scripts/fetch_suitesparse.sh) and fail with an explicit
// list of the files they are missing rather than silently shrinking.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "solverkit/bicgstab.hpp"
#include "solverkit/csr.hpp"
#include "solverkit/csro_io.hpp"
#include "solverkit/kernels.hpp"
#include "solverkit/perfmodel.hpp"
#include "solverkit/precond.hpp"
#include "solverkit/reorder.hpp"
#include "solverkit/sparstition.hpp"
#include "solverkit/threads.hpp"
#include "support/data.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace solverkit;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

bool bitwise_equal(const DenseVector& a, const DenseVector& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ", ";
        out += p;
    }
    return out;
}

// ‖b − A·x‖ recomputed in extended precision straight off the stored
// entries, independent of the solver's own bookkeeping and of the
// production product kernel.
double recomputed_residual(const CsrMatrix& a, const DenseVector& x, const DenseVector& b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        long double row = 0.0L;
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v)
            row += static_cast<long double>(a.values[v]) * x[a.col_indices[v]];
        const long double d = static_cast<long double>(b[i]) - row;
        s += d * d;
    }
    return static_cast<double>(std::sqrt(s));
}

// ------------------------------------------------------------------
// 1. both matrix forms survive conversion and serialization unchanged

Outcome check_round_trip() {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 500; ++k) {
        const std::size_t n_rows = 1 + rng() % 256;
        const std::size_t n_cols = 1 + rng() % 256;
        const double density = static_cast<double>(rng() % 101) / 1000.0; // up to 10%
        const CsrMatrix a = gen::random_sparse(rng(), n_rows, n_cols, density);

        const CsroMatrix offsets_form = csr_to_csro(a);
        if (!(csro_to_csr(offsets_form) == a))
            return {false, "matrix " + std::to_string(k) + ": conversion changed the matrix"};

        std::stringstream buffer;
        write_csro(buffer, offsets_form);
        const CsroMatrix reread = read_csro(buffer);
        if (!(reread == offsets_form) ||
            std::memcmp(reread.values.data(), offsets_form.values.data(),
                        reread.values.size() * sizeof(double)) != 0)
            return {false, "matrix " + std::to_string(k) + ": binary form not bit-exact"};
        if (!(csro_to_csr(reread) == a))
            return {false, "matrix " + std::to_string(k) + ": reread matrix differs"};
    }
    return {true, "500 random matrices, conversion and binary serialization"};
}

// ------------------------------------------------------------------
// 2. the two product paths agree with each other and a dense oracle

const char* const kProductMatrices[] = {"nos1",      "epb1",   "Hummocky", "bodyy6",
                                        "lp_ken_18", "gridgena", "wathen120", "finan512",
                                        "qa8fm",     "crystm03", "vanbody",  "cfd2"};

Outcome check_product_paths() {
    std::vector<std::string> missing, notes;
    for (const char* name : kProductMatrices) {
        const auto m = data::load_or_generate(name);
        if (!m) {
            missing.push_back(name);
            continue;
        }
        if (m->synthetic) notes.push_back(std::string(name) + " generated locally");
        const DenseVector x = gen::random_vector(7, m->a.n_cols);
        if (!bitwise_equal(spmv(m->a, x), spmv(csr_to_csro(m->a), x)))
            return {false, std::string(name) + ": row-pointer and row-offset paths disagree"};
    }

    std::mt19937_64 rng(2);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n_rows = 1 + rng() % 48;
        const std::size_t n_cols = 1 + rng() % 48;
        const CsrMatrix a =
            gen::random_sparse(rng(), n_rows, n_cols, static_cast<double>(rng() % 26) / 100.0);
        const DenseVector x = gen::random_vector(rng(), n_cols);
        const DenseVector got = spmv(a, x);
        if (!bitwise_equal(got, spmv(csr_to_csro(a), x)))
            return {false, "random matrix " + std::to_string(k) + ": paths disagree"};

        const std::vector<double> want = oracle::matvec(oracle::dense_from_csr(a), x);
        double got_scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < want.size(); ++i) {
            got_scale = std::max(got_scale, std::abs(want[i]));
            diff = std::max(diff, std::abs(got[i] - want[i]));
        }
        if (diff > 1e-13 * std::max(got_scale, 1e-300))
            return {false, "random matrix " + std::to_string(k) + ": off the dense oracle"};
    }

    std::string detail = "100 random cases and " +
                         std::to_string(std::size(kProductMatrices) - missing.size()) +
                         " named matrices agreed";
    if (!notes.empty()) detail += "; " + join(notes);
    if (!missing.empty())
        return {false, "missing data files: " + join(missing) + "; " + detail};
    return {true, detail};
}

// ------------------------------------------------------------------
// 3. factorization is exact where no fill is dropped

Outcome check_factorization_exactness() {
    auto run = [](const CsrMatrix& a, std::uint64_t rhs_seed, const char* kind,
                  int k) -> Outcome {
        const IluFactors f = split_lu(ilu0_decompose(a));
        const DenseVector b = gen::random_vector(rhs_seed, a.n_rows);
        const DenseVector x = ilu0_apply(f, b);
        const double rel = recomputed_residual(a, x, b) / oracle::norm_long(b);
        if (rel > 1e-10)
            return {false, std::string(kind) + " matrix " + std::to_string(k) +
                               ": relative residual " + fmt(rel)};
        return {true, ""};
    };

    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 2 + rng() % 31;
        const CsrMatrix a = gen::random_triangular(rng(), n, k % 2 == 0,
                                                   0.2 + static_cast<double>(rng() % 40) / 100.0);
        if (Outcome o = run(a, rng(), "triangular", k); !o.pass) return o;
    }
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 2 + rng() % 31;
        if (Outcome o = run(gen::random_full_pattern(rng(), n), rng(), "full-pattern", k);
            !o.pass)
            return o;
    }
    return {true, "50 triangular and 50 full-pattern systems at 1e-10"};
}

// ------------------------------------------------------------------
// 4. reordering invariants, brute-forced against the raw pattern

Outcome check_reorder_invariants() {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 1 + rng() % 128;
        const CsrMatrix a =
            gen::random_sparse(rng(), n, n, static_cast<double>(rng() % 9) / 100.0);
        const std::string tag = "matrix " + std::to_string(k);

        // dependency levels: every strict-lower edge must point backwards,
        // and original order must survive inside a level
        const ReorderPlan ls = level_schedule(a);
        std::vector<std::size_t> level_of(n);
        for (std::size_t c = 0; c < ls.n_colors(); ++c)
            for (std::size_t p = ls.color_offsets[c]; p < ls.color_offsets[c + 1]; ++p)
                level_of[ls.inverse_permutation[p]] = c;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v) {
                const index_t j = a.col_indices[v];
                if (j < i && level_of[j] >= level_of[i])
                    return {false, tag + ": dependency points inside or past its level"};
            }
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (level_of[i] == level_of[j] && ls.permutation[i] >= ls.permutation[j])
                    return {false, tag + ": original order lost within a level"};

        // coloring: no two rows of one color may share an edge, in either
        // direction, for any seed
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const ReorderPlan gc = graph_color(a, seed);
            std::vector<std::size_t> color_of(n);
            for (std::size_t c = 0; c < gc.n_colors(); ++c)
                for (std::size_t p = gc.color_offsets[c]; p < gc.color_offsets[c + 1]; ++p)
                    color_of[gc.inverse_permutation[p]] = c;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v) {
                    const index_t j = a.col_indices[v];
                    if (j != i && color_of[i] == color_of[j])
                        return {false, tag + ", seed " + std::to_string(seed) +
                                           ": adjacent rows share a color"};
                }
        }
    }
    return {true, "200 random patterns; levels plus 5 coloring seeds each"};
}

// ------------------------------------------------------------------
// 5. the color-scheduled sweep reproduces the serial sweep bit for bit

Outcome check_colored_sweep_equality() {
    std::vector<std::string> missing, covered;
    for (const char* name : {"wathen120", "bodyy6", "crystm03"}) {
        const auto m = data::load_or_generate(name);
        if (!m) {
            missing.push_back(name);
            continue;
        }
        for (const bool use_levels : {true, false}) {
            const ReorderPlan plan = use_levels ? level_schedule(m->a) : graph_color(m->a, 1);
            const CsrMatrix ap = apply_reorder(m->a, plan);
            if (!colors_are_independent(ap, plan))
                return {false, std::string(name) + ": schedule has intra-color coupling"};
            const IluFactors f = split_lu(ilu0_decompose(ap));
            const PartitionSet parts = build_partitions(ap, plan);
            const DenseVector r = gen::random_vector(11, m->a.n_rows);
            if (!bitwise_equal(ilu0_apply(f, r), ilu0_apply_colored(f, plan, parts, r)))
                return {false, std::string(name) + (use_levels ? " (levels)" : " (colors)") +
                                   ": sweeps differ"};
        }
        covered.push_back(m->synthetic ? m->name + " (generated)" : m->name);
    }
    const std::string detail = "both schedules bit-exact on: " + join(covered);
    if (!missing.empty())
        return {false, "missing data files: " + join(missing) + "; " + detail};
    return {true, detail};
}

// ------------------------------------------------------------------
// 6/7/9. solver behavior on the benchmark set; converged runs are kept
// so the residual contract can be re-audited afterwards

struct SolveRecord {
    std::string label;
    std::shared_ptr<const CsrMatrix> a;
    DenseVector b;
    DenseVector x;
    double initial_norm = 0.0;
    double reduction = 0.0;
};

std::vector<SolveRecord> g_converged;

Outcome check_preconditioner_ordering() {
    std::vector<std::string> missing, lines;
    int idx = 0;
    for (const char* name : {"Hummocky", "bodyy6", "wathen120", "gridgena", "qa8fm"}) {
        const auto m = data::load_or_generate(name);
        ++idx;
        if (!m) {
            missing.push_back(name);
            continue;
        }
        const auto a = std::make_shared<const CsrMatrix>(m->a);
        const DenseVector x_star = gen::random_vector(100 + idx, a->n_rows);
        const DenseVector b = spmv(*a, x_star);
        const DenseVector x0(a->n_rows, 0.0);

        double iters[3] = {0, 0, 0};
        const PrecondKind kinds[3] = {PrecondKind::ilu0, PrecondKind::jacobi,
                                      PrecondKind::none};
        for (int p = 0; p < 3; ++p) {
            SolverConfig cfg;
            cfg.reduction = 1e-6;
            cfg.max_iterations = 2000;
            cfg.precond = kinds[p];
            const SolveResult res = bicgstab(*a, b, x0, cfg);
            iters[p] = res.iterations;
            if (p < 2 && !res.converged)
                return {false, std::string(name) + ": " + to_string(kinds[p]) +
                                   " did not converge in 2000 iterations"};
            if (res.converged)
                g_converged.push_back({std::string(name) + "/" + to_string(kinds[p]),
                                       a, b, res.x, res.initial_residual_norm, 1e-6});
        }
        if (!(iters[0] < iters[1] && iters[1] < iters[2]))
            return {false, std::string(name) + ": iteration counts not strictly ordered (" +
                               fmt(iters[0]) + ", " + fmt(iters[1]) +
                               ", " + fmt(iters[2]) + ")"};
        lines.push_back(m->name + " " + fmt(iters[0]) + " < " + fmt(iters[1]) +
                        " < " + fmt(iters[2]));
    }
    const std::string detail = "strictly fewer iterations per strength step: " + join(lines);
    if (!missing.empty())
        return {false, "missing data files: " + join(missing) + "; " + detail};
    return {true, detail};
}

Outcome check_iteration_counts() {
    struct Bound {
        const char* name;
        double lo, hi;
    };
    const Bound bounds[] = {{"nos1", 0.0, 1.0},     {"bodyy6", 0.0, 2.0},
                            {"crystm03", 0.0, 1.0}, {"wathen120", 0.0, 2.0},
                            {"qa8fm", 0.0, 1.5},    {"gridgena", 2.5, 6.5}};
    std::vector<std::string> missing, lines;
    for (const Bound& bd : bounds) {
        const auto m = data::load_or_generate(bd.name);
        if (!m) {
            missing.push_back(bd.name);
            continue;
        }
        const auto a = std::make_shared<const CsrMatrix>(m->a);
        const DenseVector ones(a->n_rows, 1.0);
        const DenseVector b = spmv(*a, ones);
        const DenseVector x0(a->n_rows, 0.0);
        SolverConfig cfg;
        cfg.reduction = 1e-2;
        cfg.precond = PrecondKind::ilu0;
        cfg.reorder = ReorderMethod::level_scheduling;
        const SolveResult res = bicgstab(*a, b, x0, cfg);
        if (!res.converged)
            return {false, std::string(bd.name) + ": did not converge"};
        if (res.iterations < bd.lo || res.iterations > bd.hi)
            return {false, std::string(bd.name) + ": " + fmt(res.iterations) +
                               " iterations, expected [" + fmt(bd.lo) + ", " +
                               fmt(bd.hi) + "]"};
        g_converged.push_back(
            {std::string(bd.name) + "/ilu0+levels", a, b, res.x,
             res.initial_residual_norm, 1e-2});
        lines.push_back(m->name + " " + fmt(res.iterations));
    }
    const std::string detail = "iterations in range: " + join(lines);
    if (!missing.empty())
        return {false, "missing data files: " + join(missing) + "; " + detail};
    return {true, detail};
}

Outcome check_residual_contract() {
    if (g_converged.empty())
        return {false, "no converged runs were recorded by checks 6 and 7"};
    for (const SolveRecord& rec : g_converged) {
        const double res = recomputed_residual(*rec.a, rec.x, rec.b);
        const double allowed = rec.initial_norm * rec.reduction * 1.01;
        if (res > allowed)
            return {false, rec.label + ": recomputed residual " + fmt(res) +
                               " above " + fmt(allowed)};
    }
    return {true, std::to_string(g_converged.size()) + " converged runs re-audited"};
}

// ------------------------------------------------------------------
// 8. cycle model: monotone in every resource, never below its physical
// floors, cheaper in single precision, and the sweep exposes the
// bandwidth-to-ports bottleneck handoff

std::uint64_t divup(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

Outcome check_model_properties() {
    const auto m = data::load_or_generate("wathen120");
    if (!m) return {false, "no matrix available to shape the footprints"};
    const ReorderPlan plan = graph_color(m->a, 1);
    const CsrMatrix ap = apply_reorder(m->a, plan);
    const MatrixMeta a_meta = meta_for_matrix(ap, plan);
    const IluMeta f_meta = meta_for_factors(split_lu(ilu0_decompose(ap)), plan);
    const double iters = 4.5;
    // counts behind a 4.5-iteration run, used by the floor oracles
    const std::uint64_t n_spmv = 10, n_sweep = 9, n_dot = 18, n_axpy = 29, n_norm = 10;

    PerfConfig base;
    DseGrid grid;
    grid.multipliers = {2, 4, 8, 16, 32};
    grid.bandwidths_gbps = {12.5, 25.0, 50.0, 100.0, 200.0};
    grid.internal_ports = {1, 2, 4, 8, 16};
    const std::vector<DsePoint> points = dse_sweep(a_meta, f_meta, iters, base, grid);
    if (points.size() != 125) return {false, "sweep did not cover the 5x5x5 grid"};

    auto at = [&](std::size_t im, std::size_t ib, std::size_t ip) -> const DsePoint& {
        return points[(im * 5 + ib) * 5 + ip];
    };
    for (std::size_t im = 0; im < 5; ++im)
        for (std::size_t ib = 0; ib < 5; ++ib)
            for (std::size_t ip = 0; ip < 5; ++ip) {
                const std::uint64_t here = at(im, ib, ip).estimate.total_cycles;
                if ((im + 1 < 5 && at(im + 1, ib, ip).estimate.total_cycles > here) ||
                    (ib + 1 < 5 && at(im, ib + 1, ip).estimate.total_cycles > here) ||
                    (ip + 1 < 5 && at(im, ib, ip + 1).estimate.total_cycles > here))
                    return {false, "cycles increased along a resource axis"};
            }

    const std::uint64_t nnz = a_meta.n_nonzeros;
    const std::uint64_t fnnz = f_meta.l.n_nonzeros + f_meta.u.n_nonzeros;
    const std::uint64_t n = a_meta.n_rows;
    for (const DsePoint& pt : points) {
        const PerfConfig& cfg = pt.config;
        const std::uint64_t mult = cfg.n_multipliers;
        const std::uint64_t compute_floor =
            n_spmv * divup(nnz, mult) +
            n_sweep * (divup(f_meta.l.n_nonzeros, mult) + divup(f_meta.u.n_nonzeros, mult)) +
            (n_dot + n_axpy + n_norm) * divup(n, mult);
        const double streamed_bytes =
            static_cast<double>(n_spmv * nnz + n_sweep * fnnz) *
                static_cast<double>(cfg.value_bytes + 8) +
            static_cast<double>((2 * n_dot + 2 * n_axpy + n_norm) * n) *
                static_cast<double>(cfg.value_bytes);
        const double bytes_per_cycle = cfg.ext_bandwidth_gbps * 1e9 / (cfg.clock_mhz * 1e6);
        const double cycles = static_cast<double>(pt.estimate.total_cycles);
        if (pt.estimate.total_cycles < compute_floor)
            return {false, "a grid point undercuts the compute floor"};
        if (cycles * bytes_per_cycle < streamed_bytes * (1.0 - 1e-12))
            return {false, "a grid point undercuts the bandwidth floor"};

        if (pt.bottleneck == Bottleneck::bandwidth) {
            PerfConfig narrow = cfg;
            narrow.value_bytes = 4;
            if (model_solver(a_meta, f_meta, iters, narrow).total_cycles >
                pt.estimate.total_cycles)
                return {false, "single precision costs more at a bandwidth-bound point"};
        }
    }

    PerfConfig starved;
    starved.ext_bandwidth_gbps = 1.0;
    starved.n_multipliers = 1024;
    starved.n_internal_ports = 1024;
    const std::uint64_t wide = model_solver(a_meta, f_meta, iters, starved).total_cycles;
    starved.value_bytes = 4;
    const std::uint64_t slim = model_solver(a_meta, f_meta, iters, starved).total_cycles;
    const double ratio = static_cast<double>(wide) / static_cast<double>(slim);
    if (ratio < 1.5 || ratio > 2.0)
        return {false, "double/single cycle ratio " + fmt(ratio) +
                           " outside [1.5, 2.0] when starved for bandwidth"};

    // widening the link at 8 multipliers: the label must start at the link
    // and hand off to the on-chip ports once the link saturates
    DseGrid hand;
    hand.multipliers = {8};
    hand.bandwidths_gbps = {12.5, 25.0, 50.0, 100.0, 200.0, 400.0, 800.0, 1600.0};
    hand.internal_ports = {2};
    const std::vector<DsePoint> ramp = dse_sweep(a_meta, f_meta, iters, base, hand);
    if (ramp.front().bottleneck != Bottleneck::bandwidth)
        return {false, "narrow-link point is not bandwidth limited"};
    bool handed_off = false;
    for (const DsePoint& pt : ramp) {
        if (pt.bottleneck == Bottleneck::internal_ports) handed_off = true;
        if (handed_off && pt.bottleneck == Bottleneck::bandwidth)
            return {false, "bottleneck label fell back to bandwidth after saturation"};
    }
    if (!handed_off)
        return {false, "bottleneck never moved to the internal ports"};

    return {true, "monotone on 125 grid points; floors hold; double/single ratio " +
                      fmt(ratio) + "; link saturates into the port limit"};
}

} // namespace

int main() {
    configure_threads();

    struct Check {
        int id;
        const char* name;
        Outcome (*fn)();
        double budget_s; // 0 = untimed
    };
    const Check checks[] = {
        {1, "format-round-trip", check_round_trip, 5.0},
        {2, "product-path-agreement", check_product_paths, 60.0},
        {3, "factorization-exactness", check_factorization_exactness, 10.0},
        {4, "reorder-invariants", check_reorder_invariants, 30.0},
        {5, "colored-sweep-equality", check_colored_sweep_equality, 0.0},
        {6, "preconditioner-ordering", check_preconditioner_ordering, 600.0},
        {7, "iteration-counts", check_iteration_counts, 0.0},
        {8, "datapath-model-properties", check_model_properties, 0.0},
        {9, "residual-contract", check_residual_contract, 0.0},
    };

    int failures = 0;
    for (const Check& c : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (out.pass && c.budget_s > 0.0 && secs > c.budget_s) {
            out.pass = false;
            out.detail = "over the " + fmt(c.budget_s) + " s budget; " + out.detail;
        }
        if (!out.pass) ++failures;
        std::printf("[%s] %d %-26s (%.1fs)%s%s\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                    secs, out.detail.empty() ? "" : ": ", out.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
