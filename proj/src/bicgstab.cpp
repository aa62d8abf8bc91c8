#include "solverkit/bicgstab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>

#include "solverkit/error.hpp"
#include "solverkit/kernels.hpp"
#include "solverkit/precond.hpp"

namespace solverkit {

const char* to_string(PrecondKind p) {
    switch (p) {
    case PrecondKind::none: return "none";
    case PrecondKind::jacobi: return "jacobi";
    case PrecondKind::ilu0: return "ilu0";
    }
    return "?";
}

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::breakdown_rho: return "breakdown_rho";
    case SolveStatus::breakdown_alpha: return "breakdown_alpha";
    case SolveStatus::breakdown_omega: return "breakdown_omega";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void validate_config(const SolverConfig& cfg) {
    if (!cfg.absolute_threshold && !(cfg.reduction > 0.0 && cfg.reduction < 1.0))
        throw Error("reduction must lie in (0, 1), got " + std::to_string(cfg.reduction));
    if (cfg.absolute_threshold && !(*cfg.absolute_threshold > 0.0))
        throw Error("absolute threshold must be positive");
    if (cfg.max_iterations == 0) throw Error("max_iterations must be at least 1");
}

using Apply = std::function<DenseVector(const DenseVector&)>;

// The iteration itself, independent of how the operands were prepared.
SolveResult run_bicgstab(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                         const SolverConfig& cfg, const Apply& precondition) {
    SolveResult res;
    res.x = x0;

    DenseVector r = b;
    {
        const DenseVector ax0 = spmv(a, x0);
        axpy(-1.0, ax0, r);
    }
    double rnorm = norm(r);
    res.initial_residual_norm = rnorm;
    res.threshold =
        cfg.absolute_threshold ? *cfg.absolute_threshold : rnorm * cfg.reduction;
    res.residual_history.push_back(rnorm);
    res.final_residual_norm = rnorm;
    if (rnorm <= res.threshold) {
        res.status = SolveStatus::converged;
        res.converged = true;
        return res;
    }

    const DenseVector rt = r; // shadow residual, fixed at r0
    DenseVector p(b.size(), 0.0), v(b.size(), 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;

    for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
        const double rho_new = dot(rt, r);
        if (rho_new == 0.0) {
            res.status = SolveStatus::breakdown_rho;
            return res;
        }
        if (k == 0) {
            p = r;
        } else {
            const double beta = (rho_new / rho) * (alpha / omega);
            xpby_minus_gamma(r, beta, p, omega, v, p);
        }
        const DenseVector y = precondition(p);
        v = spmv(a, y);
        const double rtv = dot(rt, v);
        if (rtv == 0.0) {
            res.status = SolveStatus::breakdown_alpha;
            return res;
        }
        alpha = rho_new / rtv;
        axpy(alpha, y, res.x);
        axpy(-alpha, v, r);
        res.iterations += 0.5;
        rnorm = norm(r);
        res.residual_history.push_back(rnorm);
        res.final_residual_norm = rnorm;
        if (rnorm <= res.threshold) {
            res.status = SolveStatus::converged;
            res.converged = true;
            return res;
        }

        const DenseVector z = precondition(r);
        const DenseVector t = spmv(a, z);
        const double tt = dot(t, t);
        if (tt == 0.0) {
            res.status = SolveStatus::breakdown_omega;
            return res;
        }
        omega = dot(t, r) / tt;
        axpy(omega, z, res.x);
        axpy(-omega, t, r);
        res.iterations += 0.5;
        rnorm = norm(r);
        res.residual_history.push_back(rnorm);
        res.final_residual_norm = rnorm;
        if (rnorm <= res.threshold) {
            res.status = SolveStatus::converged;
            res.converged = true;
            return res;
        }
        rho = rho_new;
    }
    res.status = SolveStatus::max_iterations;
    return res;
}

} // namespace

SolveResult bicgstab(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                     const SolverConfig& cfg) {
    validate_config(cfg);
    if (a.n_rows != a.n_cols)
        throw DimensionError("solver needs a square matrix, got " + std::to_string(a.n_rows) +
                             "x" + std::to_string(a.n_cols));
    if (b.size() != a.n_rows) throw DimensionError("rhs length does not match the matrix");
    if (x0.size() != a.n_rows) throw DimensionError("x0 length does not match the matrix");

    const auto t_setup = Clock::now();

    // Prepare the (possibly permuted) system.
    std::optional<ReorderPlan> plan;
    switch (cfg.reorder) {
    case ReorderMethod::none: break;
    case ReorderMethod::level_scheduling: plan = level_schedule(a); break;
    case ReorderMethod::graph_coloring:
        plan = graph_color(a, cfg.seed, cfg.max_rows_per_color);
        break;
    }

    CsrMatrix permuted;
    const CsrMatrix& sys = plan ? (permuted = apply_reorder(a, *plan)) : a;
    const DenseVector rhs = plan ? apply_reorder_vector(b, *plan) : b;
    const DenseVector start = plan ? apply_reorder_vector(x0, *plan) : x0;

    // Preconditioner setup. The colored ILU0 sweeps need every color to be an
    // independent set of the full pattern; level schedules only guarantee the
    // lower triangle, so unsymmetric patterns fall back to serial sweeps.
    Apply precondition;
    IluFactors factors;
    PartitionSet parts;
    JacobiPrecond jacobi;
    switch (cfg.precond) {
    case PrecondKind::none:
        precondition = [](const DenseVector& q) { return q; };
        break;
    case PrecondKind::jacobi:
        jacobi = make_jacobi(sys);
        precondition = [&jacobi](const DenseVector& q) { return solverkit::apply(jacobi, q); };
        break;
    case PrecondKind::ilu0: {
        factors = split_lu(ilu0_decompose(sys));
        const bool colored = plan && colors_are_independent(sys, *plan);
        if (colored) {
            parts = build_partitions(sys, *plan);
            const ReorderPlan& p = *plan;
            precondition = [&factors, &p, &parts](const DenseVector& q) {
                return ilu0_apply_colored(factors, p, parts, q);
            };
        } else {
            precondition = [&factors](const DenseVector& q) {
                return ilu0_apply(factors, q);
            };
        }
        break;
    }
    }

    const double setup_ms = ms_since(t_setup);
    const auto t_solve = Clock::now();
    SolveResult res = run_bicgstab(sys, rhs, start, cfg, precondition);
    res.solve_ms = ms_since(t_solve);
    res.setup_ms = setup_ms;
    if (plan) {
        res.x = apply_reorder_vector_inverse(res.x, *plan);
        res.n_colors = plan->n_colors();
    }
    return res;
}

ConsistencyReport solve_reordered_consistency(const CsrMatrix& a, const DenseVector& b,
                                              const DenseVector& x0,
                                              const SolverConfig& cfg) {
    ConsistencyReport rep;
    SolverConfig c = cfg;
    c.reorder = ReorderMethod::none;
    rep.none = bicgstab(a, b, x0, c);
    c.reorder = ReorderMethod::level_scheduling;
    rep.level = bicgstab(a, b, x0, c);
    c.reorder = ReorderMethod::graph_coloring;
    rep.color = bicgstab(a, b, x0, c);

    const auto inf_norm = [](const DenseVector& v) {
        double m = 0.0;
        for (double d : v) m = std::max(m, std::abs(d));
        return m;
    };
    const auto rel_diff = [&](const DenseVector& u, const DenseVector& v) {
        double num = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            num = std::max(num, std::abs(u[i] - v[i]));
        return num / std::max({inf_norm(u), inf_norm(v), 1e-30});
    };
    rep.max_rel_difference =
        std::max({rel_diff(rep.none.x, rep.level.x), rel_diff(rep.none.x, rep.color.x),
                  rel_diff(rep.level.x, rep.color.x)});
    return rep;
}

} // namespace solverkit
