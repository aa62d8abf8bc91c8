#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "solverkit/csr.hpp"
#include "solverkit/reorder.hpp"
#include "solverkit/types.hpp"

namespace solverkit {

enum class PrecondKind { none, jacobi, ilu0 };

const char* to_string(PrecondKind p);

enum class SolveStatus {
    converged,
    max_iterations,
    breakdown_rho,   // dot(r0*, r) vanished
    breakdown_alpha, // dot(r0*, A p) vanished
    breakdown_omega, // dot(t, t) vanished
};

const char* to_string(SolveStatus s);

struct SolverConfig {
    // Exit when ||r|| <= ||r0|| * reduction, or <= absolute_threshold if set.
    double reduction = 1e-2;
    std::optional<double> absolute_threshold;
    std::size_t max_iterations = 1000;
    PrecondKind precond = PrecondKind::none;
    ReorderMethod reorder = ReorderMethod::none;
    std::uint64_t seed = 0;            // graph coloring weight stream
    std::size_t max_rows_per_color = 0; // 0 = unlimited
};

struct SolveResult {
    DenseVector x;
    SolveStatus status = SolveStatus::max_iterations;
    bool converged = false;
    // Counted in halves: the second preconditioner/SpMV pair of a BiCGStab
    // iteration can be skipped when the first already converged, so 4.5 means
    // four full sweeps plus the leading half of the fifth.
    double iterations = 0.0;
    double initial_residual_norm = 0.0;
    double final_residual_norm = 0.0;
    double threshold = 0.0;
    // residual norm before the loop and after every half iteration
    std::vector<double> residual_history;
    double setup_ms = 0.0;
    double solve_ms = 0.0;
    std::size_t n_colors = 0; // colors of the reorder plan; 0 without one
};

// Preconditioned BiCGStab on A x = b starting from x0. Reordering, when
// requested, happens inside: the system is permuted, solved, and the solution
// permuted back, so the caller always works in original row numbering.
SolveResult bicgstab(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                     const SolverConfig& cfg);

// Solves the same system under no reordering, level scheduling and graph
// coloring, and reports how far the three solutions drift apart.
struct ConsistencyReport {
    SolveResult none;
    SolveResult level;
    SolveResult color;
    double max_rel_difference = 0.0;
};

ConsistencyReport solve_reordered_consistency(const CsrMatrix& a, const DenseVector& b,
                                              const DenseVector& x0,
                                              const SolverConfig& cfg);

} // namespace solverkit
