#include "solverkit/precond.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>

#include "solverkit/error.hpp"

namespace solverkit {

namespace {

// Pivots this small would overflow the substitution; treat them as zero.
constexpr double kPivotFloor = 1e-300;

std::vector<std::size_t> diagonal_positions(const CsrMatrix& a) {
    std::vector<std::size_t> pos(a.n_rows);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        bool found = false;
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v) {
            if (a.col_indices[v] == i) {
                pos[i] = v;
                found = true;
                break;
            }
            if (a.col_indices[v] > i) break;
        }
        if (!found) throw MissingDiagonalError(i);
    }
    return pos;
}

void check_pivot(double pivot, std::size_t row) {
    if (!(std::abs(pivot) >= kPivotFloor)) throw ZeroPivotError(row);
}

void check_square(const CsrMatrix& a, const char* what) {
    if (a.n_rows != a.n_cols)
        throw DimensionError(std::string(what) + " needs a square matrix, got " +
                             std::to_string(a.n_rows) + "x" + std::to_string(a.n_cols));
}

} // namespace

CsrMatrix ilu0_decompose(const CsrMatrix& a) {
    check_square(a, "ilu0_decompose");
    a.validate();
    CsrMatrix lu = a;
    const auto diag_pos = diagonal_positions(lu);

    for (std::size_t i = 0; i < lu.n_rows; ++i) {
        const std::size_t row_end = lu.row_pointers[i + 1];
        for (std::size_t v = lu.row_pointers[i]; v < row_end; ++v) {
            const index_t k = lu.col_indices[v];
            if (k >= i) break;
            const double pivot = lu.values[diag_pos[k]];
            check_pivot(pivot, k);
            const double factor = lu.values[v] / pivot;
            lu.values[v] = factor;
            // row_i := row_i - factor * row_k, restricted to row_i's pattern
            // right of column k; both rows are column-sorted, so a merge walk
            // finds the overlapping entries.
            std::size_t p = v + 1;
            std::size_t q = diag_pos[k] + 1;
            const std::size_t k_end = lu.row_pointers[k + 1];
            while (p < row_end && q < k_end) {
                if (lu.col_indices[p] == lu.col_indices[q]) {
                    lu.values[p] -= factor * lu.values[q];
                    ++p;
                    ++q;
                } else if (lu.col_indices[p] < lu.col_indices[q]) {
                    ++p;
                } else {
                    ++q;
                }
            }
        }
        check_pivot(lu.values[diag_pos[i]], i);
    }
    return lu;
}

IluFactors split_lu(const CsrMatrix& lu) {
    check_square(lu, "split_lu");
    lu.validate();
    const auto diag_pos = diagonal_positions(lu);
    const std::size_t n = lu.n_rows;

    IluFactors f;
    f.n = n;
    f.l.n_rows = f.l.n_cols = n;
    f.l.row_pointers.assign(n + 1, 0);
    f.u_reversed.n_rows = f.u_reversed.n_cols = n;
    f.u_reversed.row_pointers.assign(n + 1, 0);
    f.diag_reversed.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v = lu.row_pointers[i]; v < diag_pos[i]; ++v) {
            f.l.values.push_back(lu.values[v]);
            f.l.col_indices.push_back(lu.col_indices[v]);
        }
        f.l.row_pointers[i + 1] = f.l.values.size();
    }
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = n - 1 - k;
        f.diag_reversed[k] = lu.values[diag_pos[i]];
        for (std::size_t v = diag_pos[i] + 1; v < lu.row_pointers[i + 1]; ++v) {
            f.u_reversed.values.push_back(lu.values[v]);
            f.u_reversed.col_indices.push_back(lu.col_indices[v]);
        }
        f.u_reversed.row_pointers[k + 1] = f.u_reversed.values.size();
    }
    return f;
}

DenseVector ilu0_apply(const IluFactors& f, const DenseVector& r) {
    if (r.size() != f.n)
        throw DimensionError("rhs has length " + std::to_string(r.size()) + ", expected " +
                             std::to_string(f.n));
    const std::size_t n = f.n;

    // forward: L y = r, unit diagonal
    DenseVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = r[i];
        for (std::size_t v = f.l.row_pointers[i]; v < f.l.row_pointers[i + 1]; ++v)
            s -= f.l.values[v] * y[f.l.col_indices[v]];
        y[i] = s;
    }

    // backward: U x = y, rows streamed in reversed storage order
    DenseVector x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = n - 1 - k;
        double s = y[i];
        for (std::size_t v = f.u_reversed.row_pointers[k]; v < f.u_reversed.row_pointers[k + 1];
             ++v)
            s -= f.u_reversed.values[v] * x[f.u_reversed.col_indices[v]];
        x[i] = s / f.diag_reversed[k];
    }
    return x;
}

DenseVector ilu0_apply_colored(const IluFactors& f, const ReorderPlan& plan,
                               const PartitionSet& parts, const DenseVector& r) {
    if (r.size() != f.n)
        throw DimensionError("rhs has length " + std::to_string(r.size()) + ", expected " +
                             std::to_string(f.n));
    if (plan.n_rows() != f.n) throw DimensionError("plan does not match factors");
    if (parts.n_colors() != plan.n_colors())
        throw DimensionError("partition set does not match plan");
    const std::size_t n = f.n;
    const std::size_t n_colors = plan.n_colors();

    // forward: colors in plan order; rows of one color share no edges, so the
    // y values they read were all written by earlier colors
    std::atomic<bool> missing{false}; // a factor column absent from its partition
    DenseVector y(n);
    for (std::size_t c = 0; c < n_colors; ++c) {
        const auto& part = parts.vector_indices[c];
        const DenseVector local = gather(y, part);
        const std::int64_t begin = static_cast<std::int64_t>(plan.color_offsets[c]);
        const std::int64_t end = static_cast<std::int64_t>(plan.color_offsets[c + 1]);
        std::atomic<bool> dependent{false}; // a row reads its own color's output
#pragma omp parallel for schedule(static)
        for (std::int64_t i = begin; i < end; ++i) {
            double s = r[i];
            for (std::size_t v = f.l.row_pointers[i]; v < f.l.row_pointers[i + 1]; ++v) {
                const index_t col = f.l.col_indices[v];
                if (col >= static_cast<std::size_t>(begin)) {
                    dependent = true;
                    continue;
                }
                const std::size_t slot = find_index(part, col);
                if (slot == npos) {
                    missing = true;
                    continue;
                }
                s -= f.l.values[v] * local[slot];
            }
            y[i] = s;
        }
        if (dependent)
            throw StructureError("color " + std::to_string(c) +
                                 " is not independent in the lower factor");
        if (missing)
            throw StructureError("partition for color " + std::to_string(c) +
                                 " does not cover the factor columns");
    }

    // backward: colors in reverse; a row only reads columns right of itself,
    // which live in later colors and are already final
    DenseVector x(n);
    for (std::size_t c = n_colors; c-- > 0;) {
        const auto& part = parts.vector_indices[c];
        const DenseVector local = gather(x, part);
        const std::int64_t begin = static_cast<std::int64_t>(plan.color_offsets[c]);
        const std::int64_t end = static_cast<std::int64_t>(plan.color_offsets[c + 1]);
        std::atomic<bool> dependent{false};
#pragma omp parallel for schedule(static)
        for (std::int64_t i = begin; i < end; ++i) {
            const std::size_t k = n - 1 - static_cast<std::size_t>(i);
            double s = y[i];
            for (std::size_t v = f.u_reversed.row_pointers[k];
                 v < f.u_reversed.row_pointers[k + 1]; ++v) {
                const index_t col = f.u_reversed.col_indices[v];
                if (col < static_cast<std::size_t>(end)) {
                    dependent = true;
                    continue;
                }
                const std::size_t slot = find_index(part, col);
                if (slot == npos) {
                    missing = true;
                    continue;
                }
                s -= f.u_reversed.values[v] * local[slot];
            }
            x[i] = s / f.diag_reversed[k];
        }
        if (dependent)
            throw StructureError("color " + std::to_string(c) +
                                 " is not independent in the upper factor");
        if (missing)
            throw StructureError("partition for color " + std::to_string(c) +
                                 " does not cover the factor columns");
    }
    return x;
}

JacobiPrecond make_jacobi(const CsrMatrix& a) {
    check_square(a, "make_jacobi");
    a.validate();
    const auto diag_pos = diagonal_positions(a);
    JacobiPrecond p;
    p.inverse_diag.resize(a.n_rows);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        const double d = a.values[diag_pos[i]];
        check_pivot(d, i);
        p.inverse_diag[i] = 1.0 / d;
    }
    return p;
}

DenseVector apply(const JacobiPrecond& p, const DenseVector& r) {
    if (r.size() != p.inverse_diag.size())
        throw DimensionError("rhs length does not match the diagonal");
    DenseVector out(r.size());
    const std::int64_t n = static_cast<std::int64_t>(r.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[i] = r[i] * p.inverse_diag[i];
    return out;
}

} // namespace solverkit
