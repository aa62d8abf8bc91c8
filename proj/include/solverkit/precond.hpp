#pragma once

#include "solverkit/csr.hpp"
#include "solverkit/reorder.hpp"
#include "solverkit/sparstition.hpp"
#include "solverkit/types.hpp"

namespace solverkit {

// Zero fill-in incomplete LU factors split for the two triangular sweeps.
// l holds the strictly lower part (unit diagonal implicit). The upper part is
// stored with its rows reversed: u_reversed row k is original row n-1-k, and
// diag_reversed[k] is that row's pivot. The backward sweep then walks rows
// front to back, which is the streaming order the offset format wants.
struct IluFactors {
    std::size_t n = 0;
    CsrMatrix l;
    CsrMatrix u_reversed;
    DenseVector diag_reversed;
};

// Factorises within the sparsity pattern of a (no fill-in), returning L and U
// packed into one matrix with A's pattern: multipliers below the diagonal,
// the remaining U on and above it. Throws MissingDiagonalError when a row
// lacks a structural diagonal and ZeroPivotError when a pivot is zero (or too
// small to divide by safely).
CsrMatrix ilu0_decompose(const CsrMatrix& a);

// Splits a packed factorisation into sweep-ready parts.
IluFactors split_lu(const CsrMatrix& lu);

// x = U^-1 L^-1 r via forward then backward substitution. Per row, terms are
// accumulated in ascending column order; that order is the contract the
// colored variant reproduces bit for bit.
DenseVector ilu0_apply(const IluFactors& f, const DenseVector& r);

// Same sweeps, processed color by color: rows inside a color have no edges
// between them, so each color is a parallel loop. The forward sweep walks
// colors in plan order, the backward sweep in reverse. Vector data is pulled
// through the per-color partitions the way the streaming hardware would.
DenseVector ilu0_apply_colored(const IluFactors& f, const ReorderPlan& plan,
                               const PartitionSet& parts, const DenseVector& r);

struct JacobiPrecond {
    DenseVector inverse_diag;
};

JacobiPrecond make_jacobi(const CsrMatrix& a);
DenseVector apply(const JacobiPrecond& p, const DenseVector& r);

} // namespace solverkit
