#pragma once

#include "solverkit/csr.hpp"
#include "solverkit/types.hpp"

namespace solverkit {

// Kernels used by the solver. spmv and the elementwise updates run with
// OpenMP across rows/elements; each row (or element) keeps its serial
// left-to-right accumulation, so results are bit-identical to the reference
// implementations below. Reductions (dot, norm) stay sequential here because
// the solver's convergence history is defined by serial accumulation order;
// a parallel reduction lives in kernels::par for benchmarking.

DenseVector spmv(const CsrMatrix& a, const DenseVector& x);
void spmv_into(const CsrMatrix& a, const DenseVector& x, DenseVector& y);

// Streaming traversal of the offset format: one pass over values, columns and
// offsets, advancing the row cursor as offsets dictate. Matches the CSR path
// bit for bit because per-row accumulation order is identical.
DenseVector spmv(const CsroMatrix& a, const DenseVector& x);

double dot(const DenseVector& x, const DenseVector& y);
double norm(const DenseVector& x);

// y := alpha*x + y, elementwise in parallel
void axpy(double alpha, const DenseVector& x, DenseVector& y);
// out := x + beta*(p - omega*v), the BiCGStab direction update
void xpby_minus_gamma(const DenseVector& x, double beta, const DenseVector& p,
                      double omega, const DenseVector& v, DenseVector& out);

namespace ref {
// Serial reference kernels, kept for testing and as the benchmark baseline.
DenseVector spmv(const CsrMatrix& a, const DenseVector& x);
double dot(const DenseVector& x, const DenseVector& y);
double norm(const DenseVector& x);
void axpy(double alpha, const DenseVector& x, DenseVector& y);
} // namespace ref

namespace par {
// OpenMP reduction; accumulation order differs from ref::dot, so this is
// benchmark material, not a solver kernel.
double dot(const DenseVector& x, const DenseVector& y);
} // namespace par

} // namespace solverkit
